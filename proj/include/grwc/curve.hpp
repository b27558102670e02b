#ifndef GRWC_CURVE_HPP
#define GRWC_CURVE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace grwc {

struct CurvePoint {
    std::uint64_t iteration = 0;
    double cost = 0.0;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

// Sequence of (iteration, cost) records. Iterations are strictly increasing
// and costs finite; append enforces both.
class ErrorCurve {
public:
    void append(std::uint64_t iteration, double cost) {
        if (!points_.empty() && iteration <= points_.back().iteration) {
            throw std::logic_error("ErrorCurve: iterations must be strictly increasing");
        }
        if (!std::isfinite(cost)) {
            throw std::logic_error("ErrorCurve: cost must be finite");
        }
        points_.push_back({iteration, cost});
    }

    const std::vector<CurvePoint>& points() const { return points_; }
    bool empty() const { return points_.empty(); }
    const CurvePoint& back() const { return points_.back(); }

    friend bool operator==(const ErrorCurve&, const ErrorCurve&) = default;

private:
    std::vector<CurvePoint> points_;
};

} // namespace grwc

#endif
