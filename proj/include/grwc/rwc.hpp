#ifndef GRWC_RWC_HPP
#define GRWC_RWC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "grwc/curve.hpp"
#include "grwc/net.hpp"
#include "grwc/rng.hpp"

namespace grwc {

struct RwcConfig {
    double lambda = 0.05;              // perturbation bound; deltas live in [-lambda, lambda]
    std::uint64_t max_iterations = 1;  // iteration budget
    double target_error = 0.01;        // stop once the dataset cost reaches this
    std::uint64_t record_stride = 100; // curve recording interval

    // throws std::invalid_argument naming the offending field; lambda = 0 is
    // allowed as the degenerate no-perturbation case
    void validate() const;
};

// One optimizer: current weights, the deltas in flight, the cost of the
// weights as of the last evaluation, and how many steps have run.
struct RwcState {
    WeightSet weights;
    DeltaSet deltas;
    double last_cost = 0.0;
    std::uint64_t iteration = 0;
};

// Raised when a cost evaluation goes non-finite; carries the step index.
class NumericError : public std::runtime_error {
public:
    NumericError(std::uint64_t iteration, const std::string& message)
        : std::runtime_error(message), iteration_(iteration) {}

    std::uint64_t iteration() const { return iteration_; }

private:
    std::uint64_t iteration_;
};

// Draws every weight and delta entry independently as lambda * u with u
// uniform on [-1, 1); dtheta1 is filled row-major before dtheta2, which is
// part of the contract so tests can replay the stream. last_cost is the
// dataset cost of the fresh weights at iteration 0.
RwcState rwc_init(const NetworkTopology& topology, const Dataset& data,
                  const RwcConfig& config, Rng& rng);

// One transition: apply weights += deltas, evaluate the new dataset cost,
// retain the deltas if the cost strictly decreased and resample every entry
// otherwise, then store the new cost and advance the iteration counter.
// Both layers are retained or resampled together on the single scalar
// comparison. Throws NumericError if the evaluated cost is non-finite.
void rwc_step(const NetworkTopology& topology, RwcState& state, const Dataset& data,
              const RwcConfig& config, Rng& rng);

struct RwcResult {
    RwcState state;
    ErrorCurve curve;
    bool converged = false;           // last_cost reached target_error within budget
    double best_cost = 0.0;           // lowest cost ever evaluated, iteration 0 included
    std::uint64_t best_iteration = 0; // step at which best_cost was first seen
};

// Runs rwc_step until last_cost <= target_error or the budget is spent.
// The curve records (iteration, last_cost) at iteration 0, every
// record_stride steps, and at the final step.
RwcResult rwc_train(const NetworkTopology& topology, const Dataset& data,
                    const RwcConfig& config, std::uint64_t seed);

} // namespace grwc

#endif
