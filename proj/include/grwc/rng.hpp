#ifndef GRWC_RNG_HPP
#define GRWC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace grwc {

// Deterministic random stream. Draw routines are hand-rolled on top of the
// raw 64-bit engine output so that sequences are identical across standard
// library implementations. Copyable, which lets tests replay a stream to
// predict exactly what an optimizer drew.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0, 1)
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform on [-1, 1)
    double symmetric() { return 2.0 * unit() - 1.0; }

    // standard normal via the Marsaglia polar method
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0, v = 0.0, s = 0.0;
        do {
            u = symmetric();
            v = symmetric();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double k = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * k;
        has_spare_ = true;
        return u * k;
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fixed stream-splitting rule: one independent stream per (master seed,
// candidate, round). Round 0 is initialization; round g is the g-th
// generation of mutation steps. Results are therefore independent of
// candidate evaluation order and thread count.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t candidate, std::uint64_t round) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ candidate);
    s = splitmix64(s ^ round);
    return s;
}

} // namespace grwc

#endif
