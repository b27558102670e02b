#ifndef GRWC_GRWC_HPP
#define GRWC_GRWC_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "grwc/curve.hpp"
#include "grwc/net.hpp"
#include "grwc/rwc.hpp"

namespace grwc {

struct GrwcConfig {
    std::size_t population_size = 8;            // must be even, >= 2
    std::uint64_t epochs_per_generation = 1000; // steps per candidate between selections
    double lambda = 0.05;
    double target_error = 0.01;
    std::uint64_t max_candidate_iterations = 500000; // per-candidate budget
    std::uint64_t record_stride = 100;
    unsigned threads = 1; // candidate evaluation threads; result is thread-count independent

    void validate() const;

    // the per-candidate step configuration
    RwcConfig rwc() const;
};

struct Candidate {
    std::size_t index = 0;
    RwcState state;
};

struct Population {
    std::vector<Candidate> candidates;
    std::uint64_t generation = 0;
    // running minimum over every cost evaluated so far, mid-generation included
    double best_cost_ever = 0.0;
};

// N candidates, each drawn from its own stream_seed(master_seed, i, 0)
// stream; generation = 0; best_cost_ever is the minimum initial cost.
Population grwc_init(const NetworkTopology& topology, const Dataset& data,
                     const GrwcConfig& config, std::uint64_t master_seed);

// Indices of the two smallest costs; ties break toward the lower index.
std::pair<std::size_t, std::size_t> select_best_two(const std::vector<double>& costs);

// First half of the population receives deep copies of candidate index_1's
// weights, deltas and last_cost; second half receives candidate index_2's.
// Throws std::invalid_argument on out-of-range or equal indices.
void copy_reproduce(Population& population, std::size_t index_1, std::size_t index_2);

// One full generation: every candidate advances epochs_per_generation steps
// on its stream_seed(master_seed, i, generation+1) stream, best_cost_ever
// absorbs every cost evaluated, then the best two are selected and copied
// over the population. Numeric errors are rethrown with the candidate index
// attached.
void run_generation(const NetworkTopology& topology, Population& population,
                    const Dataset& data, const GrwcConfig& config, std::uint64_t master_seed);

enum class GrwcOutcome { converged, budget_exhausted };

struct GrwcResult {
    Population population;
    ErrorCurve curve;
    GrwcOutcome outcome = GrwcOutcome::budget_exhausted;
    double best_cost = 0.0;
    // per-candidate step index at which the target was first crossed
    // (meaningful when converged)
    std::uint64_t iterations_to_target = 0;
    // per-candidate steps actually executed (candidates advance in lockstep)
    std::uint64_t per_candidate_iterations = 0;
};

// Repeats generations until best_cost_ever <= target_error or the
// per-candidate budget is exhausted. Convergence is checked at every
// record_stride barrier, not just at generation boundaries, and the
// reported crossing iteration is the exact step at which some candidate
// touched the target. The curve records the population-minimum cost at
// each barrier.
GrwcResult grwc_train(const NetworkTopology& topology, const Dataset& data,
                      const GrwcConfig& config, std::uint64_t master_seed);

} // namespace grwc

#endif
