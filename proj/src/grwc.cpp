#include "grwc/grwc.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "grwc/rng.hpp"

namespace grwc {

void GrwcConfig::validate() const {
    if (population_size < 2 || population_size % 2 != 0) {
        throw std::invalid_argument("config: population_size must be even and >= 2");
    }
    if (epochs_per_generation < 1) {
        throw std::invalid_argument("config: epochs_per_generation must be >= 1");
    }
    if (max_candidate_iterations < 1) {
        throw std::invalid_argument("config: max_candidate_iterations must be >= 1");
    }
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    rwc().validate();
}

RwcConfig GrwcConfig::rwc() const {
    RwcConfig cfg;
    cfg.lambda = lambda;
    cfg.max_iterations = max_candidate_iterations;
    cfg.target_error = target_error;
    cfg.record_stride = record_stride;
    return cfg;
}

Population grwc_init(const NetworkTopology& topology, const Dataset& data,
                     const GrwcConfig& config, std::uint64_t master_seed) {
    topology.validate();
    config.validate();
    const RwcConfig step_cfg = config.rwc();
    Population population;
    population.candidates.reserve(config.population_size);
    population.best_cost_ever = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < config.population_size; ++i) {
        Rng rng(stream_seed(master_seed, i, 0));
        Candidate c;
        c.index = i;
        c.state = rwc_init(topology, data, step_cfg, rng);
        population.best_cost_ever = std::min(population.best_cost_ever, c.state.last_cost);
        population.candidates.push_back(std::move(c));
    }
    population.generation = 0;
    return population;
}

std::pair<std::size_t, std::size_t> select_best_two(const std::vector<double>& costs) {
    if (costs.size() < 2) {
        throw std::invalid_argument("select_best_two: need at least two costs");
    }
    std::size_t first = 0;
    for (std::size_t i = 1; i < costs.size(); ++i) {
        if (costs[i] < costs[first]) first = i;
    }
    std::size_t second = first == 0 ? 1 : 0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (i == first) continue;
        if (costs[i] < costs[second]) second = i;
    }
    return {first, second};
}

void copy_reproduce(Population& population, std::size_t index_1, std::size_t index_2) {
    const std::size_t n = population.candidates.size();
    if (index_1 >= n || index_2 >= n) {
        throw std::invalid_argument("copy_reproduce: source index out of range");
    }
    if (index_1 == index_2) {
        throw std::invalid_argument("copy_reproduce: source indices must be distinct");
    }
    // take copies first; a source slot may sit in the half being overwritten
    const RwcState best = population.candidates[index_1].state;
    const RwcState runner_up = population.candidates[index_2].state;
    for (std::size_t i = 0; i < n; ++i) {
        const RwcState& src = i < n / 2 ? best : runner_up;
        RwcState& dst = population.candidates[i].state;
        dst.weights = src.weights;
        dst.deltas = src.deltas;
        dst.last_cost = src.last_cost;
    }
}

namespace {

struct SegmentStats {
    double min_cost = std::numeric_limits<double>::infinity();
    std::optional<std::uint64_t> first_crossing; // candidate iteration at the crossing step
};

// Advances every candidate `steps` rwc_steps on its own stream. Candidates
// are independent between barriers, so any thread assignment produces
// bit-identical results; reductions afterwards run in index order.
void advance_segment(const NetworkTopology& topology, std::vector<Candidate>& candidates,
                     std::vector<Rng>& streams, const Dataset& data, const RwcConfig& step_cfg,
                     std::uint64_t steps, double target_error, unsigned threads,
                     std::vector<SegmentStats>& stats) {
    const std::size_t n = candidates.size();
    stats.assign(n, SegmentStats{});
    std::vector<std::exception_ptr> failures(n);

    auto work = [&](std::size_t i) {
        Candidate& c = candidates[i];
        SegmentStats& s = stats[i];
        try {
            for (std::uint64_t k = 0; k < steps; ++k) {
                rwc_step(topology, c.state, data, step_cfg, streams[i]);
                if (c.state.last_cost < s.min_cost) s.min_cost = c.state.last_cost;
                if (!s.first_crossing && c.state.last_cost <= target_error) {
                    s.first_crossing = c.state.iteration;
                }
            }
        } catch (...) {
            failures[i] = std::current_exception();
        }
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) work(i);
            });
        }
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const NumericError& e) {
            throw NumericError(e.iteration(), "candidate " + std::to_string(i) + ": " + e.what());
        }
    }
}

void apply_selection(Population& population) {
    std::vector<double> costs;
    costs.reserve(population.candidates.size());
    for (const Candidate& c : population.candidates) costs.push_back(c.state.last_cost);
    const auto [first, second] = select_best_two(costs);
    copy_reproduce(population, first, second);
}

std::vector<Rng> generation_streams(std::uint64_t master_seed, std::size_t n, std::uint64_t generation) {
    std::vector<Rng> streams;
    streams.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        streams.emplace_back(stream_seed(master_seed, i, generation));
    }
    return streams;
}

} // namespace

void run_generation(const NetworkTopology& topology, Population& population,
                    const Dataset& data, const GrwcConfig& config, std::uint64_t master_seed) {
    config.validate();
    const std::size_t n = population.candidates.size();
    if (n != config.population_size) {
        throw std::invalid_argument("run_generation: population size does not match config");
    }
    std::vector<Rng> streams = generation_streams(master_seed, n, population.generation + 1);
    std::vector<SegmentStats> stats;
    advance_segment(topology, population.candidates, streams, data, config.rwc(),
                    config.epochs_per_generation, config.target_error, config.threads, stats);
    population.generation += 1;
    for (const SegmentStats& s : stats) {
        population.best_cost_ever = std::min(population.best_cost_ever, s.min_cost);
    }
    apply_selection(population);
}

GrwcResult grwc_train(const NetworkTopology& topology, const Dataset& data,
                      const GrwcConfig& config, std::uint64_t master_seed) {
    validate_dataset(topology, data);
    GrwcResult result;
    result.population = grwc_init(topology, data, config, master_seed);
    Population& population = result.population;
    const std::size_t n = config.population_size;
    const RwcConfig step_cfg = config.rwc();

    result.curve.append(0, population.best_cost_ever);
    if (population.best_cost_ever <= config.target_error) {
        result.outcome = GrwcOutcome::converged;
        result.best_cost = population.best_cost_ever;
        result.iterations_to_target = 0;
        result.per_candidate_iterations = 0;
        return result;
    }

    std::uint64_t epochs_done = 0; // per candidate; all candidates advance in lockstep
    std::vector<SegmentStats> stats;
    bool done = false;
    while (!done) {
        std::vector<Rng> streams = generation_streams(master_seed, n, population.generation + 1);
        std::uint64_t left_in_generation = config.epochs_per_generation;
        while (left_in_generation > 0) {
            const std::uint64_t budget_left = config.max_candidate_iterations - epochs_done;
            const std::uint64_t seg =
                std::min({config.record_stride, left_in_generation, budget_left});
            advance_segment(topology, population.candidates, streams, data, step_cfg, seg,
                            config.target_error, config.threads, stats);
            epochs_done += seg;
            left_in_generation -= seg;

            double seg_min = std::numeric_limits<double>::infinity();
            std::uint64_t crossing = std::numeric_limits<std::uint64_t>::max();
            double current_min = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                seg_min = std::min(seg_min, stats[i].min_cost);
                if (stats[i].first_crossing) crossing = std::min(crossing, *stats[i].first_crossing);
                current_min = std::min(current_min, population.candidates[i].state.last_cost);
            }
            population.best_cost_ever = std::min(population.best_cost_ever, seg_min);

            if (population.best_cost_ever <= config.target_error) {
                result.outcome = GrwcOutcome::converged;
                result.iterations_to_target = crossing;
                result.curve.append(crossing, population.best_cost_ever);
                done = true;
                break;
            }
            result.curve.append(epochs_done, current_min);
            if (epochs_done >= config.max_candidate_iterations) {
                result.outcome = GrwcOutcome::budget_exhausted;
                done = true;
                break;
            }
        }
        if (done) break;
        population.generation += 1;
        apply_selection(population);
    }

    result.best_cost = population.best_cost_ever;
    result.per_candidate_iterations = epochs_done;
    return result;
}

} // namespace grwc
