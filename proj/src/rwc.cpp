#include "grwc/rwc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace grwc {

void RwcConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("config: lambda must be finite and >= 0");
    }
    if (max_iterations < 1) throw std::invalid_argument("config: max_iterations must be >= 1");
    if (!(target_error > 0.0)) throw std::invalid_argument("config: target_error must be > 0");
    if (record_stride < 1) throw std::invalid_argument("config: record_stride must be >= 1");
}

namespace {

void fill_scaled(Matrix& m, double lambda, Rng& rng) {
    double* p = m.data();
    for (std::size_t k = 0; k < m.size(); ++k) p[k] = lambda * rng.symmetric();
}

} // namespace

RwcState rwc_init(const NetworkTopology& topology, const Dataset& data,
                  const RwcConfig& config, Rng& rng) {
    topology.validate();
    config.validate();
    RwcState state;
    state.weights = zero_weights(topology);
    state.deltas = zero_deltas(topology);
    fill_scaled(state.weights.theta1, config.lambda, rng);
    fill_scaled(state.weights.theta2, config.lambda, rng);
    fill_scaled(state.deltas.dtheta1, config.lambda, rng);
    fill_scaled(state.deltas.dtheta2, config.lambda, rng);
    state.last_cost = dataset_cost(topology, state.weights, data);
    state.iteration = 0;
    return state;
}

void rwc_step(const NetworkTopology& topology, RwcState& state, const Dataset& data,
              const RwcConfig& config, Rng& rng) {
    double* w1 = state.weights.theta1.data();
    double* w2 = state.weights.theta2.data();
    const double* d1 = state.deltas.dtheta1.data();
    const double* d2 = state.deltas.dtheta2.data();
    for (std::size_t k = 0; k < state.weights.theta1.size(); ++k) w1[k] += d1[k];
    for (std::size_t k = 0; k < state.weights.theta2.size(); ++k) w2[k] += d2[k];

    double new_cost = 0.0;
    try {
        new_cost = dataset_cost(topology, state.weights, data);
    } catch (const std::domain_error&) {
        // degenerate activations (NaN or zero sums) count as numeric breakdown
        new_cost = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(new_cost)) {
        throw NumericError(state.iteration + 1,
                           "rwc_step: non-finite cost at iteration " +
                               std::to_string(state.iteration + 1));
    }

    if (!(new_cost < state.last_cost)) {
        fill_scaled(state.deltas.dtheta1, config.lambda, rng);
        fill_scaled(state.deltas.dtheta2, config.lambda, rng);
    }
    state.last_cost = new_cost;
    state.iteration += 1;
}

RwcResult rwc_train(const NetworkTopology& topology, const Dataset& data,
                    const RwcConfig& config, std::uint64_t seed) {
    validate_dataset(topology, data);
    Rng rng(seed);
    RwcResult result;
    result.state = rwc_init(topology, data, config, rng);
    result.curve.append(0, result.state.last_cost);
    result.best_cost = result.state.last_cost;
    result.best_iteration = 0;
    if (result.state.last_cost <= config.target_error) {
        result.converged = true;
        return result;
    }

    while (result.state.iteration < config.max_iterations) {
        rwc_step(topology, result.state, data, config, rng);
        if (result.state.last_cost < result.best_cost) {
            result.best_cost = result.state.last_cost;
            result.best_iteration = result.state.iteration;
        }
        const bool done = result.state.last_cost <= config.target_error ||
                          result.state.iteration == config.max_iterations;
        if (done || result.state.iteration % config.record_stride == 0) {
            result.curve.append(result.state.iteration, result.state.last_cost);
        }
        if (result.state.last_cost <= config.target_error) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace grwc
