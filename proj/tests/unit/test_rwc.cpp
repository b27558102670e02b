#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "grwc/data_io.hpp"
#include "grwc/rwc.hpp"

using namespace grwc;

namespace {

const NetworkTopology kTopo{2, 3, 2};

Dataset xor_data() { return make_synthetic("xor", 0); }

RwcConfig config(double lambda, std::uint64_t budget = 100, double target = 1e-9) {
    RwcConfig cfg;
    cfg.lambda = lambda;
    cfg.max_iterations = budget;
    cfg.target_error = target;
    return cfg;
}

bool all_within(const Matrix& m, double bound) {
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (std::abs(m.data()[k]) > bound) return false;
    }
    return true;
}

} // namespace

TEST_CASE("config validation names the offending field") {
    CHECK_THROWS_WITH_AS(config(-0.1).validate(), doctest::Contains("lambda"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(config(0.1, 0).validate(), doctest::Contains("max_iterations"),
                         std::invalid_argument);
    RwcConfig bad = config(0.1);
    bad.target_error = 0.0;
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("target_error"),
                         std::invalid_argument);
    CHECK_NOTHROW(config(0.0).validate()); // degenerate lambda is allowed
}

TEST_CASE("rwc_init draws weights and deltas inside [-lambda, lambda]") {
    const Dataset data = xor_data();
    Rng rng(42);
    const RwcState s = rwc_init(kTopo, data, config(0.1), rng);
    CHECK(all_within(s.weights.theta1, 0.1));
    CHECK(all_within(s.weights.theta2, 0.1));
    CHECK(all_within(s.deltas.dtheta1, 0.1));
    CHECK(all_within(s.deltas.dtheta2, 0.1));
    CHECK(s.iteration == 0);
    CHECK(s.last_cost == dataset_cost(kTopo, s.weights, data));
}

TEST_CASE("rwc_init with lambda zero is all zeros") {
    const Dataset data = xor_data();
    Rng rng(42);
    const RwcState s = rwc_init(kTopo, data, config(0.0), rng);
    CHECK(s.weights == zero_weights(kTopo));
    CHECK(s.deltas == zero_deltas(kTopo));
}

TEST_CASE("rwc_init is deterministic for a fixed seed") {
    const Dataset data = xor_data();
    Rng a(7), b(7);
    const RwcState s1 = rwc_init(kTopo, data, config(0.05), a);
    const RwcState s2 = rwc_init(kTopo, data, config(0.05), b);
    CHECK(s1.weights == s2.weights);
    CHECK(s1.deltas == s2.deltas);
    CHECK(s1.last_cost == s2.last_cost);
}

TEST_CASE("rwc_step retains deltas exactly when cost strictly decreases") {
    const Dataset data = xor_data();
    const RwcConfig cfg = config(0.05);
    Rng rng(3);
    RwcState state = rwc_init(kTopo, data, cfg, rng);
    int retained = 0, resampled = 0;
    for (int i = 0; i < 2000; ++i) {
        const DeltaSet before = state.deltas;
        const double prev_cost = state.last_cost;
        Rng replay = rng; // predicts the resample draws
        rwc_step(kTopo, state, data, cfg, rng);
        if (state.last_cost < prev_cost) {
            CHECK(state.deltas == before);
            ++retained;
        } else {
            DeltaSet expected = before;
            for (std::size_t k = 0; k < expected.dtheta1.size(); ++k) {
                expected.dtheta1.data()[k] = cfg.lambda * replay.symmetric();
            }
            for (std::size_t k = 0; k < expected.dtheta2.size(); ++k) {
                expected.dtheta2.data()[k] = cfg.lambda * replay.symmetric();
            }
            CHECK(state.deltas == expected);
            CHECK(all_within(state.deltas.dtheta1, cfg.lambda));
            CHECK(all_within(state.deltas.dtheta2, cfg.lambda));
            ++resampled;
        }
    }
    // both branches must actually occur
    CHECK(retained > 0);
    CHECK(resampled > 0);
}

TEST_CASE("rwc_step with lambda zero leaves cost constant") {
    const Dataset data = xor_data();
    const RwcConfig cfg = config(0.0);
    Rng rng(5);
    RwcState state = rwc_init(kTopo, data, cfg, rng);
    const WeightSet w0 = state.weights;
    const double c0 = state.last_cost;
    for (int i = 0; i < 50; ++i) rwc_step(kTopo, state, data, cfg, rng);
    CHECK(state.weights == w0);
    CHECK(state.last_cost == c0);
    CHECK(state.iteration == 50);
}

TEST_CASE("rwc_step reports numeric breakdown with the iteration index") {
    const Dataset data = xor_data();
    const RwcConfig cfg = config(0.05);
    Rng rng(9);
    RwcState state = rwc_init(kTopo, data, cfg, rng);
    state.iteration = 41;
    state.weights.theta1(0, 0) = std::numeric_limits<double>::infinity();
    state.weights.theta1(0, 1) = -std::numeric_limits<double>::infinity();
    try {
        rwc_step(kTopo, state, data, cfg, rng);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(e.iteration() == 42);
    }
}

TEST_CASE("rwc_train returns immediately when already at target") {
    const Dataset data = xor_data();
    RwcConfig cfg = config(0.05, 1000);
    cfg.target_error = 10.0;
    const RwcResult r = rwc_train(kTopo, data, cfg, 1);
    CHECK(r.converged);
    CHECK(r.state.iteration == 0);
    CHECK(r.curve.points().size() == 1);
    CHECK(r.curve.points()[0].iteration == 0);
}

TEST_CASE("rwc_train takes exactly one step on a budget of one") {
    const Dataset data = xor_data();
    const RwcResult r = rwc_train(kTopo, data, config(0.05, 1), 1);
    CHECK(r.state.iteration == 1);
    CHECK_FALSE(r.converged);
}

TEST_CASE("rwc_train is deterministic and respects the recording stride") {
    const Dataset data = xor_data();
    RwcConfig cfg = config(0.05, 1234);
    cfg.record_stride = 100;
    const RwcResult a = rwc_train(kTopo, data, cfg, 99);
    const RwcResult b = rwc_train(kTopo, data, cfg, 99);
    CHECK(a.state.weights == b.state.weights);
    CHECK(a.curve == b.curve);
    CHECK(a.best_cost == b.best_cost);

    REQUIRE(a.curve.points().size() >= 3);
    CHECK(a.curve.points()[0].iteration == 0);
    CHECK(a.curve.points()[1].iteration == 100);
    CHECK(a.curve.back().iteration == 1234);

    // deltas stay bounded after many steps
    CHECK(all_within(a.state.deltas.dtheta1, cfg.lambda));
    CHECK(all_within(a.state.deltas.dtheta2, cfg.lambda));

    // best_cost is the running minimum of everything the curve saw
    double min_recorded = a.curve.points()[0].cost;
    for (const CurvePoint& p : a.curve.points()) min_recorded = std::min(min_recorded, p.cost);
    CHECK(a.best_cost <= min_recorded);
    CHECK(a.best_iteration <= a.state.iteration);
}

TEST_CASE("rwc_train cost sequence is constant at lambda zero") {
    const Dataset data = xor_data();
    const RwcResult r = rwc_train(kTopo, data, config(0.0, 500), 4);
    for (const CurvePoint& p : r.curve.points()) CHECK(p.cost == r.curve.points()[0].cost);
}
