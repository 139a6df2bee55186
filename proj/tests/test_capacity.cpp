#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclab/capacity.hpp"
#include "cclab/logmath.hpp"

using namespace cclab;

namespace {

// independent oracle for h(p), written from the defining formula
double h_ref(double p) {
    if (p <= 0 || p >= 1) return 0.0;
    return -(p * std::log(p) + (1 - p) * std::log(1 - p)) / std::log(2.0);
}

EstimationRun quick_run(std::shared_ptr<const NoiseModel> model, StateSchedule schedule,
                        std::vector<int> n_grid, std::int64_t trials, std::uint64_t seed,
                        bool keep = false) {
    EstimatorSettings est;
    est.n_grid = std::move(n_grid);
    est.trials = trials;
    est.bootstrap_resamples = 50;
    est.keep_samples = keep;
    NoiseEntropySource source(std::move(model));
    return estimate_spectrum(source, schedule, est, seed);
}

}  // namespace

TEST_CASE("closed forms: example 1") {
    ExampleParams p;
    p.M = 2;
    p.bounded = false;
    const CapacityReport u = closed_form(1, p);
    CHECK(u.C_compound == 0.0);
    CHECK(u.C_worst == 1.0);
    CHECK(u.delta_C == 1.0);
    CHECK(u.uniformity == "non-uniform");
    p.bounded = true;
    const CapacityReport b = closed_form(1, p);
    CHECK(b.C_compound == 1.0);
    CHECK(b.delta_C == 0.0);
    CHECK(b.uniformity == "uniform");
    p.M = 4;
    p.bounded = false;
    CHECK(closed_form(1, p).delta_C == doctest::Approx(2.0));
}

TEST_CASE("closed forms: example 2 including the p2 >= p1 regime") {
    ExampleParams p;
    p.p1 = 0.3;
    p.p2 = 0.1;
    p.bounded = false;
    const CapacityReport u = closed_form(2, p);
    CHECK(u.C_worst == doctest::Approx(1.0 - h_ref(0.1)));
    CHECK(u.C_compound == doctest::Approx(1.0 - h_ref(0.3)));
    CHECK(u.delta_C == doctest::Approx(h_ref(0.3) - h_ref(0.1)));
    p.bounded = true;
    CHECK(closed_form(2, p).delta_C == 0.0);
    // noise stronger than interference: no Tx-CSI gain either way
    p.p1 = 0.1;
    p.p2 = 0.3;
    p.bounded = false;
    CHECK(closed_form(2, p).delta_C == 0.0);
}

TEST_CASE("closed forms: examples 3 and 4") {
    ExampleParams p;
    p.bounded = false;
    const CapacityReport u = closed_form(3, p);
    CHECK(u.C_worst == 1.0);
    CHECK(u.C_compound == 0.0);
    CHECK(u.delta_C == 1.0);
    p.bounded = true;
    CHECK(closed_form(3, p).delta_C == 0.0);

    ExampleParams mix;
    mix.M = 2;
    mix.w_ooline = h_ref(0.2);
    mix.w_sup_H = h_ref(0.2);
    mix.z_ooline = h_ref(0.05);
    mix.z_sup_H = h_ref(0.05);
    const CapacityReport m = closed_form(4, mix);
    CHECK(m.C_compound == doctest::Approx(1.0 - h_ref(0.2)));
    CHECK(m.delta_C == 0.0);

    CHECK_THROWS_AS(closed_form(5, mix), InvalidArgument);
}

TEST_CASE("compound capacity trivial cases") {
    StateSchedule singleton = StateSchedule::fixed_states({0});
    const EstimationRun silent =
        quick_run(IidGeneric::bernoulli(0.0), singleton, {100, 400}, 2000, 17);
    CHECK(compound_capacity(silent, 2) == doctest::Approx(1.0));
    const EstimationRun jammed =
        quick_run(IidGeneric::bernoulli(0.5), singleton, {100, 400}, 2000, 17);
    CHECK(std::abs((compound_capacity(jammed, 2)) - (0.0)) <= 1e-6);
}

TEST_CASE("example 2 estimates approach the derived targets") {
    // quantile offsets scale like 1/sqrt(n); n = 16000 brings both estimates
    // inside 0.03 of the binary-entropy targets
    auto model = std::make_shared<InterferencePlusNoise>(0.3, 0.1);
    StateSchedule sched = StateSchedule::fixed_states({1, 4, 16});
    sched.add_linear(1.0);
    const EstimationRun run = quick_run(model, sched, {1000, 4000, 16000}, 4000, 31);
    CHECK(std::abs((compound_capacity(run, 2)) - (1.0 - h_ref(0.3))) <= 0.03);
    CHECK(std::abs((worst_case_capacity(run, sched, 2)) - (1.0 - h_ref(0.1))) <= 0.03);
    // the compound sup-entropy dominates the per-state supremum (up to
    // estimator offsets), so the Tx-CSI gain is never negative
    const CapacityReport rep = capacity_report(run, sched, 2);
    CHECK(rep.ooline_H >= rep.sup_s_H_bar - 0.01);
    CHECK(rep.delta_C >= 0.0);
}

TEST_CASE("worst-case capacity ignores coupled rules") {
    auto block = std::make_shared<BlockInterference>(Alphabet(2));
    StateSchedule sched = StateSchedule::fixed_states({1, 2, 4, 8});
    sched.add_linear(1.0);
    const EstimationRun run = quick_run(block, sched, {500, 2000}, 2000, 13);
    CHECK(std::abs((worst_case_capacity(run, sched, 2)) - (1.0)) <= 0.01);
    CHECK(std::abs((compound_capacity(run, 2)) - (0.0)) <= 1e-9);
}

TEST_CASE("decaying bernoulli worst case is the full rate") {
    auto dec = std::make_shared<DecayingBernoulli>();
    StateSchedule sched = StateSchedule::fixed_states({0.5, 2});
    const EstimationRun run = quick_run(dec, sched, {1000, 4000}, 3000, 71);
    CHECK(std::abs((worst_case_capacity(run, sched, 2)) - (1.0)) <= 0.05);
}

TEST_CASE("tx csi gain flooring") {
    CHECK(tx_csi_gain(0.52, 0.5, 0.05) == 0.0);
    CHECK(tx_csi_gain(0.9, 0.5, 0.05) == doctest::Approx(0.4));
    CHECK(tx_csi_gain(0.49, 0.5, 0.05) == 0.0);  // small negatives floor too
}

TEST_CASE("enlarging the schedule never increases the compound capacity") {
    auto block = std::make_shared<BlockInterference>(Alphabet(2));
    StateSchedule small = StateSchedule::fixed_states({1, 2});
    StateSchedule mid = StateSchedule::fixed_states({1, 2, 4});
    StateSchedule large = StateSchedule::fixed_states({1, 2, 4});
    large.add_linear(1.0);
    const std::vector<int> grid = {200, 800};
    const double c_small = compound_capacity(quick_run(block, small, grid, 2000, 5), 2);
    const double c_mid = compound_capacity(quick_run(block, mid, grid, 2000, 5), 2);
    const double c_large = compound_capacity(quick_run(block, large, grid, 2000, 5), 2);
    CHECK(c_small >= c_mid);
    CHECK(c_mid >= c_large);
}

TEST_CASE("saddle point check") {
    auto model = std::make_shared<InterferencePlusNoise>(0.3, 0.1);
    StateSchedule singleton = StateSchedule::fixed_states({4});
    const EstimationRun run = quick_run(model, singleton, {500, 2000}, 2000, 23);
    const SaddleCheck sc = saddle_point_check(run, singleton, 2, "uniform");
    CHECK(sc.gap == 0.0);  // min over one state equals the compound estimate
    CHECK(sc.saddle);
    const SaddleCheck sc2 = saddle_point_check(run, singleton, 2, "non-uniform");
    CHECK(!sc2.saddle);
}
