#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclab/converse.hpp"
#include "cclab/logmath.hpp"

using namespace cclab;

namespace {

EstimatorSettings quick_settings(std::vector<int> grid, std::int64_t trials) {
    EstimatorSettings est;
    est.n_grid = std::move(grid);
    est.trials = trials;
    est.bootstrap_resamples = 50;
    est.keep_samples = true;
    return est;
}

}  // namespace

TEST_CASE("verdicts and gaps (reduced scale)") {
    auto block = std::make_shared<BlockInterference>(Alphabet(2));
    NoiseEntropySource source(block);
    StateSchedule bounded = StateSchedule::fixed_states({1, 2, 4, 8}, 8);
    const ConverseAnalysis b =
        analyze_strong_converse(source, bounded, quick_settings({500, 2000}, 2000), 7);
    CHECK(b.report.verdict == "holds");
    CHECK(std::abs(b.report.gap) <= 0.05);

    StateSchedule unbounded = StateSchedule::fixed_states({1, 2, 4, 8});
    unbounded.add_linear(1.0);
    const ConverseAnalysis u =
        analyze_strong_converse(source, unbounded, quick_settings({500, 2000}, 2000), 7);
    CHECK(u.report.verdict == "holds");
    CHECK(std::abs((u.report.ooline_H) - (1.0)) <= 1e-9);
    CHECK(std::abs((u.report.uln_H) - (1.0)) <= 1e-9);
}

TEST_CASE("mixture counterexample fails the condition") {
    auto mix = std::make_shared<ErgodicMixture>(0.3, IidGeneric::bernoulli(0.2),
                                                IidGeneric::bernoulli(0.05));
    NoiseEntropySource source(mix);
    StateSchedule singleton = StateSchedule::fixed_states({0});
    const ConverseAnalysis a =
        analyze_strong_converse(source, singleton, quick_settings({500, 2000}, 3000), 11);
    CHECK(a.report.verdict == "fails");
    CHECK(a.report.gap >= binary_entropy(0.2) - binary_entropy(0.05) - 0.1);
    CHECK_THROWS_AS(ergodic_coincidence(a), NotApplicable);
    const OrderingReport ord = ordering_report(a.report);
    CHECK(ord.note.find("necessary condition") != std::string::npos);
    // no state concentrates the info density at any rate between the two
    // spectral modes: both tails stay lower-bounded by the mixture weights
    for (double c : {0.35, 0.5, 0.65}) {
        const auto outage = outage_concentration(a.run, c, 0.05, 2);
        CHECK(outage.at(2000) >= 0.25);
    }
}

TEST_CASE("ergodic coincidence for ergodic noise") {
    NoiseEntropySource source(std::make_shared<IidGeneric>(Alphabet(2),
                                                           std::vector<double>{0.5, 0.5}));
    StateSchedule singleton = StateSchedule::fixed_states({0});
    const ConverseAnalysis a =
        analyze_strong_converse(source, singleton, quick_settings({200, 800}, 2000), 3);
    CHECK(a.report.verdict == "holds");
    const ErgodicCoincidence ec = ergodic_coincidence(a);
    CHECK(ec.ooline_H == doctest::Approx(1.0));
    CHECK(ec.worst_state_mean == doctest::Approx(1.0));
    CHECK(std::abs(ec.diff) < 1e-9);
}

TEST_CASE("split-block construction (reduced scale)") {
    const ConverseAnalysis a = split_block_demo(0.5, quick_settings({500, 1000}, 3000), 19);
    CHECK(std::abs((a.report.uln_H) - (0.5)) <= 0.06);
    CHECK(std::abs((a.report.oln_H) - (0.5)) <= 0.06);
    CHECK(std::abs((a.report.ooline_H) - (1.0)) <= 0.01);
    CHECK(std::abs((a.report.sup_s_oln_s) - (1.0)) <= 0.01);
    const OrderingReport ord = ordering_report(a.report);
    CHECK(!ord.sup_le_uln);
    // degenerate mixture weight collapses to a single block component
    const ConverseAnalysis deg = split_block_demo(1.0, quick_settings({500, 1000}, 3000), 19);
    CHECK(deg.report.sup_s_oln_s <= 0.01);  // fixed states now have vanishing density
}

TEST_CASE("outage concentration under the strong converse") {
    // the epsilon-quantile offsets shrink like 1/sqrt(n); the gap clears the
    // 0.05 tolerance from n ~ 16000 for this noise
    auto model = std::make_shared<InterferencePlusNoise>(0.3, 0.1);
    NoiseEntropySource source(model);
    StateSchedule sched = StateSchedule::fixed_states({1, 4, 16}, 16);
    const ConverseAnalysis a =
        analyze_strong_converse(source, sched, quick_settings({500, 2000, 16000}, 3000), 29);
    REQUIRE(a.report.verdict == "holds");
    const double c_est = 1.0 - a.report.ooline_H;
    const auto outage = outage_concentration(a.run, c_est, 0.05, 2);
    CHECK(outage.at(16000) <= 0.05);
    CHECK(outage.at(16000) <= outage.at(500) + 0.02);
}

TEST_CASE("not enough kept samples raises") {
    EstimationRun empty;
    CHECK_THROWS_AS(outage_concentration(empty, 0.5, 0.05, 2), InsufficientData);
}
