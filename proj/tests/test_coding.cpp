#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cclab/coding.hpp"
#include "cclab/logmath.hpp"

using namespace cclab;

namespace {

double sweep_error(const std::vector<CodingResult>& rows, const std::string& label, int n,
                   double rate) {
    for (const auto& r : rows)
        if (r.state_label == label && r.n == n && r.rate == rate) return r.error_rate;
    REQUIRE(false);
    return 0.0;
}

}  // namespace

TEST_CASE("codeword regeneration is exact and uniform") {
    Codebook cb(Alphabet(2), 100, 0.1, 42);
    CHECK(cb.codeword(3) == cb.codeword(3));
    CHECK(!(cb.codeword(3) == cb.codeword(4)));
    // symbol frequencies over 1e5 symbols within 4 sigma of one half
    std::int64_t ones = 0;
    const std::uint64_t words = 1000;
    for (std::uint64_t w = 0; w < words; ++w) {
        const SeqM x = cb.codeword(w);
        for (std::size_t k = 0; k < x.size(); ++k) ones += x[k];
    }
    const double total = double(words) * 100.0;
    CHECK(std::abs(double(ones) - total / 2) <= 4.0 * std::sqrt(total * 0.25));
    CHECK_THROWS_AS(Codebook(Alphabet(2), 10, 0.5, 1).codeword(1u << 20), InvalidArgument);
}

TEST_CASE("no codeword collisions beyond the birthday bound") {
    // 2000 words of 32 fair bits: expected collisions ~ 4.7e-4
    Codebook cb(Alphabet(2), 32, 0.35, 7);
    std::vector<std::uint32_t> packed;
    for (std::uint64_t w = 0; w < 2000; ++w) {
        const SeqM x = cb.codeword(w);
        std::uint32_t v = 0;
        for (std::size_t k = 0; k < 32; ++k) v = (v << 1) | x[k];
        packed.push_back(v);
    }
    std::sort(packed.begin(), packed.end());
    CHECK(std::adjacent_find(packed.begin(), packed.end()) == packed.end());
}

TEST_CASE("ml decode: zero noise is always correct") {
    auto silent = IidGeneric::bernoulli(0.0);
    Codebook cb(Alphabet(2), 16, 0.375, 99);  // 64 codewords
    for (std::uint64_t w = 0; w < *cb.exact_count(); ++w) {
        const SeqM y = isi_map(cb.codeword(w), IsiMap{2});
        CHECK(ml_decode(y, cb, *silent, 0, IsiMap{2}) == w);
    }
}

TEST_CASE("ml decode: single-codeword codebook never errs") {
    auto noisy = IidGeneric::bernoulli(0.3);
    Codebook cb(Alphabet(2), 8, 0.0, 3);
    CHECK(cb.count == 1.0);
    Rng rng(8);
    const SeqM y = add_mod(cb.codeword(0), noisy->sample(0, 8, rng));
    CHECK(ml_decode(y, cb, *noisy, 0, IsiMap{0}) == 0);
}

TEST_CASE("ml decode cap") {
    auto model = IidGeneric::bernoulli(0.1);
    Codebook cb(Alphabet(2), 40, 0.9, 1);
    CHECK_THROWS_AS(ml_decode(SeqM(Alphabet(2), 40), cb, *model, 0, IsiMap{0}), CapacityExceeded);
}

TEST_CASE("fully jammed channel: error is 1 - 1/K with index tie-breaking") {
    auto jam = std::make_shared<IidGeneric>(Alphabet(2), std::vector<double>{0.5, 0.5});
    StateSchedule singleton = StateSchedule::fixed_states({0});
    SweepSettings settings;
    settings.n_grid = {8};
    settings.rate_grid = {0.375};  // 8 codewords
    settings.trials = 2000;
    settings.mode = SweepMode::Analytic;
    const auto rows = run_error_sweep(*jam, singleton, settings, 21);
    // analytically exact per trial: every likelihood ties, lowest index wins
    CHECK(sweep_error(rows, "s=0", 8, 0.375) == doctest::Approx(1.0 - 1.0 / 8.0).epsilon(1e-12));

    SweepSettings brute = settings;
    brute.mode = SweepMode::BruteMl;
    const auto brows = run_error_sweep(*jam, singleton, brute, 21);
    const double p = 1.0 - 1.0 / 8.0;
    CHECK(std::abs(sweep_error(brows, "s=0", 8, 0.375) - p) <=
          4.0 * std::sqrt(p * (1 - p) / 2000.0));
}

TEST_CASE("analytic and brute-force sweeps agree") {
    auto model = IidGeneric::bernoulli(0.1);
    StateSchedule singleton = StateSchedule::fixed_states({0});
    SweepSettings settings;
    settings.n_grid = {12};
    settings.rate_grid = {0.5};  // 64 codewords
    settings.trials = 4000;
    settings.mode = SweepMode::BruteMl;
    const auto ml_rows = run_error_sweep(*model, singleton, settings, 33);
    settings.mode = SweepMode::Analytic;
    const auto an_rows = run_error_sweep(*model, singleton, settings, 34);
    const double e_ml = sweep_error(ml_rows, "s=0", 12, 0.5);
    const double e_an = sweep_error(an_rows, "s=0", 12, 0.5);
    const double tol = ml_rows[0].halfwidth + an_rows[0].halfwidth + 0.01;
    CHECK(std::abs(e_ml - e_an) <= tol);
}

TEST_CASE("error rate is monotone in rate across the bundled models") {
    struct Case {
        std::shared_ptr<NoiseModel> model;
        double state;
    };
    std::vector<Case> cases = {
        {IidGeneric::bernoulli(0.1), 0},
        {std::make_shared<BlockInterference>(Alphabet(2)), 4},
        {std::make_shared<InterferencePlusNoise>(0.3, 0.1), 4},
        {std::make_shared<ErgodicMixture>(0.3, IidGeneric::bernoulli(0.2),
                                          IidGeneric::bernoulli(0.05)),
         0},
        {std::make_shared<ComplementaryBlocks>(0.5), 4},
    };
    for (const auto& c : cases) {
        const std::string label = StateRule::fixed(c.state).label();
        StateSchedule sched = StateSchedule::fixed_states({c.state});
        SweepSettings settings;
        settings.n_grid = {12};
        settings.rate_grid = {0.2, 0.4, 0.6, 0.8};
        settings.trials = 3000;
        settings.mode = SweepMode::Analytic;
        const auto rows = run_error_sweep(*c.model, sched, settings, 55);
        double prev = -1.0;
        for (double rate : settings.rate_grid) {
            const double e = sweep_error(rows, label, 12, rate);
            CHECK(e >= prev - 0.02);
            prev = e;
        }
    }
}

TEST_CASE("compound row dominates the per-state rows") {
    auto block = std::make_shared<BlockInterference>(Alphabet(2));
    StateSchedule sched = StateSchedule::fixed_states({2, 6});
    SweepSettings settings;
    settings.n_grid = {12};
    settings.rate_grid = {0.5};
    settings.trials = 500;
    settings.mode = SweepMode::Analytic;
    const auto rows = run_error_sweep(*block, sched, settings, 66);
    const double compound = sweep_error(rows, "compound", 12, 0.5);
    CHECK(compound >= sweep_error(rows, "s=2", 12, 0.5));
    CHECK(compound >= sweep_error(rows, "s=6", 12, 0.5));
}

TEST_CASE("isi depth does not change coding behavior (shared seeds)") {
    auto model = IidGeneric::bernoulli(0.1);
    StateSchedule singleton = StateSchedule::fixed_states({0});
    SweepSettings settings;
    settings.n_grid = {12};
    settings.rate_grid = {0.5};
    settings.trials = 3000;
    settings.mode = SweepMode::BruteMl;
    settings.isi.depth = 0;
    const auto flat = run_error_sweep(*model, singleton, settings, 77);
    settings.isi.depth = 2;
    const auto isi = run_error_sweep(*model, singleton, settings, 77);
    const double e0 = sweep_error(flat, "s=0", 12, 0.5);
    const double e2 = sweep_error(isi, "s=0", 12, 0.5);
    CHECK(std::abs(e0 - e2) <= flat[0].halfwidth + isi[0].halfwidth + 0.01);
}

TEST_CASE("sweep determinism across worker counts") {
    auto model = IidGeneric::bernoulli(0.1);
    StateSchedule singleton = StateSchedule::fixed_states({0});
    SweepSettings settings;
    settings.n_grid = {10};
    settings.rate_grid = {0.4};
    settings.trials = 1000;
    settings.workers = 1;
    const auto one = run_error_sweep(*model, singleton, settings, 88);
    settings.workers = 4;
    const auto four = run_error_sweep(*model, singleton, settings, 88);
    CHECK(one[0].errors == four[0].errors);
    CHECK(one[0].error_rate == four[0].error_rate);
}

TEST_CASE("infeasible cells are skipped with a warning") {
    auto dec = std::make_shared<DecayingBernoulli>();  // no likelihood classes
    StateSchedule singleton = StateSchedule::fixed_states({1});
    SweepSettings settings;
    settings.n_grid = {40};
    settings.rate_grid = {0.9};  // 2^36 codewords
    settings.trials = 200;
    std::vector<std::string> warnings;
    auto previous = warning_sink();
    warning_sink() = [&](const std::string& m) { warnings.push_back(m); };
    const auto rows = run_error_sweep(*dec, singleton, settings, 5);
    warning_sink() = previous;
    CHECK(rows.empty());
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("skipping") != std::string::npos);
}

TEST_CASE("feedback: ignoring the feedback is bit-identical to the baseline") {
    auto model = std::make_shared<InterferencePlusNoise>(0.3, 0.1);
    StateSchedule sched = StateSchedule::fixed_states({4});
    const auto table = run_feedback_comparison(
        *model, sched, IsiMap{1}, {make_no_feedback(), make_ignore_feedback()}, 12, 0.25, 400,
        123);
    REQUIRE(table.size() == 2);
    CHECK(table[1].gain_vs_baseline == 0.0);
    CHECK(table[1].gain_sigma == 0.0);
    CHECK(table[1].error_rate == table[0].error_rate);
}

TEST_CASE("feedback: all schemes are perfect on a noiseless channel") {
    // blocklength long enough that random codebooks have no duplicate words
    auto silent = IidGeneric::bernoulli(0.0);
    StateSchedule sched = StateSchedule::fixed_states({0});
    const auto table = run_feedback_comparison(
        *silent, sched, IsiMap{0},
        {make_no_feedback(), make_retransmit_on_hit(), make_precancel_last_noise()}, 32, 0.125,
        300, 9);
    for (const auto& row : table) CHECK(row.error_rate == 0.0);
}

TEST_CASE("feedback heuristics do not beat the baseline (reduced scale)") {
    auto block = std::make_shared<BlockInterference>(Alphabet(2));
    StateSchedule sched = StateSchedule::fixed_states({8});
    const auto table = run_feedback_comparison(
        *block, sched, IsiMap{0},
        {make_no_feedback(), make_retransmit_on_hit(), make_precancel_last_noise()}, 16, 0.375,
        1500, 31415);
    for (std::size_t i = 1; i < table.size(); ++i)
        CHECK(table[i].gain_vs_baseline <= 3.0 * table[i].gain_sigma);
}

TEST_CASE("tx csi demo (reduced scale)") {
    BlockInterference model(Alphabet(2));
    const TxCsiDemo demo = tx_csi_demo(model, 2.0, 0.5, 300, 2222);
    CHECK(demo.with_csi.error_rate <= 0.1);
    CHECK(demo.without_csi.error_rate >= 0.8);
    // no interference at all: both modes succeed
    const TxCsiDemo clean = tx_csi_demo(model, 0.0, 0.5, 300, 2223);
    CHECK(clean.with_csi.error_rate <= 0.05);
    CHECK(clean.without_csi.error_rate <= 0.05);
}

TEST_CASE("uniform output check: exact convolution") {
    BlockInterference block(Alphabet(2));
    const OutputCheck a = uniform_output_check(block, 3, 10, IsiMap{1});
    CHECK(a.exact);
    CHECK(a.uniform);
    CHECK(a.max_abs_dev <= 1e-9);

    IidGeneric skew3(Alphabet(3), {0.5, 0.3, 0.2});
    const OutputCheck b = uniform_output_check(skew3, 0, 6, IsiMap{2});
    CHECK(b.exact);
    CHECK(b.uniform);

    // negative control: a skewed input does not flatten a skewed noise
    auto noisy = IidGeneric::bernoulli(0.2);
    const OutputCheck c =
        uniform_output_check(*noisy, 0, 8, IsiMap{0}, std::vector<double>{0.8, 0.2});
    CHECK(c.exact);
    CHECK(!c.uniform);
    CHECK(c.max_abs_dev > 1e-6);
}

TEST_CASE("uniform output check: statistical fallback") {
    auto noisy = IidGeneric::bernoulli(0.2);
    const OutputCheck stat = uniform_output_check(*noisy, 0, 24, IsiMap{0}, {}, 1u << 10,
                                                  97531, 200000);
    CHECK(!stat.exact);
    CHECK(stat.uniform);
}
