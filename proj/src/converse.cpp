#include "cclab/converse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cclab/logmath.hpp"

namespace cclab {

namespace {

ConverseReport report_from_run(const EstimationRun& run, const StateSchedule& schedule) {
    ConverseReport rep;
    const int n = run.bounds.largest_n();
    const BoundsQuad& q = run.bounds.at(n);
    rep.ooline_H = q.ooline;
    rep.uln_H = q.uln;
    rep.oln_H = q.oln;

    auto fixed = schedule.fixed_rule_indices();
    if (fixed.empty())
        for (std::size_t r = 0; r < schedule.size(); ++r) fixed.push_back(r);
    rep.inf_s_oln_s = std::numeric_limits<double>::infinity();
    rep.sup_s_oln_s = -std::numeric_limits<double>::infinity();
    for (std::size_t r : fixed) {
        const double upper = run.bounds.state_at(run.rule_labels.at(r), n).upper;
        rep.inf_s_oln_s = std::min(rep.inf_s_oln_s, upper);
        rep.sup_s_oln_s = std::max(rep.sup_s_oln_s, upper);
    }

    rep.ergodic_rate = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < schedule.size(); ++r)
        rep.ergodic_rate = std::max(rep.ergodic_rate, run.mean.at({r, n}));

    rep.gap = rep.ooline_H - rep.uln_H;
    rep.reduced_gap = rep.sup_s_oln_s - rep.uln_H;

    double combined_hw = 0.0;
    if (!run.bounds.halfwidth.empty()) {
        const auto& hw = run.bounds.halfwidth.rbegin()->second;
        combined_hw = hw.ooline + hw.uln;
    }
    rep.tolerance = std::max(0.05, 3.0 * combined_hw);
    if (combined_hw > 0.25) {
        rep.verdict = "inconclusive";
    } else {
        rep.verdict = rep.gap <= rep.tolerance ? "holds" : "fails";
    }
    return rep;
}

}  // namespace

ConverseAnalysis analyze_strong_converse(const CompoundSource& source,
                                         const StateSchedule& schedule,
                                         const EstimatorSettings& settings,
                                         std::uint64_t master_seed) {
    ConverseAnalysis analysis;
    analysis.run = estimate_spectrum(source, schedule, settings, master_seed);
    analysis.report = report_from_run(analysis.run, schedule);
    return analysis;
}

OrderingReport ordering_report(const ConverseReport& report, double tolerance) {
    OrderingReport ord;
    ord.tolerance = tolerance;
    ord.oln_le_inf = report.oln_H <= report.inf_s_oln_s + tolerance;
    ord.inf_le_sup = report.inf_s_oln_s <= report.sup_s_oln_s + tolerance;
    ord.sup_le_uln = report.sup_s_oln_s <= report.uln_H + tolerance;
    if (ord.all_hold()) {
        ord.note = "ordering holds";
    } else if (report.verdict == "holds") {
        ord.note = "ordering violated under strong converse: estimator bug";
    } else {
        ord.note = "ordering violated: necessary condition for strong converse breaks";
    }
    return ord;
}

ErgodicCoincidence ergodic_coincidence(const ConverseAnalysis& analysis) {
    if (analysis.report.verdict != "holds")
        throw NotApplicable("ergodic_coincidence: strong converse verdict is not \"holds\"");
    ErgodicCoincidence ec;
    ec.ooline_H = analysis.report.ooline_H;
    ec.worst_state_mean = analysis.report.ergodic_rate;
    ec.diff = ec.ooline_H - ec.worst_state_mean;
    return ec;
}

ConverseAnalysis split_block_demo(double p, const EstimatorSettings& settings,
                              std::uint64_t master_seed) {
    auto model = std::make_shared<ComplementaryBlocks>(p);
    // Fixed small states put the whole weight of one part on the block
    // (per-state upper cut exactly 1); the coupled mid-block state carries the
    // uln = oln = 1/2 mode.
    StateSchedule sched;
    sched.add_fixed(1).add_fixed(2).add_linear(0.5);
    NoiseEntropySource source(model);
    return analyze_strong_converse(source, sched, settings, master_seed);
}

std::map<int, double> outage_concentration(const EstimationRun& run, double capacity,
                                           double delta, std::uint32_t M) {
    if (run.samples.empty())
        throw InsufficientData("outage_concentration: run kept no samples");
    const double log_M = std::log2(double(M));
    std::map<int, double> out;
    for (const auto& [n, quad] : run.bounds.per_n) {
        double best = 1.0;
        for (std::size_t r = 0; r < run.rule_labels.size(); ++r) {
            auto it = run.samples.find({r, n});
            if (it == run.samples.end()) continue;
            const auto& values = it->second;
            const auto far = std::count_if(values.begin(), values.end(), [&](double h) {
                return std::abs((log_M - h) - capacity) > delta;
            });
            best = std::min(best, double(far) / double(values.size()));
        }
        out[n] = best;
    }
    return out;
}

}  // namespace cclab
