#include "cclab/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "cclab/logmath.hpp"

namespace cclab {

namespace {

double sup_fixed_upper(const EstimationRun& run, const StateSchedule& schedule, int n) {
    auto fixed = schedule.fixed_rule_indices();
    if (fixed.empty())
        for (std::size_t r = 0; r < schedule.size(); ++r) fixed.push_back(r);
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t r : fixed)
        sup = std::max(sup, run.bounds.state_at(run.rule_labels.at(r), n).upper);
    return sup;
}

double halfwidth_tolerance(const EstimationRun& run) {
    if (run.bounds.halfwidth.empty()) return 0.0;
    const auto& hw = run.bounds.halfwidth.rbegin()->second;
    return hw.ooline + hw.oln;
}

}  // namespace

double compound_capacity(const EstimationRun& run, std::uint32_t M) {
    const int n = run.bounds.largest_n();
    return std::log2(double(M)) - run.bounds.at(n).ooline;
}

double worst_case_capacity(const EstimationRun& run, const StateSchedule& schedule,
                           std::uint32_t M) {
    const int n = run.bounds.largest_n();
    return std::log2(double(M)) - sup_fixed_upper(run, schedule, n);
}

double tx_csi_gain(double c_worst, double c_compound, double tolerance) {
    const double raw = c_worst - c_compound;
    return raw <= tolerance ? 0.0 : raw;
}

CapacityReport capacity_report(const EstimationRun& run, const StateSchedule& schedule,
                               std::uint32_t M, const std::string& uniformity_verdict) {
    CapacityReport rep;
    rep.log_M = std::log2(double(M));
    const int n = run.bounds.largest_n();
    rep.ooline_H = run.bounds.at(n).ooline;
    rep.sup_s_H_bar = sup_fixed_upper(run, schedule, n);
    rep.C_compound = rep.log_M - rep.ooline_H;
    rep.C_worst = rep.log_M - rep.sup_s_H_bar;
    rep.tolerance = halfwidth_tolerance(run);
    rep.delta_C = tx_csi_gain(rep.C_worst, rep.C_compound, rep.tolerance);
    rep.uniformity = uniformity_verdict;
    rep.provenance = "estimated";
    return rep;
}

CapacityReport closed_form(int example_id, const ExampleParams& params) {
    CapacityReport rep;
    rep.provenance = "closed_form";
    rep.log_M = std::log2(double(params.M));
    switch (example_id) {
        case 1:
            rep.sup_s_H_bar = 0.0;
            rep.ooline_H = params.bounded ? 0.0 : rep.log_M;
            break;
        case 2:
            rep.log_M = 1.0;
            rep.sup_s_H_bar = binary_entropy(params.p2);
            rep.ooline_H = params.bounded
                               ? binary_entropy(params.p2)
                               : std::max(binary_entropy(params.p1), binary_entropy(params.p2));
            break;
        case 3:
            rep.log_M = 1.0;
            rep.sup_s_H_bar = 0.0;
            rep.ooline_H = params.bounded ? 0.0 : 1.0;
            break;
        case 4:
            rep.ooline_H = std::max(params.w_ooline, params.z_ooline);
            rep.sup_s_H_bar = std::max(params.w_sup_H, params.z_sup_H);
            break;
        default:
            throw InvalidArgument("closed_form: example_id must be in {1,2,3,4}");
    }
    rep.C_compound = rep.log_M - rep.ooline_H;
    rep.C_worst = rep.log_M - rep.sup_s_H_bar;
    rep.delta_C = positive_part(rep.C_worst - rep.C_compound);
    rep.uniformity = rep.delta_C == 0.0 ? "uniform" : "non-uniform";
    return rep;
}

SaddleCheck saddle_point_check(const EstimationRun& run, const StateSchedule& schedule,
                               std::uint32_t M, const std::string& uniformity_verdict,
                               double tolerance) {
    SaddleCheck check;
    const int n = run.bounds.largest_n();
    const double log_M = std::log2(double(M));
    auto fixed = schedule.fixed_rule_indices();
    if (fixed.empty())
        for (std::size_t r = 0; r < schedule.size(); ++r) fixed.push_back(r);
    check.minimax = std::numeric_limits<double>::infinity();
    for (std::size_t r : fixed) {
        const double c_s = log_M - run.bounds.state_at(run.rule_labels.at(r), n).upper;
        check.minimax = std::min(check.minimax, c_s);
    }
    check.maximin = compound_capacity(run, M);
    check.gap = check.minimax - check.maximin;
    check.saddle = check.gap <= tolerance + halfwidth_tolerance(run) &&
                   uniformity_verdict == "uniform";
    return check;
}

}  // namespace cclab
