#ifndef CCLAB_CAPACITY_HPP
#define CCLAB_CAPACITY_HPP

#include <cstdint>
#include <string>

#include "cclab/spectrum.hpp"

namespace cclab {

// Capacities in bits/symbol. C_compound = log2 M - ooline(h-density) is both
// the no-feedback and the feedback capacity; C_worst = log2 M - sup over fixed
// states of the per-state sup-entropy estimate.
struct CapacityReport {
    double log_M = 0.0;
    double ooline_H = 0.0;
    double sup_s_H_bar = 0.0;
    double C_compound = 0.0;
    double C_worst = 0.0;
    double delta_C = 0.0;
    std::string uniformity = "n/a";
    std::string provenance;  // "estimated" | "closed_form"
    double tolerance = 0.0;  // half-width based tolerance used when flooring delta_C
};

double compound_capacity(const EstimationRun& run, std::uint32_t M);

// Per-state quantities come from fixed rules only; coupled rules realize the
// unbounded-set supremum inside the compound operators, not a channel state.
double worst_case_capacity(const EstimationRun& run, const StateSchedule& schedule,
                           std::uint32_t M);

// delta_C = C_worst - C_compound, floored at 0 when within tolerance.
double tx_csi_gain(double c_worst, double c_compound, double tolerance);

CapacityReport capacity_report(const EstimationRun& run, const StateSchedule& schedule,
                               std::uint32_t M, const std::string& uniformity_verdict = "n/a");

// ---- closed forms for the bundled examples ----------------------------------

struct ExampleParams {
    std::uint32_t M = 2;
    bool bounded = false;
    double bound = 0.0;  // S, informational
    double p1 = 0.3;     // example 2
    double p2 = 0.1;
    double mix_p = 0.3;  // example 4
    // example 4 component closed forms (compound sup-entropy / sup_s per-state)
    double w_ooline = 0.0, w_sup_H = 0.0;
    double z_ooline = 0.0, z_sup_H = 0.0;
};

// example_id in {1, 2, 3, 4}.
CapacityReport closed_form(int example_id, const ExampleParams& params);

// ---- saddle point -------------------------------------------------------------

struct SaddleCheck {
    double minimax = 0.0;  // min over fixed states of C_s
    double maximin = 0.0;  // compound capacity estimate
    double gap = 0.0;
    bool saddle = false;
};

SaddleCheck saddle_point_check(const EstimationRun& run, const StateSchedule& schedule,
                               std::uint32_t M, const std::string& uniformity_verdict,
                               double tolerance = 0.05);

}  // namespace cclab

#endif
