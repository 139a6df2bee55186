#ifndef CCLAB_SPECTRUM_HPP
#define CCLAB_SPECTRUM_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cclab/noise.hpp"

namespace cclab {

// ---- per-sequence densities (bits / symbol) --------------------------------

struct DensitySample {
    std::string state;
    int n = 0;
    double value = 0.0;
};

// -(1/n) log2 p_s(xi); throws InfeasibleSample on zero-probability xi.
DensitySample entropy_density(const NoiseModel& model, double s, const SeqM& xi);

// Normalized information density under the uniform input: log2 M - h_density.
DensitySample info_density_uniform_input(const NoiseModel& model, double s, const SeqM& xi);

// (1/n)(log2 p_s(xi) - log2 q_s(xi)); +inf when xi is outside q's support.
DensitySample divergence_density(const NoiseModel& p_model, const NoiseModel& q_model, double s,
                                 const SeqM& xi);

// ---- finite-sample operator estimates ---------------------------------------

// The asymptotic tail conditions are operationalized as epsilon-level cuts on
// per-state empirical CDFs, resolved at midpoints between adjacent order
// statistics. upper cuts are the exact mirror of lower cuts, so the negation
// duality uln(-X) = -oln(X) holds bit-exactly on a shared sample set.
struct CutPair {
    double lower = 0.0, upper = 0.0;
    double lower_spacing = 0.0, upper_spacing = 0.0;  // order-stat gaps at the cuts
};

struct BoundsQuad {
    double uuline = 0.0, uln = 0.0, oln = 0.0, ooline = 0.0;
};

struct SampleGroup {
    std::string state;
    int n = 0;
    std::vector<double> values;
};

struct SpectrumBounds {
    double epsilon = 0.0;
    std::int64_t trials = 0;
    std::map<int, BoundsQuad> per_n;
    std::map<std::pair<std::string, int>, CutPair> per_state;
    // Bootstrap half-widths, present only at blocklengths where computed.
    std::map<int, BoundsQuad> halfwidth;
    std::map<std::pair<std::string, int>, CutPair> per_state_halfwidth;

    int largest_n() const;
    const BoundsQuad& at(int n) const;
    const CutPair& state_at(const std::string& label, int n) const;
};

// Epsilon-level cut of a single sample set (mutates v via nth_element).
CutPair epsilon_cuts(std::vector<double>& v, double epsilon);

// Pure estimator over pre-grouped samples. Requires >= min_samples per group
// and epsilon in (0, 0.5). The ordering uuline <= min(uln, oln) <=
// max(uln, oln) <= ooline holds exactly by construction.
SpectrumBounds estimate_bounds(std::vector<SampleGroup> groups, double epsilon,
                               std::size_t min_samples = 1000);

// ---- sampling driver ----------------------------------------------------------

// Scalar compound sequence: one draw of X_{s,n} per call.
class CompoundSource {
public:
    virtual ~CompoundSource() = default;
    virtual std::string name() const = 0;
    virtual double draw(double state, int n, Rng& rng) const = 0;
};

// Entropy density rate of a noise model's sampled blocks.
class NoiseEntropySource final : public CompoundSource {
public:
    explicit NoiseEntropySource(std::shared_ptr<const NoiseModel> model)
        : model_(std::move(model)) {}
    std::string name() const override { return model_->kind(); }
    double draw(double state, int n, Rng& rng) const override {
        return -model_->sample_log_prob(state, n, rng) / double(n);
    }
    const std::shared_ptr<const NoiseModel>& model() const { return model_; }

private:
    std::shared_ptr<const NoiseModel> model_;
};

// Two fixed states with uniform laws (the operator-separation example and the
// no-universal-ordering pair).
class TwoStateUniform final : public CompoundSource {
public:
    TwoStateUniform(double lo1, double hi1, double lo2, double hi2)
        : lo1_(lo1), hi1_(hi1), lo2_(lo2), hi2_(hi2) {}
    std::string name() const override { return "two_state_uniform"; }
    double draw(double state, int n, Rng& rng) const override {
        (void)n;
        return state < 1.5 ? rng.uniform(lo1_, hi1_) : rng.uniform(lo2_, hi2_);
    }

private:
    double lo1_, hi1_, lo2_, hi2_;
};

// X_{s,n} ~ Ber(1 - p_sn) with p_sn = n / (n + s); flipped swaps the roles.
class RatioBernoulli final : public CompoundSource {
public:
    explicit RatioBernoulli(bool flipped = false) : flipped_(flipped) {}
    std::string name() const override { return flipped_ ? "ratio_bernoulli_flipped" : "ratio_bernoulli"; }
    double draw(double state, int n, Rng& rng) const override {
        const double p_zero = double(n) / (double(n) + state);
        const bool zero = rng.next_double() < (flipped_ ? 1.0 - p_zero : p_zero);
        return zero ? 0.0 : 1.0;
    }

private:
    bool flipped_;
};

struct EstimatorSettings {
    double epsilon = 0.01;
    std::vector<int> n_grid = {250, 500, 1000, 2000, 4000};
    std::int64_t trials = 10000;
    int bootstrap_resamples = 200;  // 0 disables; run at the largest n only
    int workers = 1;
    bool keep_samples = false;
    std::int64_t chunk = 1 << 14;
    std::size_t min_samples = 1000;
};

struct EstimationRun {
    SpectrumBounds bounds;
    std::vector<std::string> rule_labels;  // aligned with the schedule
    std::map<std::pair<std::size_t, int>, double> mean;  // per (rule, n) sample mean
    std::map<std::pair<std::size_t, int>, std::vector<double>> samples;  // when kept
    std::uint64_t master_seed = 0;
};

// Samples source at every (rule, n) cell of the schedule x grid and estimates
// all operator cuts. Bit-reproducible for a fixed master seed regardless of
// worker count (per-chunk seeds derive from the rule label, n and chunk index).
EstimationRun estimate_spectrum(const CompoundSource& source, const StateSchedule& schedule,
                                const EstimatorSettings& settings, std::uint64_t master_seed);

// ---- uniformity diagnostic ------------------------------------------------------

struct UniformityReport {
    double sup_fixed_sup_entropy = 0.0;  // max over fixed states of the per-state upper cut
    std::map<std::pair<int, double>, double> tail_table;  // (n, delta) -> worst tail probability
    std::string verdict;  // "uniform" | "non-uniform" | "inconclusive"
};

UniformityReport check_uniformity(const CompoundSource& source, const StateSchedule& schedule,
                                  const EstimatorSettings& settings, std::uint64_t master_seed,
                                  const std::vector<double>& deltas = {0.05, 0.1, 0.2});

// Variant reusing an existing estimation run (samples must have been kept).
UniformityReport check_uniformity(const EstimationRun& run, const StateSchedule& schedule,
                                  const std::vector<double>& deltas = {0.05, 0.1, 0.2});

}  // namespace cclab

#endif
