#include "cclab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cclab/logmath.hpp"
#include "cclab/parallel.hpp"

namespace cclab {

// ---- densities ------------------------------------------------------------

DensitySample entropy_density(const NoiseModel& model, double s, const SeqM& xi) {
    const double lp = model.log_prob(s, xi);
    if (is_neg_inf(lp)) throw InfeasibleSample("entropy_density: zero-probability sequence");
    DensitySample d;
    d.state = "s=" + std::to_string(s);
    d.n = static_cast<int>(xi.size());
    d.value = -lp / double(xi.size());
    return d;
}

DensitySample info_density_uniform_input(const NoiseModel& model, double s, const SeqM& xi) {
    DensitySample d = entropy_density(model, s, xi);
    d.value = std::log2(double(model.alphabet().M)) - d.value;
    return d;
}

DensitySample divergence_density(const NoiseModel& p_model, const NoiseModel& q_model, double s,
                                 const SeqM& xi) {
    const double lp = p_model.log_prob(s, xi);
    if (is_neg_inf(lp)) throw InfeasibleSample("divergence_density: xi outside p support");
    const double lq = q_model.log_prob(s, xi);
    DensitySample d;
    d.state = "s=" + std::to_string(s);
    d.n = static_cast<int>(xi.size());
    d.value = is_neg_inf(lq) ? std::numeric_limits<double>::infinity()
                             : (lp - lq) / double(xi.size());
    return d;
}

// ---- epsilon cuts -----------------------------------------------------------

CutPair epsilon_cuts(std::vector<double>& v, double epsilon) {
    if (v.empty()) throw InvalidArgument("epsilon_cuts: empty sample set");
    const std::size_t T = v.size();
    const auto k = static_cast<std::size_t>(std::floor(epsilon * double(T) + 1e-9));
    CutPair cut;
    std::nth_element(v.begin(), v.begin() + std::ptrdiff_t(k), v.end());
    const double vk = v[k];
    if (k >= 1) {
        const double vk1 = *std::max_element(v.begin(), v.begin() + std::ptrdiff_t(k));
        cut.lower = (vk1 + vk) / 2.0;
        cut.lower_spacing = vk - vk1;
    } else {
        cut.lower = vk;
    }
    const std::size_t ui = T - 1 - k;
    std::nth_element(v.begin(), v.begin() + std::ptrdiff_t(ui), v.end());
    const double vu = v[ui];
    if (k >= 1) {
        const double vu1 = *std::min_element(v.begin() + std::ptrdiff_t(ui) + 1, v.end());
        cut.upper = (vu + vu1) / 2.0;
        cut.upper_spacing = vu1 - vu;
    } else {
        cut.upper = vu;
    }
    return cut;
}

// ---- SpectrumBounds ----------------------------------------------------------

int SpectrumBounds::largest_n() const {
    if (per_n.empty()) throw InsufficientData("SpectrumBounds: no estimates");
    return per_n.rbegin()->first;
}

const BoundsQuad& SpectrumBounds::at(int n) const {
    auto it = per_n.find(n);
    if (it == per_n.end()) throw InsufficientData("SpectrumBounds: no estimate at requested n");
    return it->second;
}

const CutPair& SpectrumBounds::state_at(const std::string& label, int n) const {
    auto it = per_state.find({label, n});
    if (it == per_state.end())
        throw InsufficientData("SpectrumBounds: no per-state estimate for " + label);
    return it->second;
}

namespace {

BoundsQuad quad_from_cuts(const std::vector<CutPair>& cuts) {
    BoundsQuad q;
    q.uuline = std::numeric_limits<double>::infinity();
    q.uln = -std::numeric_limits<double>::infinity();
    q.oln = std::numeric_limits<double>::infinity();
    q.ooline = -std::numeric_limits<double>::infinity();
    for (const auto& c : cuts) {
        q.uuline = std::min(q.uuline, c.lower);
        q.uln = std::max(q.uln, c.lower);
        q.oln = std::min(q.oln, c.upper);
        q.ooline = std::max(q.ooline, c.upper);
    }
    // holds exactly for epsilon < 1/2; a violation means a broken estimator
    if (!(q.uuline <= std::min(q.uln, q.oln) && std::max(q.uln, q.oln) <= q.ooline))
        throw std::logic_error("estimate_bounds: operator ordering violated");
    return q;
}

}  // namespace

SpectrumBounds estimate_bounds(std::vector<SampleGroup> groups, double epsilon,
                               std::size_t min_samples) {
    if (groups.empty()) throw InvalidArgument("estimate_bounds: empty state set");
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw InvalidArgument("estimate_bounds: epsilon must be in (0, 0.5)");
    SpectrumBounds out;
    out.epsilon = epsilon;
    std::map<int, std::vector<CutPair>> cuts_by_n;
    std::int64_t min_trials = std::numeric_limits<std::int64_t>::max();
    for (auto& g : groups) {
        if (g.values.size() < min_samples)
            throw InsufficientData("estimate_bounds: fewer than min_samples for state " + g.state);
        min_trials = std::min<std::int64_t>(min_trials, std::int64_t(g.values.size()));
        const CutPair c = epsilon_cuts(g.values, epsilon);
        out.per_state[{g.state, g.n}] = c;
        cuts_by_n[g.n].push_back(c);
    }
    out.trials = min_trials;
    for (auto& [n, cuts] : cuts_by_n) out.per_n[n] = quad_from_cuts(cuts);
    return out;
}

// ---- driver --------------------------------------------------------------------

namespace {

void fill_cell(const CompoundSource& source, double state, int n, std::vector<double>& values,
               std::uint64_t label_hash, std::uint64_t master, std::int64_t chunk_size,
               int workers) {
    const auto trials = std::int64_t(values.size());
    const auto chunks = std::size_t((trials + chunk_size - 1) / chunk_size);
    parallel_for(chunks, workers, [&](std::size_t c) {
        Rng rng(derive_seed(master, label_hash, std::uint64_t(n), c));
        const std::int64_t lo = std::int64_t(c) * chunk_size;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk_size, trials);
        for (std::int64_t t = lo; t < hi; ++t) values[std::size_t(t)] = source.draw(state, n, rng);
    });
}

CutPair bootstrap_halfwidth_state(const std::vector<double>& values, double epsilon, int resamples,
                                  std::uint64_t seed, std::vector<CutPair>& replicates_out) {
    replicates_out.clear();
    replicates_out.reserve(std::size_t(resamples));
    const std::size_t T = values.size();
    std::vector<double> resample(T);
    for (int r = 0; r < resamples; ++r) {
        Rng rng(derive_seed(seed, std::uint64_t(r)));
        for (std::size_t t = 0; t < T; ++t)
            resample[t] = values[rng.next_below(std::uint32_t(T))];
        replicates_out.push_back(epsilon_cuts(resample, epsilon));
    }
    auto central_halfwidth = [&](auto proj) {
        std::vector<double> xs;
        xs.reserve(replicates_out.size());
        for (const auto& c : replicates_out) xs.push_back(proj(c));
        std::sort(xs.begin(), xs.end());
        const auto lo_i = std::size_t(0.025 * double(xs.size()));
        const auto hi_i = std::min(xs.size() - 1, std::size_t(0.975 * double(xs.size())));
        return (xs[hi_i] - xs[lo_i]) / 2.0;
    };
    CutPair hw;
    hw.lower = central_halfwidth([](const CutPair& c) { return c.lower; });
    hw.upper = central_halfwidth([](const CutPair& c) { return c.upper; });
    return hw;
}

}  // namespace

EstimationRun estimate_spectrum(const CompoundSource& source, const StateSchedule& schedule,
                                const EstimatorSettings& settings, std::uint64_t master_seed) {
    schedule.validate();
    if (!(settings.epsilon > 0.0 && settings.epsilon < 0.5))
        throw InvalidArgument("estimate_spectrum: epsilon must be in (0, 0.5)");
    if (settings.n_grid.empty()) throw InvalidArgument("estimate_spectrum: empty n grid");
    if (std::size_t(settings.trials) < settings.min_samples)
        throw InsufficientData("estimate_spectrum: trials below min_samples");

    EstimationRun run;
    run.master_seed = master_seed;
    run.bounds.epsilon = settings.epsilon;
    run.bounds.trials = settings.trials;
    for (const auto& rule : schedule.rules) run.rule_labels.push_back(rule.label());

    std::map<int, std::vector<CutPair>> cuts_by_n;
    const int n_max = *std::max_element(settings.n_grid.begin(), settings.n_grid.end());
    for (std::size_t r = 0; r < schedule.size(); ++r) {
        const std::string label = run.rule_labels[r];
        const std::uint64_t label_hash = fnv1a64(label.data(), label.size());
        for (int n : settings.n_grid) {
            const double state = schedule.state_at(r, n);
            std::vector<double> values(std::size_t(settings.trials));
            fill_cell(source, state, n, values, label_hash, master_seed, settings.chunk,
                      settings.workers);
            double sum = 0.0;
            for (double v : values) sum += v;
            run.mean[{r, n}] = sum / double(values.size());
            if (settings.bootstrap_resamples > 0 && n == n_max) {
                std::vector<CutPair> reps;
                const CutPair hw = bootstrap_halfwidth_state(
                    values, settings.epsilon, settings.bootstrap_resamples,
                    derive_seed(master_seed, label_hash, std::uint64_t(n), 0xb007u), reps);
                run.bounds.per_state_halfwidth[{label, n}] = hw;
            }
            const CutPair c = epsilon_cuts(values, settings.epsilon);
            run.bounds.per_state[{label, n}] = c;
            cuts_by_n[n].push_back(c);
            if (settings.keep_samples) run.samples[{r, n}] = std::move(values);
        }
    }
    for (auto& [n, cuts] : cuts_by_n) run.bounds.per_n[n] = quad_from_cuts(cuts);

    // Compound half-width: report the max of the per-state cut half-widths,
    // which bounds the variability of the min/max aggregates.
    if (settings.bootstrap_resamples > 0) {
        BoundsQuad hw{};
        for (std::size_t r = 0; r < schedule.size(); ++r) {
            auto it = run.bounds.per_state_halfwidth.find({run.rule_labels[r], n_max});
            if (it == run.bounds.per_state_halfwidth.end()) continue;
            hw.uuline = std::max(hw.uuline, it->second.lower);
            hw.uln = std::max(hw.uln, it->second.lower);
            hw.oln = std::max(hw.oln, it->second.upper);
            hw.ooline = std::max(hw.ooline, it->second.upper);
        }
        run.bounds.halfwidth[n_max] = hw;
    }
    return run;
}

// ---- uniformity -------------------------------------------------------------------

UniformityReport check_uniformity(const EstimationRun& run, const StateSchedule& schedule,
                                  const std::vector<double>& deltas) {
    if (run.samples.empty())
        throw InsufficientData("check_uniformity: estimation run kept no samples");
    UniformityReport report;
    const int n_max = run.bounds.largest_n();

    // sup_s of the per-state sup-entropy estimate is taken over fixed states:
    // coupled rules realize the sup inside the limit, not a per-state quantity.
    auto fixed = schedule.fixed_rule_indices();
    if (fixed.empty())
        for (std::size_t r = 0; r < schedule.size(); ++r) fixed.push_back(r);
    double sup_h = -std::numeric_limits<double>::infinity();
    for (std::size_t r : fixed)
        sup_h = std::max(sup_h, run.bounds.state_at(run.rule_labels[r], n_max).upper);
    report.sup_fixed_sup_entropy = sup_h;

    std::vector<int> ns;
    for (const auto& [n, q] : run.bounds.per_n) ns.push_back(n);
    for (int n : ns) {
        for (double delta : deltas) {
            double worst = 0.0;
            for (std::size_t r = 0; r < schedule.size(); ++r) {
                const auto& values = run.samples.at({r, n});
                const auto over = std::count_if(values.begin(), values.end(),
                                                [&](double v) { return v > sup_h + delta; });
                worst = std::max(worst, double(over) / double(values.size()));
            }
            report.tail_table[{n, delta}] = worst;
        }
    }

    bool uniform = true, non_uniform = false;
    for (double delta : deltas) {
        const double tail_last = report.tail_table.at({ns.back(), delta});
        const double tail_first = report.tail_table.at({ns.front(), delta});
        if (!(tail_last <= 0.05 && tail_last <= tail_first + 0.02)) uniform = false;
        if (tail_last >= 0.5) non_uniform = true;
    }
    report.verdict = uniform ? "uniform" : (non_uniform ? "non-uniform" : "inconclusive");
    return report;
}

UniformityReport check_uniformity(const CompoundSource& source, const StateSchedule& schedule,
                                  const EstimatorSettings& settings, std::uint64_t master_seed,
                                  const std::vector<double>& deltas) {
    EstimatorSettings with_samples = settings;
    with_samples.keep_samples = true;
    const EstimationRun run = estimate_spectrum(source, schedule, with_samples, master_seed);
    return check_uniformity(run, schedule, deltas);
}

}  // namespace cclab
