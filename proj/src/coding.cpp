#include "cclab/coding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "cclab/logmath.hpp"
#include "cclab/parallel.hpp"

namespace cclab {

// ---- Codebook ---------------------------------------------------------------

Codebook::Codebook(Alphabet a, int blocklength, double rate_bits, std::uint64_t seed_in)
    : alphabet(a), n(blocklength), rate(rate_bits), seed(seed_in) {
    if (n < 1) throw InvalidArgument("Codebook: n must be >= 1");
    if (!(rate_bits >= 0.0)) throw InvalidArgument("Codebook: rate must be non-negative");
    count = std::max(1.0, std::ceil(std::exp2(double(n) * rate_bits)));
}

std::optional<std::uint64_t> Codebook::exact_count() const {
    if (count > 9.0e18) return std::nullopt;
    return static_cast<std::uint64_t>(count);
}

void Codebook::codeword_into(std::uint64_t index, Symbol* out) const {
    if (double(index) >= count) throw InvalidArgument("Codebook: index out of range");
    Rng rng(derive_seed(seed, index));
    const std::uint32_t M = alphabet.M;
    for (int k = 0; k < n; ++k) out[k] = static_cast<Symbol>(rng.next_below(M));
}

SeqM Codebook::codeword(std::uint64_t index) const {
    SeqM x(alphabet, std::size_t(n));
    codeword_into(index, x.data());
    return x;
}

// ---- ML decoding ---------------------------------------------------------------

std::uint64_t ml_decode(const SeqM& y, const Codebook& codebook, const NoiseModel& model,
                        double s, IsiMap g, std::uint64_t decode_cap) {
    const auto exact = codebook.exact_count();
    if (!exact || *exact > decode_cap)
        throw CapacityExceeded("ml_decode: codebook exceeds decode cap");
    const std::uint64_t K = *exact;
    const std::uint32_t M = codebook.alphabet.M;
    const auto n = std::size_t(codebook.n);

    SeqM x(codebook.alphabet, n);
    SeqM z(codebook.alphabet, n);
    SeqM xi(codebook.alphabet, n);
    std::uint64_t best = 0;
    double best_lp = -std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (std::uint64_t w = 0; w < K; ++w) {
        codebook.codeword_into(w, x.data());
        isi_map_into(x, g, z.data());
        for (std::size_t k = 0; k < n; ++k) {
            std::uint32_t v = std::uint32_t(y[k]) + M - std::uint32_t(z[k]);
            if (v >= M) v -= M;
            xi.data()[k] = static_cast<Symbol>(v);
        }
        const double lp = model.log_prob(s, xi);
        if (!have_best || lp > best_lp) {  // ties keep the lowest index
            best = w;
            best_lp = lp;
            have_best = true;
        }
    }
    return best;
}

// ---- sweep -----------------------------------------------------------------------

namespace {

// Average over the transmitted position of the probability that no competitor
// outranks the true message: (1/K) sum_j (1-q_gt-q_eq)^j (1-q_gt)^(K-1-j).
double ml_correct_probability(double q_gt, double q_eq, double K) {
    const double b = 1.0 - q_gt;
    if (b <= 0.0) return 0.0;
    const double log_b = std::log1p(-q_gt);
    if (q_eq <= 0.0) return std::exp((K - 1.0) * log_b);
    const double one_minus_rho = q_eq / b;
    if (one_minus_rho >= 1.0) return std::exp((K - 1.0) * log_b) / K;  // only j = 0 survives
    const double log_rho = std::log1p(-one_minus_rho);
    const double one_minus_rho_K = -std::expm1(K * log_rho);
    const double factor = one_minus_rho_K / (K * one_minus_rho);
    return std::exp((K - 1.0) * log_b) * factor;
}

std::uint64_t cell_key(int n, double rate) {
    return hash_mix(std::uint64_t(n), std::bit_cast<std::uint64_t>(rate));
}

struct TrialStats {
    double sum = 0.0;
    double sumsq = 0.0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
    }
    double mean(std::int64_t t) const { return sum / double(t); }
    double halfwidth(std::int64_t t) const {
        if (t < 2) return 0.0;
        const double m = sum / double(t);
        const double var = std::max(0.0, sumsq / double(t) - m * m);
        return 1.96 * std::sqrt(var / double(t - 1));
    }
};

}  // namespace

std::vector<CodingResult> run_error_sweep(const NoiseModel& model, const StateSchedule& schedule,
                                          const SweepSettings& settings,
                                          std::uint64_t master_seed) {
    schedule.validate();
    if (settings.trials < 200) throw InvalidArgument("run_error_sweep: trials must be >= 200");
    std::vector<CodingResult> results;
    for (int n : settings.n_grid) {
        for (double rate : settings.rate_grid) {
            std::vector<CodingResult> cell_rows;
            for (std::size_t r = 0; r < schedule.size(); ++r) {
                const std::string label = schedule.label(r);
                const std::uint64_t label_hash = fnv1a64(label.data(), label.size());
                const double state = schedule.state_at(r, n);
                const Codebook probe(model.alphabet(), n, rate, 0);
                const auto exact = probe.exact_count();
                const bool fits = exact && *exact <= settings.decode_cap;

                bool analytic = false;
                if (settings.mode == SweepMode::BruteMl) {
                    if (!fits) {
                        std::ostringstream os;
                        os << "run_error_sweep: skipping n=" << n << " R=" << rate << " state "
                           << label << " (codebook exceeds decode cap)";
                        emit_warning(os.str());
                        continue;
                    }
                } else if (settings.mode == SweepMode::Analytic) {
                    analytic = true;
                } else {
                    analytic = !fits;
                }

                std::optional<LikelihoodClasses> classes;
                if (analytic) {
                    classes = model.likelihood_classes(state, n);
                    if (!classes) {
                        std::ostringstream os;
                        os << "run_error_sweep: skipping n=" << n << " R=" << rate << " state "
                           << label << " (no likelihood classes for analytic mode)";
                        emit_warning(os.str());
                        continue;
                    }
                }

                const std::int64_t trials = settings.trials;
                std::vector<double> errs(static_cast<std::size_t>(trials), 0.0);
                const std::uint64_t cell_seed =
                    derive_seed(master_seed, label_hash, cell_key(n, rate));
                const std::int64_t chunk = 256;
                const auto chunks = std::size_t((trials + chunk - 1) / chunk);
                parallel_for(chunks, settings.workers, [&](std::size_t c) {
                    const std::int64_t lo = std::int64_t(c) * chunk;
                    const std::int64_t hi = std::min<std::int64_t>(lo + chunk, trials);
                    for (std::int64_t t = lo; t < hi; ++t) {
                        const std::uint64_t trial_seed = derive_seed(cell_seed, std::uint64_t(t));
                        Rng rng(derive_seed(trial_seed, 2));
                        if (analytic) {
                            const SeqM xi = model.sample(state, n, rng);
                            const std::size_t cls = model.likelihood_class_index(state, xi);
                            const double pc = ml_correct_probability(
                                classes->q_gt.at(cls), classes->q_eq.at(cls), probe.count);
                            errs[std::size_t(t)] = 1.0 - pc;
                        } else {
                            const Codebook cb(model.alphabet(), n, rate,
                                              derive_seed(trial_seed, 1));
                            const std::uint64_t K = *cb.exact_count();
                            const std::uint64_t w = rng.next_below64(K);
                            const SeqM x = cb.codeword(w);
                            const SeqM z = isi_map(x, settings.isi);
                            const SeqM xi = model.sample(state, n, rng);
                            const SeqM y = add_mod(z, xi);
                            const std::uint64_t decoded =
                                ml_decode(y, cb, model, state, settings.isi, settings.decode_cap);
                            errs[std::size_t(t)] = decoded == w ? 0.0 : 1.0;
                        }
                    }
                });
                TrialStats stats;
                for (double e : errs) stats.add(e);
                CodingResult row;
                row.model = model.kind();
                row.state_label = label;
                row.mode = analytic ? "analytic" : "ml";
                row.n = n;
                row.rate = rate;
                row.codewords = probe.count;
                row.trials = trials;
                row.errors = stats.sum;
                row.error_rate = stats.mean(trials);
                row.halfwidth = stats.halfwidth(trials);
                row.seed = cell_seed;
                cell_rows.push_back(row);
            }
            if (!cell_rows.empty()) {
                CodingResult compound = *std::max_element(
                    cell_rows.begin(), cell_rows.end(),
                    [](const CodingResult& a, const CodingResult& b) {
                        return a.error_rate < b.error_rate;
                    });
                compound.state_label = "compound";
                compound.mode = "compound";
                results.insert(results.end(), cell_rows.begin(), cell_rows.end());
                results.push_back(compound);
            }
        }
    }
    return results;
}

// ---- feedback schemes --------------------------------------------------------------

namespace {

// Incremental z_k = sum_{i=0}^{depth} x_{k-i} mod M.
class IsiFilter {
public:
    IsiFilter(std::uint32_t M, std::uint32_t depth) : m_(M), depth_(depth) {}
    Symbol push(Symbol x) {
        history_.push_back(x);
        window_ += x;
        if (history_.size() > std::size_t(depth_) + 1) {
            window_ += m_ - history_[history_.size() - std::size_t(depth_) - 2];
        }
        window_ %= m_;
        return static_cast<Symbol>(window_);
    }
    Symbol last_z() const { return static_cast<Symbol>(window_); }

private:
    std::uint32_t m_, depth_;
    std::uint32_t window_ = 0;
    std::vector<Symbol> history_;
};

class PlainSession final : public FeedbackScheme::Session {
public:
    explicit PlainSession(SeqM codeword) : c_(std::move(codeword)) {}
    Symbol next_symbol(std::optional<Symbol> prev_y) override {
        (void)prev_y;
        return c_[k_++];
    }

private:
    SeqM c_;
    std::size_t k_ = 0;
};

class NoFeedbackScheme final : public FeedbackScheme {
public:
    std::string name() const override { return "uniform_no_feedback"; }
    std::unique_ptr<Session> begin(SeqM codeword, IsiMap) const override {
        return std::make_unique<PlainSession>(std::move(codeword));
    }
};

// Receives the fed-back outputs but encodes exactly like the baseline; its
// results must be bit-identical under shared seeds.
class IgnoreFeedbackScheme final : public FeedbackScheme {
public:
    std::string name() const override { return "ignore_feedback"; }
    std::unique_ptr<Session> begin(SeqM codeword, IsiMap) const override {
        return std::make_unique<PlainSession>(std::move(codeword));
    }
};

// The transmitter knows its own x^{k-1} and the fed-back y^{k-1}, hence the
// realized noise xi_{k-1} exactly; both heuristics below exploit that.
class RetransmitSession final : public FeedbackScheme::Session {
public:
    RetransmitSession(SeqM codeword, IsiMap g)
        : c_(std::move(codeword)), filter_(c_.alphabet().M, g.depth) {}
    Symbol next_symbol(std::optional<Symbol> prev_y) override {
        const std::uint32_t M = c_.alphabet().M;
        if (prev_y) {
            const Symbol implied = static_cast<Symbol>(
                (std::uint32_t(*prev_y) + M - std::uint32_t(filter_.last_z())) % M);
            if (implied == 0 && pointer_ + 1 < c_.size()) ++pointer_;
        }
        const Symbol x = c_[pointer_];
        filter_.push(x);
        return x;
    }

private:
    SeqM c_;
    IsiFilter filter_;
    std::size_t pointer_ = 0;
};

class RetransmitScheme final : public FeedbackScheme {
public:
    std::string name() const override { return "retransmit_on_hit"; }
    std::unique_ptr<Session> begin(SeqM codeword, IsiMap g) const override {
        return std::make_unique<RetransmitSession>(std::move(codeword), g);
    }
};

class PrecancelSession final : public FeedbackScheme::Session {
public:
    PrecancelSession(SeqM codeword, IsiMap g)
        : c_(std::move(codeword)), filter_(c_.alphabet().M, g.depth) {}
    Symbol next_symbol(std::optional<Symbol> prev_y) override {
        const std::uint32_t M = c_.alphabet().M;
        Symbol predicted = 0;
        if (prev_y) {
            predicted = static_cast<Symbol>(
                (std::uint32_t(*prev_y) + M - std::uint32_t(filter_.last_z())) % M);
        }
        const Symbol x = static_cast<Symbol>(
            (std::uint32_t(c_[k_++]) + M - std::uint32_t(predicted)) % M);
        filter_.push(x);
        return x;
    }

private:
    SeqM c_;
    IsiFilter filter_;
    std::size_t k_ = 0;
};

class PrecancelScheme final : public FeedbackScheme {
public:
    std::string name() const override { return "precancel_last_noise"; }
    std::unique_ptr<Session> begin(SeqM codeword, IsiMap g) const override {
        return std::make_unique<PrecancelSession>(std::move(codeword), g);
    }
};

// Teacher-forced exact ML for an arbitrary causal scheme: replays the encoder
// on the observed output for every candidate message.
std::uint64_t ml_decode_feedback(const SeqM& y, const Codebook& cb, const FeedbackScheme& scheme,
                                 const NoiseModel& model, double s, IsiMap g) {
    const std::uint64_t K = *cb.exact_count();
    const std::uint32_t M = cb.alphabet.M;
    const auto n = std::size_t(cb.n);
    SeqM xi(cb.alphabet, n);
    std::uint64_t best = 0;
    double best_lp = -std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (std::uint64_t w = 0; w < K; ++w) {
        auto session = scheme.begin(cb.codeword(w), g);
        IsiFilter filter(M, g.depth);
        for (std::size_t k = 0; k < n; ++k) {
            const Symbol x =
                session->next_symbol(k ? std::optional<Symbol>(y[k - 1]) : std::nullopt);
            const Symbol z = filter.push(x);
            xi.data()[k] =
                static_cast<Symbol>((std::uint32_t(y[k]) + M - std::uint32_t(z)) % M);
        }
        const double lp = model.log_prob(s, xi);
        if (!have_best || lp > best_lp) {
            best = w;
            best_lp = lp;
            have_best = true;
        }
    }
    return best;
}

}  // namespace

std::shared_ptr<FeedbackScheme> make_no_feedback() { return std::make_shared<NoFeedbackScheme>(); }
std::shared_ptr<FeedbackScheme> make_ignore_feedback() {
    return std::make_shared<IgnoreFeedbackScheme>();
}
std::shared_ptr<FeedbackScheme> make_retransmit_on_hit() {
    return std::make_shared<RetransmitScheme>();
}
std::shared_ptr<FeedbackScheme> make_precancel_last_noise() {
    return std::make_shared<PrecancelScheme>();
}

std::vector<FeedbackComparison> run_feedback_comparison(
    const NoiseModel& model, const StateSchedule& schedule, IsiMap g,
    const std::vector<std::shared_ptr<FeedbackScheme>>& schemes, int n, double rate,
    std::int64_t trials, std::uint64_t master_seed, std::uint64_t decode_cap, int workers) {
    schedule.validate();
    if (schemes.empty()) throw InvalidArgument("run_feedback_comparison: no schemes");
    if (trials < 200) throw InvalidArgument("run_feedback_comparison: trials must be >= 200");
    const Codebook probe(model.alphabet(), n, rate, 0);
    if (!probe.exact_count() || *probe.exact_count() > decode_cap)
        throw CapacityExceeded("run_feedback_comparison: codebook exceeds decode cap");
    const std::uint32_t M = model.alphabet().M;

    // errs[scheme][trial], per trial maximized over scheduled states (compound error).
    std::vector<std::vector<double>> errs(schemes.size(),
                                          std::vector<double>(std::size_t(trials), 0.0));
    const std::int64_t chunk = 64;
    const auto chunks = std::size_t((trials + chunk - 1) / chunk);
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::int64_t lo = std::int64_t(c) * chunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk, trials);
        for (std::int64_t t = lo; t < hi; ++t) {
            for (std::size_t r = 0; r < schedule.size(); ++r) {
                const std::string label = schedule.label(r);
                const double state = schedule.state_at(r, n);
                const std::uint64_t trial_seed =
                    derive_seed(master_seed, fnv1a64(label.data(), label.size()),
                                cell_key(n, rate), std::uint64_t(t));
                const Codebook cb(model.alphabet(), n, rate, derive_seed(trial_seed, 1));
                Rng rng(derive_seed(trial_seed, 2));
                const std::uint64_t K = *cb.exact_count();
                const std::uint64_t w = rng.next_below64(K);
                const SeqM xi = model.sample(state, n, rng);
                for (std::size_t si = 0; si < schemes.size(); ++si) {
                    auto session = schemes[si]->begin(cb.codeword(w), g);
                    SeqM y(model.alphabet(), std::size_t(n));
                    IsiFilter filter(M, g.depth);
                    for (std::size_t k = 0; k < std::size_t(n); ++k) {
                        const Symbol x = session->next_symbol(
                            k ? std::optional<Symbol>(y[k - 1]) : std::nullopt);
                        const Symbol z = filter.push(x);
                        y.data()[k] = static_cast<Symbol>(
                            (std::uint32_t(z) + std::uint32_t(xi[k])) % M);
                    }
                    const std::uint64_t decoded =
                        ml_decode_feedback(y, cb, *schemes[si], model, state, g);
                    if (decoded != w) errs[si][std::size_t(t)] = 1.0;
                }
            }
        }
    });

    std::vector<FeedbackComparison> out;
    for (std::size_t si = 0; si < schemes.size(); ++si) {
        TrialStats stats;
        for (double e : errs[si]) stats.add(e);
        FeedbackComparison cmp;
        cmp.scheme = schemes[si]->name();
        cmp.error_rate = stats.mean(trials);
        cmp.halfwidth = stats.halfwidth(trials);
        TrialStats diff;
        for (std::int64_t t = 0; t < trials; ++t)
            diff.add(errs[0][std::size_t(t)] - errs[si][std::size_t(t)]);
        cmp.gain_vs_baseline = diff.mean(trials);
        cmp.gain_sigma = diff.halfwidth(trials) / 1.96;
        out.push_back(cmp);
    }
    return out;
}

// ---- Tx-CSI demo ---------------------------------------------------------------------

TxCsiDemo tx_csi_demo(const NoiseModel& model, double s, double rate, std::int64_t trials,
                      std::uint64_t master_seed, int n_factor) {
    TxCsiDemo demo;
    const int n_csi = std::max(20, n_factor * int(std::lround(std::max(1.0, s))));
    {
        SweepSettings settings;
        settings.n_grid = {n_csi};
        settings.rate_grid = {rate};
        settings.trials = trials;
        StateSchedule sched = StateSchedule::fixed_states({std::max(1.0, s)});
        auto rows = run_error_sweep(model, sched, settings, derive_seed(master_seed, 0xCC));
        demo.with_csi = rows.front();
    }
    {
        SweepSettings settings;
        const int n_adv = 40;
        settings.n_grid = {n_adv};
        settings.rate_grid = {rate};
        settings.trials = trials;
        StateSchedule sched;
        // Nature picks the worst state; s = 0 means the uncertainty set is
        // degenerate and there is no interference to amplify.
        if (s > 0.0)
            sched.add_linear(1.0);
        else
            sched.add_fixed(0.0);
        auto rows = run_error_sweep(model, sched, settings, derive_seed(master_seed, 0xDD));
        demo.without_csi = rows.front();
    }
    return demo;
}

// ---- uniform-output check ---------------------------------------------------------------

namespace {

double wilson_hilferty_chi2(double dof, double z) {
    const double t = 1.0 - 2.0 / (9.0 * dof) + z * std::sqrt(2.0 / (9.0 * dof));
    return dof * t * t * t;
}

}  // namespace

OutputCheck uniform_output_check(const NoiseModel& model, double s, int n, IsiMap g,
                                 const std::vector<double>& input_pmf, std::uint64_t cap,
                                 std::uint64_t seed, std::int64_t stat_samples) {
    OutputCheck check;
    const std::uint32_t M = model.alphabet().M;
    std::vector<double> px = input_pmf;
    if (px.empty()) px.assign(M, 1.0 / double(M));
    if (px.size() != M) throw InvalidArgument("uniform_output_check: input pmf size mismatch");

    std::uint64_t space = 1;
    bool fits = true;
    for (int k = 0; k < n; ++k) {
        if (space > cap / M) {
            fits = false;
            break;
        }
        space *= M;
    }

    if (fits) {
        check.exact = true;
        // Input law pushed through the channel map.
        std::vector<double> pz(space, 0.0);
        SeqM x(model.alphabet(), std::size_t(n));
        SeqM z(model.alphabet(), std::size_t(n));
        for (std::uint64_t idx = 0;; ++idx) {
            double p = 1.0;
            for (int k = 0; k < n; ++k) p *= px[x[std::size_t(k)]];
            isi_map_into(x, g, z.data());
            std::uint64_t zi = 0;
            for (int k = 0; k < n; ++k) zi = zi * M + z[std::size_t(k)];
            pz[zi] += p;
            if (idx + 1 == space) break;
            for (int k = n - 1; k >= 0; --k) {
                Symbol v = x[std::size_t(k)];
                if (v + 1u < M) {
                    x.data()[k] = Symbol(v + 1);
                    break;
                }
                x.data()[k] = 0;
            }
        }
        // Convolve with each product branch of the noise, position by position.
        std::vector<double> py(space, 0.0);
        std::vector<double> work;
        std::vector<double> fiber(M);
        for (const auto& branch : model.product_branches(s, n)) {
            work = pz;
            for (int k = 0; k < n; ++k) {
                const auto& pmf = branch.pmf[std::size_t(k)];
                std::uint64_t stride = 1;
                for (int j = n - 1; j > k; --j) stride *= M;
                for (std::uint64_t base = 0; base < space; ++base) {
                    if ((base / stride) % M != 0) continue;
                    for (std::uint32_t y = 0; y < M; ++y) {
                        double acc = 0.0;
                        for (std::uint32_t a = 0; a < M; ++a) {
                            const std::uint32_t zd = (y + M - a) % M;
                            acc += pmf[a] * work[base + zd * stride];
                        }
                        fiber[y] = acc;
                    }
                    for (std::uint32_t y = 0; y < M; ++y) work[base + y * stride] = fiber[y];
                }
            }
            for (std::uint64_t i = 0; i < space; ++i) py[i] += branch.weight * work[i];
        }
        const double target = 1.0 / double(space);
        double dev = 0.0;
        for (double p : py) dev = std::max(dev, std::abs(p - target));
        check.max_abs_dev = dev;
        check.uniform = dev <= 1e-9;
        return check;
    }

    // Statistical fallback: chi-square on the pooled output-symbol histogram.
    check.exact = false;
    std::vector<std::int64_t> hist(M, 0);
    Rng rng(seed);
    SeqM x(model.alphabet(), std::size_t(n));
    SeqM z(model.alphabet(), std::size_t(n));
    for (std::int64_t t = 0; t < stat_samples; ++t) {
        for (int k = 0; k < n; ++k) {
            const double u = rng.next_double();
            double acc = 0.0;
            Symbol sym = Symbol(M - 1);
            for (std::uint32_t m = 0; m + 1 < M; ++m) {
                acc += px[m];
                if (u < acc) {
                    sym = Symbol(m);
                    break;
                }
            }
            x.data()[k] = sym;
        }
        isi_map_into(x, g, z.data());
        const SeqM xi = model.sample(s, n, rng);
        for (int k = 0; k < n; ++k)
            ++hist[(std::uint32_t(z[std::size_t(k)]) + std::uint32_t(xi[std::size_t(k)])) % M];
    }
    const double expected = double(stat_samples) * double(n) / double(M);
    double chi2 = 0.0;
    for (std::uint32_t m = 0; m < M; ++m) {
        const double d = double(hist[m]) - expected;
        chi2 += d * d / expected;
    }
    check.chi2_stat = chi2;
    check.chi2_crit = wilson_hilferty_chi2(double(M - 1), 3.09);  // ~0.1% level
    check.uniform = chi2 <= check.chi2_crit;
    return check;
}

}  // namespace cclab
