#include "cclab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cclab/logmath.hpp"

namespace cclab {

namespace {

// count * log2p with the conventions 0 * (-inf) = 0 and count > 0, p = 0 -> -inf.
double count_log2(double count, double log2p) {
    if (count == 0.0) return 0.0;
    if (is_neg_inf(log2p)) return kNegInf;
    return count * log2p;
}

Symbol draw_pmf(const std::vector<double>& pmf, Rng& rng) {
    const double u = rng.next_double();
    double acc = 0.0;
    for (std::size_t m = 0; m + 1 < pmf.size(); ++m) {
        acc += pmf[m];
        if (u < acc) return static_cast<Symbol>(m);
    }
    return static_cast<Symbol>(pmf.size() - 1);
}

std::vector<double> log2_of(const std::vector<double>& pmf) {
    std::vector<double> out(pmf.size());
    for (std::size_t m = 0; m < pmf.size(); ++m)
        out[m] = pmf[m] > 0.0 ? std::log2(pmf[m]) : kNegInf;
    return out;
}

void validate_pmf(const std::vector<double>& pmf, std::size_t M) {
    if (pmf.size() != M) throw InvalidArgument("pmf size must equal M");
    double sum = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0) || p > 1.0) throw InvalidArgument("pmf entries must be in [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("pmf must sum to 1");
}

double binomial_coeff(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * double(n - k + i) / double(i);
    return c;
}

int require_block_state(double s, int n, const char* kind) {
    if (!(s >= 0.0) || std::abs(s - std::round(s)) > 1e-9)
        throw InvalidState(std::string(kind) + ": state must be a non-negative integer");
    (void)n;
    return static_cast<int>(std::round(s));
}

std::vector<double> binary_pmf(double q) { return {1.0 - q, q}; }

}  // namespace

// ---- LikelihoodClasses ----------------------------------------------------

void LikelihoodClasses::finalize() {
    if (log2_space > 1020.0)
        throw CapacityExceeded("likelihood_classes: sequence space exceeds double range");
    const double space = std::exp2(log2_space);
    const std::size_t k = lp.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (lp[a] != lp[b]) return lp[a] > lp[b];
        return a < b;
    });
    q_gt.assign(k, 0.0);
    q_eq.assign(k, 0.0);
    double cum_above = 0.0;
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        double tie_count = 0.0;
        while (j < k && lp[order[j]] == lp[order[i]]) tie_count += count[order[j++]];
        for (std::size_t t = i; t < j; ++t) {
            q_gt[order[t]] = cum_above / space;
            q_eq[order[t]] = tie_count / space;
        }
        cum_above += tie_count;
        i = j;
    }
}

// ---- NoiseModel base -------------------------------------------------------

double NoiseModel::sample_log_prob(double s, int n, Rng& rng) const {
    SeqM xi = sample(s, n, rng);
    return log_prob(s, xi);
}

std::size_t NoiseModel::likelihood_class_index(double s, const SeqM& xi) const {
    (void)s;
    (void)xi;
    throw InvalidArgument(kind() + ": no likelihood classes");
}

void NoiseModel::warn_clamp_once(double s, int n) const {
    if (!warned_clamp_.exchange(true)) {
        std::ostringstream os;
        os << kind() << ": state " << s << " exceeds blocklength " << n
           << "; clamped to s = n (further clamps not reported)";
        emit_warning(os.str());
    }
}

std::vector<SupportAtom> NoiseModel::enumerate_support(double s, int n, std::uint64_t cap) const {
    if (n < 1) throw InvalidArgument("enumerate_support: n must be >= 1");
    const std::uint64_t M = alphabet().M;
    std::uint64_t total = 1;
    for (int k = 0; k < n; ++k) {
        if (total > cap / M) throw CapacityExceeded("enumerate_support: M^n exceeds cap");
        total *= M;
    }
    std::vector<SupportAtom> atoms;
    SeqM xi(alphabet(), std::size_t(n));
    for (std::uint64_t idx = 0;; ++idx) {
        const double lp = log_prob(s, xi);
        if (!is_neg_inf(lp)) atoms.push_back({xi, std::exp2(lp)});
        if (idx + 1 == total) break;
        // odometer increment
        for (int k = n - 1; k >= 0; --k) {
            Symbol v = xi[std::size_t(k)];
            if (v + 1u < M) {
                xi.data()[k] = Symbol(v + 1);
                break;
            }
            xi.data()[k] = 0;
        }
    }
    return atoms;
}

// ---- BlockInterference -----------------------------------------------------

BlockInterference::BlockInterference(Alphabet a, std::vector<double> head_pmf) : NoiseModel(a) {
    if (head_pmf.empty()) head_pmf.assign(a.M, 1.0 / a.M);
    validate_pmf(head_pmf, a.M);
    pmf_ = std::move(head_pmf);
    log2_pmf_ = log2_of(pmf_);
}

double BlockInterference::effective_state(double s, int n) const {
    int si = require_block_state(s, n, "block_interference");
    if (si > n) {
        warn_clamp_once(s, n);
        si = n;
    }
    return si;
}

SeqM BlockInterference::sample(double s, int n, Rng& rng) const {
    const int si = static_cast<int>(effective_state(s, n));
    SeqM xi(alphabet(), std::size_t(n));
    for (int k = 0; k < si; ++k) xi.data()[k] = draw_pmf(pmf_, rng);
    return xi;
}

double BlockInterference::log_prob(double s, const SeqM& xi) const {
    const int n = static_cast<int>(xi.size());
    const int si = static_cast<int>(effective_state(s, n));
    for (int k = si; k < n; ++k)
        if (xi[std::size_t(k)] != 0) return kNegInf;
    std::array<std::uint32_t, 256> cnt{};
    for (int k = 0; k < si; ++k) ++cnt[xi[std::size_t(k)]];
    double lp = 0.0;
    for (std::uint32_t m = 0; m < alphabet().M; ++m) {
        const double term = count_log2(cnt[m], log2_pmf_[m]);
        if (is_neg_inf(term)) return kNegInf;
        lp += term;
    }
    return lp;
}

double BlockInterference::sample_log_prob(double s, int n, Rng& rng) const {
    const int si = static_cast<int>(effective_state(s, n));
    std::array<std::uint32_t, 256> cnt{};
    for (int k = 0; k < si; ++k) ++cnt[draw_pmf(pmf_, rng)];
    double lp = 0.0;
    for (std::uint32_t m = 0; m < alphabet().M; ++m) lp += count_log2(cnt[m], log2_pmf_[m]);
    return lp;
}

std::vector<ProductBranch> BlockInterference::product_branches(double s, int n) const {
    const int si = static_cast<int>(effective_state(s, n));
    ProductBranch b;
    b.weight = 1.0;
    b.pmf.reserve(std::size_t(n));
    std::vector<double> zero(alphabet().M, 0.0);
    zero[0] = 1.0;
    for (int k = 0; k < n; ++k) b.pmf.push_back(k < si ? pmf_ : zero);
    return {b};
}

std::optional<LikelihoodClasses> BlockInterference::likelihood_classes(double s, int n) const {
    const int si = static_cast<int>(effective_state(s, n));
    const bool equiprobable =
        std::all_of(pmf_.begin(), pmf_.end(), [&](double p) { return p == pmf_[0]; });
    LikelihoodClasses c;
    c.log2_space = double(n) * std::log2(double(alphabet().M));
    if (equiprobable) {
        c.lp = {count_log2(si, log2_pmf_[0])};
        c.count = {std::pow(double(alphabet().M), si)};
    } else if (alphabet().M == 2) {
        for (int k = 0; k <= si; ++k) {
            c.lp.push_back(count_log2(si - k, log2_pmf_[0]) + count_log2(k, log2_pmf_[1]));
            c.count.push_back(binomial_coeff(si, k));
        }
    } else {
        return std::nullopt;
    }
    c.finalize();
    return c;
}

std::size_t BlockInterference::likelihood_class_index(double s, const SeqM& xi) const {
    const int si = static_cast<int>(effective_state(s, static_cast<int>(xi.size())));
    const bool equiprobable =
        std::all_of(pmf_.begin(), pmf_.end(), [&](double p) { return p == pmf_[0]; });
    if (equiprobable) return 0;
    std::size_t w = 0;
    for (int k = 0; k < si; ++k) w += xi[std::size_t(k)];
    return w;
}

// ---- InterferencePlusNoise --------------------------------------------------

InterferencePlusNoise::InterferencePlusNoise(double p1, double p2)
    : NoiseModel(Alphabet(2)), p1_(p1), p2_(p2) {
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
        throw InvalidArgument("interference_plus_noise: probabilities must be in [0,1]");
    if (!(p2 < p1 && p1 <= 0.5))
        emit_warning("interference_plus_noise: parameters outside 0 <= p2 < p1 <= 1/2; "
                     "Tx-CSI gain is zero in this regime");
}

double InterferencePlusNoise::effective_state(double s, int n) const {
    int si = require_block_state(s, n, "interference_plus_noise");
    if (si > n) {
        warn_clamp_once(s, n);
        si = n;
    }
    return si;
}

SeqM InterferencePlusNoise::sample(double s, int n, Rng& rng) const {
    const int si = static_cast<int>(effective_state(s, n));
    SeqM xi(alphabet(), std::size_t(n));
    for (int k = 0; k < n; ++k)
        xi.data()[k] = rng.next_double() < (k < si ? p1_ : p2_) ? 1 : 0;
    return xi;
}

double InterferencePlusNoise::log_prob(double s, const SeqM& xi) const {
    const int n = static_cast<int>(xi.size());
    const int si = static_cast<int>(effective_state(s, n));
    int k1 = 0, k2 = 0;
    for (int k = 0; k < si; ++k) k1 += xi[std::size_t(k)];
    for (int k = si; k < n; ++k) k2 += xi[std::size_t(k)];
    const double lp = count_log2(k1, std::log2(p1_)) + count_log2(si - k1, std::log2(1.0 - p1_)) +
                      count_log2(k2, std::log2(p2_)) +
                      count_log2(n - si - k2, std::log2(1.0 - p2_));
    return lp;
}

double InterferencePlusNoise::sample_log_prob(double s, int n, Rng& rng) const {
    const int si = static_cast<int>(effective_state(s, n));
    int k1 = 0, k2 = 0;
    for (int k = 0; k < si; ++k) k1 += rng.next_double() < p1_ ? 1 : 0;
    for (int k = si; k < n; ++k) k2 += rng.next_double() < p2_ ? 1 : 0;
    return count_log2(k1, std::log2(p1_)) + count_log2(si - k1, std::log2(1.0 - p1_)) +
           count_log2(k2, std::log2(p2_)) + count_log2(n - si - k2, std::log2(1.0 - p2_));
}

std::vector<ProductBranch> InterferencePlusNoise::product_branches(double s, int n) const {
    const int si = static_cast<int>(effective_state(s, n));
    ProductBranch b;
    b.weight = 1.0;
    for (int k = 0; k < n; ++k) b.pmf.push_back(binary_pmf(k < si ? p1_ : p2_));
    return {b};
}

std::optional<LikelihoodClasses> InterferencePlusNoise::likelihood_classes(double s, int n) const {
    const int si = static_cast<int>(effective_state(s, n));
    const int tail = n - si;
    LikelihoodClasses c;
    c.log2_space = double(n);
    for (int k1 = 0; k1 <= si; ++k1) {
        for (int k2 = 0; k2 <= tail; ++k2) {
            c.lp.push_back(count_log2(k1, std::log2(p1_)) +
                           count_log2(si - k1, std::log2(1.0 - p1_)) +
                           count_log2(k2, std::log2(p2_)) +
                           count_log2(tail - k2, std::log2(1.0 - p2_)));
            c.count.push_back(binomial_coeff(si, k1) * binomial_coeff(tail, k2));
        }
    }
    c.finalize();
    return c;
}

std::size_t InterferencePlusNoise::likelihood_class_index(double s, const SeqM& xi) const {
    const int n = static_cast<int>(xi.size());
    const int si = static_cast<int>(effective_state(s, n));
    int k1 = 0, k2 = 0;
    for (int k = 0; k < si; ++k) k1 += xi[std::size_t(k)];
    for (int k = si; k < n; ++k) k2 += xi[std::size_t(k)];
    return std::size_t(k1) * std::size_t(n - si + 1) + std::size_t(k2);
}

// ---- DecayingBernoulli -------------------------------------------------------

DecayingBernoulli::DecayingBernoulli() : NoiseModel(Alphabet(2)) {}

double DecayingBernoulli::flip_probability(double s, int i) { return s / (2.0 * (double(i) + s)); }

double DecayingBernoulli::effective_state(double s, int n) const {
    (void)n;
    if (!(s >= 0.0) || !std::isfinite(s))
        throw InvalidState("decaying_bernoulli: state must be a real s >= 0");
    return s;
}

SeqM DecayingBernoulli::sample(double s, int n, Rng& rng) const {
    effective_state(s, n);
    SeqM xi(alphabet(), std::size_t(n));
    for (int i = 1; i <= n; ++i)
        xi.data()[i - 1] = rng.next_double() < flip_probability(s, i) ? 1 : 0;
    return xi;
}

double DecayingBernoulli::log_prob(double s, const SeqM& xi) const {
    const int n = static_cast<int>(xi.size());
    effective_state(s, n);
    double lp = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double p = flip_probability(s, i);
        const double term = xi[std::size_t(i - 1)] ? (p > 0.0 ? std::log2(p) : kNegInf)
                                                   : (p < 1.0 ? std::log2(1.0 - p) : kNegInf);
        if (is_neg_inf(term)) return kNegInf;
        lp += term;
    }
    return lp;
}

double DecayingBernoulli::sample_log_prob(double s, int n, Rng& rng) const {
    effective_state(s, n);
    // Per-position log-probabilities depend only on (s, n); cache them per
    // thread so bulk estimation does not pay two log2 calls per symbol.
    thread_local const DecayingBernoulli* cached_model = nullptr;
    thread_local double cached_s = -1.0;
    thread_local int cached_n = -1;
    thread_local std::vector<double> pr, lp_one, lp_zero;
    if (cached_model != this || cached_s != s || cached_n != n) {
        pr.resize(std::size_t(n));
        lp_one.resize(std::size_t(n));
        lp_zero.resize(std::size_t(n));
        for (int i = 1; i <= n; ++i) {
            const double p = flip_probability(s, i);
            pr[std::size_t(i - 1)] = p;
            lp_one[std::size_t(i - 1)] = p > 0.0 ? std::log2(p) : kNegInf;
            lp_zero[std::size_t(i - 1)] = p < 1.0 ? std::log2(1.0 - p) : kNegInf;
        }
        cached_model = this;
        cached_s = s;
        cached_n = n;
    }
    double lp = 0.0;
    for (int i = 0; i < n; ++i)
        lp += rng.next_double() < pr[std::size_t(i)] ? lp_one[std::size_t(i)]
                                                     : lp_zero[std::size_t(i)];
    return lp;
}

std::vector<ProductBranch> DecayingBernoulli::product_branches(double s, int n) const {
    effective_state(s, n);
    ProductBranch b;
    b.weight = 1.0;
    for (int i = 1; i <= n; ++i) b.pmf.push_back(binary_pmf(flip_probability(s, i)));
    return {b};
}

// ---- ErgodicMixture ----------------------------------------------------------

ErgodicMixture::ErgodicMixture(double p, std::shared_ptr<const NoiseModel> w,
                               std::shared_ptr<const NoiseModel> z)
    : NoiseModel(w ? w->alphabet() : Alphabet(2)), p_(p), w_(std::move(w)), z_(std::move(z)) {
    if (!w_ || !z_) throw InvalidArgument("ergodic_mixture: two components required");
    if (!(w_->alphabet() == z_->alphabet()))
        throw InvalidArgument("ergodic_mixture: component alphabets differ");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("ergodic_mixture: p must be in [0,1]");
}

double ErgodicMixture::effective_state(double s, int n) const {
    w_->effective_state(s, n);
    z_->effective_state(s, n);
    return s;
}

SeqM ErgodicMixture::sample(double s, int n, Rng& rng) const {
    const bool first = rng.next_double() < p_;
    return first ? w_->sample(s, n, rng) : z_->sample(s, n, rng);
}

double ErgodicMixture::log_prob(double s, const SeqM& xi) const {
    const double la = p_ > 0.0 ? std::log2(p_) + w_->log_prob(s, xi) : kNegInf;
    const double lb = p_ < 1.0 ? std::log2(1.0 - p_) + z_->log_prob(s, xi) : kNegInf;
    return log2_add(la, lb);
}

double ErgodicMixture::sample_log_prob(double s, int n, Rng& rng) const {
    const bool first = rng.next_double() < p_;
    SeqM xi = first ? w_->sample(s, n, rng) : z_->sample(s, n, rng);
    return log_prob(s, xi);
}

std::vector<ProductBranch> ErgodicMixture::product_branches(double s, int n) const {
    std::vector<ProductBranch> out;
    for (auto b : w_->product_branches(s, n)) {
        b.weight *= p_;
        if (b.weight > 0.0) out.push_back(std::move(b));
    }
    for (auto b : z_->product_branches(s, n)) {
        b.weight *= 1.0 - p_;
        if (b.weight > 0.0) out.push_back(std::move(b));
    }
    return out;
}

std::optional<LikelihoodClasses> ErgodicMixture::likelihood_classes(double s, int n) const {
    (void)s;
    // Compact classes exist when both components are binary i.i.d.: the
    // Hamming weight is then a sufficient statistic for the mixture density.
    const auto* aw = dynamic_cast<const IidGeneric*>(w_.get());
    const auto* az = dynamic_cast<const IidGeneric*>(z_.get());
    if (!aw || !az || alphabet().M != 2) return std::nullopt;
    const double qw = aw->pmf()[1], qz = az->pmf()[1];
    LikelihoodClasses c;
    c.log2_space = double(n);
    for (int k = 0; k <= n; ++k) {
        const double lw = count_log2(n - k, std::log2(1.0 - qw)) + count_log2(k, std::log2(qw));
        const double lz = count_log2(n - k, std::log2(1.0 - qz)) + count_log2(k, std::log2(qz));
        const double la = p_ > 0.0 ? std::log2(p_) + lw : kNegInf;
        const double lb = p_ < 1.0 ? std::log2(1.0 - p_) + lz : kNegInf;
        c.lp.push_back(log2_add(la, lb));
        c.count.push_back(binomial_coeff(n, k));
    }
    c.finalize();
    return c;
}

std::size_t ErgodicMixture::likelihood_class_index(double s, const SeqM& xi) const {
    (void)s;
    std::size_t w = 0;
    for (std::size_t k = 0; k < xi.size(); ++k) w += xi[k];
    return w;
}

// ---- ComplementaryBlocks -------------------------------------------------------

ComplementaryBlocks::ComplementaryBlocks(double p) : NoiseModel(Alphabet(2)), p_(p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("complementary_blocks: p must be in [0,1]");
}

double ComplementaryBlocks::effective_state(double s, int n) const {
    int si = require_block_state(s, n, "complementary_blocks");
    if (si > n) {
        warn_clamp_once(s, n);
        si = n;
    }
    return si;
}

SeqM ComplementaryBlocks::sample(double s, int n, Rng& rng) const {
    const int si = static_cast<int>(effective_state(s, n));
    const bool first = rng.next_double() < p_;
    SeqM xi(alphabet(), std::size_t(n));
    if (first) {
        for (int k = 0; k < si; ++k) xi.data()[k] = rng.next_double() < 0.5 ? 1 : 0;
    } else {
        for (int k = si; k < n; ++k) xi.data()[k] = rng.next_double() < 0.5 ? 1 : 0;
    }
    return xi;
}

double ComplementaryBlocks::log_prob(double s, const SeqM& xi) const {
    const int n = static_cast<int>(xi.size());
    const int si = static_cast<int>(effective_state(s, n));
    bool head_zero = true, tail_zero = true;
    for (int k = 0; k < si; ++k)
        if (xi[std::size_t(k)]) head_zero = false;
    for (int k = si; k < n; ++k)
        if (xi[std::size_t(k)]) tail_zero = false;
    const double la = (p_ > 0.0 && tail_zero) ? std::log2(p_) - double(si) : kNegInf;
    const double lb = (p_ < 1.0 && head_zero) ? std::log2(1.0 - p_) - double(n - si) : kNegInf;
    return log2_add(la, lb);
}

double ComplementaryBlocks::sample_log_prob(double s, int n, Rng& rng) const {
    const int si = static_cast<int>(effective_state(s, n));
    const bool first = rng.next_double() < p_;
    bool other_zero = true;
    const int len = first ? si : n - si;
    for (int k = 0; k < len; ++k)
        if (rng.next_double() < 0.5) other_zero = false;
    // other_zero: the randomly drawn part happened to be all zero, so the
    // sequence also lies in the other branch's support.
    const double la = p_ > 0.0 ? std::log2(p_) - double(si) : kNegInf;
    const double lb = p_ < 1.0 ? std::log2(1.0 - p_) - double(n - si) : kNegInf;
    if (first) return log2_add(la, other_zero ? lb : kNegInf);
    return log2_add(other_zero ? la : kNegInf, lb);
}

std::vector<ProductBranch> ComplementaryBlocks::product_branches(double s, int n) const {
    const int si = static_cast<int>(effective_state(s, n));
    const std::vector<double> half = {0.5, 0.5};
    const std::vector<double> zero = {1.0, 0.0};
    std::vector<ProductBranch> out;
    if (p_ > 0.0) {
        ProductBranch b;
        b.weight = p_;
        for (int k = 0; k < n; ++k) b.pmf.push_back(k < si ? half : zero);
        out.push_back(std::move(b));
    }
    if (p_ < 1.0) {
        ProductBranch b;
        b.weight = 1.0 - p_;
        for (int k = 0; k < n; ++k) b.pmf.push_back(k < si ? zero : half);
        out.push_back(std::move(b));
    }
    return out;
}

std::optional<LikelihoodClasses> ComplementaryBlocks::likelihood_classes(double s, int n) const {
    const int si = static_cast<int>(effective_state(s, n));
    const double la = p_ > 0.0 ? std::log2(p_) - double(si) : kNegInf;
    const double lb = p_ < 1.0 ? std::log2(1.0 - p_) - double(n - si) : kNegInf;
    LikelihoodClasses c;
    c.log2_space = double(n);
    // class 0: all-zero; class 1: tail zero, head nonzero; class 2: head zero,
    // tail nonzero.
    c.lp = {log2_add(la, lb), la, lb};
    c.count = {1.0, std::exp2(double(si)) - 1.0, std::exp2(double(n - si)) - 1.0};
    c.finalize();
    return c;
}

std::size_t ComplementaryBlocks::likelihood_class_index(double s, const SeqM& xi) const {
    const int n = static_cast<int>(xi.size());
    const int si = static_cast<int>(effective_state(s, n));
    bool head_zero = true, tail_zero = true;
    for (int k = 0; k < si; ++k)
        if (xi[std::size_t(k)]) head_zero = false;
    for (int k = si; k < n; ++k)
        if (xi[std::size_t(k)]) tail_zero = false;
    if (head_zero && tail_zero) return 0;
    return tail_zero ? 1 : 2;
}

// ---- IidGeneric -----------------------------------------------------------------

IidGeneric::IidGeneric(Alphabet a, std::vector<double> pmf) : NoiseModel(a) {
    validate_pmf(pmf, a.M);
    pmf_ = std::move(pmf);
    log2_pmf_ = log2_of(pmf_);
}

std::shared_ptr<IidGeneric> IidGeneric::bernoulli(double q) {
    return std::make_shared<IidGeneric>(Alphabet(2), binary_pmf(q));
}

double IidGeneric::effective_state(double s, int n) const {
    (void)n;
    if (!std::isfinite(s)) throw InvalidState("iid_generic: state must be finite");
    return s;
}

SeqM IidGeneric::sample(double s, int n, Rng& rng) const {
    effective_state(s, n);
    SeqM xi(alphabet(), std::size_t(n));
    for (int k = 0; k < n; ++k) xi.data()[k] = draw_pmf(pmf_, rng);
    return xi;
}

double IidGeneric::log_prob(double s, const SeqM& xi) const {
    effective_state(s, static_cast<int>(xi.size()));
    std::array<std::uint32_t, 256> cnt{};
    for (std::size_t k = 0; k < xi.size(); ++k) ++cnt[xi[k]];
    double lp = 0.0;
    for (std::uint32_t m = 0; m < alphabet().M; ++m) {
        const double term = count_log2(cnt[m], log2_pmf_[m]);
        if (is_neg_inf(term)) return kNegInf;
        lp += term;
    }
    return lp;
}

double IidGeneric::sample_log_prob(double s, int n, Rng& rng) const {
    effective_state(s, n);
    std::array<std::uint32_t, 256> cnt{};
    for (int k = 0; k < n; ++k) ++cnt[draw_pmf(pmf_, rng)];
    double lp = 0.0;
    for (std::uint32_t m = 0; m < alphabet().M; ++m) lp += count_log2(cnt[m], log2_pmf_[m]);
    return lp;
}

std::vector<ProductBranch> IidGeneric::product_branches(double s, int n) const {
    effective_state(s, n);
    ProductBranch b;
    b.weight = 1.0;
    b.pmf.assign(std::size_t(n), pmf_);
    return {b};
}

std::optional<LikelihoodClasses> IidGeneric::likelihood_classes(double s, int n) const {
    effective_state(s, n);
    if (alphabet().M != 2) return std::nullopt;
    LikelihoodClasses c;
    c.log2_space = double(n);
    for (int k = 0; k <= n; ++k) {
        c.lp.push_back(count_log2(n - k, log2_pmf_[0]) + count_log2(k, log2_pmf_[1]));
        c.count.push_back(binomial_coeff(n, k));
    }
    c.finalize();
    return c;
}

std::size_t IidGeneric::likelihood_class_index(double s, const SeqM& xi) const {
    (void)s;
    std::size_t w = 0;
    for (std::size_t k = 0; k < xi.size(); ++k) w += xi[k];
    return w;
}

// ---- StateSchedule ------------------------------------------------------------

double StateRule::state_at(int n) const {
    if (rule_kind == Kind::Fixed) return value;
    return std::ceil(value * double(n) - 1e-9);
}

std::string StateRule::label() const {
    std::ostringstream os;
    if (rule_kind == Kind::Fixed) {
        os << "s=" << value;
    } else if (value == 1.0) {
        os << "s(n)=n";
    } else {
        os << "s(n)=ceil(" << value << "n)";
    }
    return os.str();
}

StateSchedule StateSchedule::fixed_states(std::vector<double> states, std::optional<double> bound) {
    StateSchedule sched;
    sched.bound = bound;
    for (double s : states) sched.rules.push_back(StateRule::fixed(s));
    sched.validate();
    return sched;
}

StateSchedule& StateSchedule::add_fixed(double s) {
    rules.push_back(StateRule::fixed(s));
    return *this;
}

StateSchedule& StateSchedule::add_linear(double coeff) {
    rules.push_back(StateRule::linear_in_n(coeff));
    return *this;
}

double StateSchedule::state_at(std::size_t rule_idx, int n) const {
    double s = rules.at(rule_idx).state_at(n);
    if (bound) s = std::min(s, *bound);
    return s;
}

std::vector<std::size_t> StateSchedule::fixed_rule_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (rules[i].rule_kind == StateRule::Kind::Fixed) idx.push_back(i);
    return idx;
}

void StateSchedule::validate() const {
    if (rules.empty()) throw InvalidArgument("state schedule must be non-empty");
    if (bound) {
        for (const auto& r : rules)
            if (r.rule_kind == StateRule::Kind::Fixed && r.value > *bound)
                throw InvalidArgument("fixed state exceeds schedule bound");
    }
    // Sample streams are keyed by rule label; duplicates would silently
    // correlate.
    std::vector<std::string> labels;
    for (const auto& r : rules) labels.push_back(r.label());
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
        throw InvalidArgument("state schedule contains duplicate rules");
}

}  // namespace cclab
