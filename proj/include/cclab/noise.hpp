#ifndef CCLAB_NOISE_HPP
#define CCLAB_NOISE_HPP

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cclab/alphabet.hpp"
#include "cclab/rng.hpp"

namespace cclab {

// One product-form component of a noise law: weight * prod_k pmf[k][symbol].
// Every bundled kind decomposes this way (block patterns are products with
// point-mass positions), which gives exact O(n * M * M^n) output convolutions.
struct ProductBranch {
    double weight = 1.0;
    std::vector<std::vector<double>> pmf;  // pmf[k][m], k = 0..n-1
};

struct SupportAtom {
    SeqM seq;
    double prob;
};

// Exact distribution of log2 p_s(xi') under xi' uniform on M^n, partitioned
// into model-defined classes. Classes cover the support only; the remaining
// M^n - sum(count) sequences have zero probability. Used by the analytic
// (codebook-averaged) ML error evaluation and by exact spectrum oracles.
struct LikelihoodClasses {
    std::vector<double> lp;     // log2 of the per-sequence probability in class c
    std::vector<double> count;  // number of sequences in class c (exact as double)
    double log2_space;          // n * log2(M)
    // Per class: fraction of the uniform space with strictly larger / equal lp.
    std::vector<double> q_gt;
    std::vector<double> q_eq;
    void finalize();  // fills q_gt / q_eq from lp / count
};

// State-indexed noise process with exact sampling and exact log2-probability.
// Instances are immutable after construction; sampling takes an explicit Rng,
// so concurrent use is race-free.
class NoiseModel {
public:
    explicit NoiseModel(Alphabet a) : alphabet_(a) {}
    virtual ~NoiseModel() = default;

    const Alphabet& alphabet() const { return alphabet_; }
    virtual std::string kind() const = 0;

    // Validates s for this kind and applies the block-model clamp s -> n
    // (warned once per instance). Throws InvalidState for out-of-range s.
    virtual double effective_state(double s, int n) const = 0;

    virtual SeqM sample(double s, int n, Rng& rng) const = 0;

    // Exact log2 p_s(xi); -inf for zero-probability sequences.
    virtual double log_prob(double s, const SeqM& xi) const = 0;

    // Draws xi ~ p_s and returns log2 p_s(xi) without materializing xi when a
    // kind permits; consumes the identical rng stream as sample().
    virtual double sample_log_prob(double s, int n, Rng& rng) const;

    // Product-mixture decomposition (weights sum to 1).
    virtual std::vector<ProductBranch> product_branches(double s, int n) const = 0;

    // Likelihood classes when the kind admits a compact partition; nullopt
    // otherwise (then analytic coding mode is unavailable for the model).
    virtual std::optional<LikelihoodClasses> likelihood_classes(double s, int n) const {
        (void)s;
        (void)n;
        return std::nullopt;
    }
    // Index into likelihood_classes() for a support sequence.
    virtual std::size_t likelihood_class_index(double s, const SeqM& xi) const;

    // Exact small-instance oracle: every nonzero-probability sequence with its
    // probability. Scans all M^n sequences; throws CapacityExceeded when M^n
    // exceeds cap.
    std::vector<SupportAtom> enumerate_support(double s, int n, std::uint64_t cap = 1u << 20) const;

protected:
    void warn_clamp_once(double s, int n) const;

private:
    Alphabet alphabet_;
    mutable std::atomic<bool> warned_clamp_{false};
};

// ---- bundled kinds -------------------------------------------------------

// xi = {w_1..w_s, 0..0}; head i.i.d. from head_pmf (default equiprobable).
class BlockInterference final : public NoiseModel {
public:
    explicit BlockInterference(Alphabet a, std::vector<double> head_pmf = {});
    std::string kind() const override { return "block_interference"; }
    double effective_state(double s, int n) const override;
    SeqM sample(double s, int n, Rng& rng) const override;
    double log_prob(double s, const SeqM& xi) const override;
    double sample_log_prob(double s, int n, Rng& rng) const override;
    std::vector<ProductBranch> product_branches(double s, int n) const override;
    std::optional<LikelihoodClasses> likelihood_classes(double s, int n) const override;
    std::size_t likelihood_class_index(double s, const SeqM& xi) const override;
    const std::vector<double>& head_pmf() const { return pmf_; }

private:
    std::vector<double> pmf_;
    std::vector<double> log2_pmf_;
};

// Binary xi = {w_1..w_s, z_{s+1}..z_n}, W ~ Ber(p1), Z ~ Ber(p2).
class InterferencePlusNoise final : public NoiseModel {
public:
    InterferencePlusNoise(double p1, double p2);
    std::string kind() const override { return "interference_plus_noise"; }
    double effective_state(double s, int n) const override;
    SeqM sample(double s, int n, Rng& rng) const override;
    double log_prob(double s, const SeqM& xi) const override;
    double sample_log_prob(double s, int n, Rng& rng) const override;
    std::vector<ProductBranch> product_branches(double s, int n) const override;
    std::optional<LikelihoodClasses> likelihood_classes(double s, int n) const override;
    std::size_t likelihood_class_index(double s, const SeqM& xi) const override;
    double p1() const { return p1_; }
    double p2() const { return p2_; }

private:
    double p1_, p2_;
};

// Binary, W_i ~ Ber(p_i) independent with p_i = s / (2 (i + s)), s >= 0 real.
class DecayingBernoulli final : public NoiseModel {
public:
    DecayingBernoulli();
    std::string kind() const override { return "decaying_bernoulli"; }
    double effective_state(double s, int n) const override;
    SeqM sample(double s, int n, Rng& rng) const override;
    double log_prob(double s, const SeqM& xi) const override;
    double sample_log_prob(double s, int n, Rng& rng) const override;
    std::vector<ProductBranch> product_branches(double s, int n) const override;
    static double flip_probability(double s, int i);  // i is 1-based
};

// One of two component processes is selected once per block: W with
// probability p, Z with probability 1-p. The state is forwarded to both.
class ErgodicMixture final : public NoiseModel {
public:
    ErgodicMixture(double p, std::shared_ptr<const NoiseModel> w,
                   std::shared_ptr<const NoiseModel> z);
    std::string kind() const override { return "ergodic_mixture"; }
    double effective_state(double s, int n) const override;
    SeqM sample(double s, int n, Rng& rng) const override;
    double log_prob(double s, const SeqM& xi) const override;
    double sample_log_prob(double s, int n, Rng& rng) const override;
    std::vector<ProductBranch> product_branches(double s, int n) const override;
    std::optional<LikelihoodClasses> likelihood_classes(double s, int n) const override;
    std::size_t likelihood_class_index(double s, const SeqM& xi) const override;
    double mix_p() const { return p_; }
    const NoiseModel& first() const { return *w_; }
    const NoiseModel& second() const { return *z_; }

private:
    double p_;
    std::shared_ptr<const NoiseModel> w_, z_;
};

// Binary two-branch block corruption: {b_1..b_s, 0..0} with probability p,
// {0..0, b_{s+1}..b_n} with probability 1-p, b i.i.d. equiprobable.
class ComplementaryBlocks final : public NoiseModel {
public:
    explicit ComplementaryBlocks(double p);
    std::string kind() const override { return "complementary_blocks"; }
    double effective_state(double s, int n) const override;
    SeqM sample(double s, int n, Rng& rng) const override;
    double log_prob(double s, const SeqM& xi) const override;
    double sample_log_prob(double s, int n, Rng& rng) const override;
    std::vector<ProductBranch> product_branches(double s, int n) const override;
    std::optional<LikelihoodClasses> likelihood_classes(double s, int n) const override;
    std::size_t likelihood_class_index(double s, const SeqM& xi) const override;

private:
    double p_;
};

// State-independent i.i.d. noise with an arbitrary pmf over [0, M).
class IidGeneric final : public NoiseModel {
public:
    IidGeneric(Alphabet a, std::vector<double> pmf);
    static std::shared_ptr<IidGeneric> bernoulli(double q);
    std::string kind() const override { return "iid_generic"; }
    double effective_state(double s, int n) const override;
    SeqM sample(double s, int n, Rng& rng) const override;
    double log_prob(double s, const SeqM& xi) const override;
    double sample_log_prob(double s, int n, Rng& rng) const override;
    std::vector<ProductBranch> product_branches(double s, int n) const override;
    std::optional<LikelihoodClasses> likelihood_classes(double s, int n) const override;
    std::size_t likelihood_class_index(double s, const SeqM& xi) const override;
    const std::vector<double>& pmf() const { return pmf_; }

private:
    std::vector<double> pmf_;
    std::vector<double> log2_pmf_;
};

// ---- state schedules -----------------------------------------------------

// A schedule entry: a fixed state, or a blocklength-coupled state
// s(n) = ceil(coeff * n). Coupled entries realize unbounded uncertainty sets.
struct StateRule {
    enum class Kind { Fixed, LinearInN };
    Kind rule_kind = Kind::Fixed;
    double value = 1.0;  // the state itself, or the coefficient of n

    static StateRule fixed(double s) { return {Kind::Fixed, s}; }
    static StateRule linear_in_n(double coeff) { return {Kind::LinearInN, coeff}; }
    double state_at(int n) const;
    std::string label() const;
};

struct StateSchedule {
    std::vector<StateRule> rules;
    std::optional<double> bound;  // cap S; applied to every produced state

    static StateSchedule fixed_states(std::vector<double> states,
                                      std::optional<double> bound = std::nullopt);
    StateSchedule& add_fixed(double s);
    StateSchedule& add_linear(double coeff);

    std::size_t size() const { return rules.size(); }
    double state_at(std::size_t rule_idx, int n) const;
    std::vector<std::size_t> fixed_rule_indices() const;
    std::string label(std::size_t rule_idx) const { return rules.at(rule_idx).label(); }
    void validate() const;  // non-empty; fixed states within bound
};

}  // namespace cclab

#endif
