#ifndef CCLAB_CODING_HPP
#define CCLAB_CODING_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cclab/noise.hpp"

namespace cclab {

// Random codebook with i.i.d. equiprobable codewords, regenerated on demand
// from (seed, index); nothing is stored.
struct Codebook {
    Codebook(Alphabet a, int n, double rate_bits, std::uint64_t seed);

    Alphabet alphabet;
    int n;
    double rate;          // bits/symbol
    std::uint64_t seed;
    double count;         // ceil(2^{n * rate}), >= 2

    // Exact integer codeword count when representable; brute-force decoding
    // requires it.
    std::optional<std::uint64_t> exact_count() const;
    SeqM codeword(std::uint64_t index) const;
    void codeword_into(std::uint64_t index, Symbol* out) const;
};

// Exact ML with full Rx CSI: argmax over messages of log2 p_s(y - g(x_w)),
// ties broken by lowest index. Cost is codeword_count * n per call.
std::uint64_t ml_decode(const SeqM& y, const Codebook& codebook, const NoiseModel& model,
                        double s, IsiMap g, std::uint64_t decode_cap = 1u << 16);

struct CodingResult {
    std::string model;
    std::string state_label;
    std::string scheme = "uniform_no_feedback";
    std::string mode;  // "ml" | "analytic" | "compound"
    int n = 0;
    double rate = 0.0;
    double codewords = 0.0;
    std::int64_t trials = 0;
    double errors = 0.0;  // fractional in analytic mode
    double error_rate = 0.0;
    double halfwidth = 0.0;
    std::uint64_t seed = 0;
};

enum class SweepMode {
    Auto,     // brute ML within the decode cap, analytic beyond
    BruteMl,  // always decode explicitly (skips infeasible cells)
    Analytic  // always average over competitor codebooks analytically
};

struct SweepSettings {
    std::vector<int> n_grid;
    std::vector<double> rate_grid;
    std::int64_t trials = 1000;
    std::uint64_t decode_cap = 1u << 16;
    SweepMode mode = SweepMode::Auto;
    IsiMap isi{};
    int workers = 1;
};

// Per (state rule, n, rate): sample message + noise, decode, record empirical
// error. Emits one compound row (max over rules) per (n, rate). Cells whose
// codebook cannot be evaluated under the requested mode are skipped with a
// warning. In analytic mode each trial adds the exact conditional ML error
// probability given the sampled noise, averaged over random codebooks and the
// transmitted index; this is unbiased for the same random-coding error and is
// available for any codebook size (competitor candidates are uniform because
// equiprobable codewords stay equiprobable through the bijective channel map).
std::vector<CodingResult> run_error_sweep(const NoiseModel& model, const StateSchedule& schedule,
                                          const SweepSettings& settings,
                                          std::uint64_t master_seed);

// ---- feedback lab ------------------------------------------------------------

// Causal deterministic encoders x_k = f_k(w, y^{k-1}); a Session replays the
// encoding one symbol at a time, so the ML decoder can teacher-force it on the
// observed output for every candidate message.
class FeedbackScheme {
public:
    virtual ~FeedbackScheme() = default;
    virtual std::string name() const = 0;

    class Session {
    public:
        virtual ~Session() = default;
        // prev_y is the fed-back output of the previous slot (nullopt at k=0).
        virtual Symbol next_symbol(std::optional<Symbol> prev_y) = 0;
    };
    virtual std::unique_ptr<Session> begin(SeqM codeword, IsiMap g) const = 0;
};

std::shared_ptr<FeedbackScheme> make_no_feedback();
// Reads the feedback but ignores it; bit-identical to the baseline.
std::shared_ptr<FeedbackScheme> make_ignore_feedback();
// Re-sends the current codeword symbol while the implied noise is nonzero.
std::shared_ptr<FeedbackScheme> make_retransmit_on_hit();
// Pre-cancels the persistence prediction of the last implied noise symbol.
std::shared_ptr<FeedbackScheme> make_precancel_last_noise();

struct FeedbackComparison {
    std::string scheme;
    double error_rate = 0.0;
    double halfwidth = 0.0;
    double gain_vs_baseline = 0.0;  // baseline error - scheme error, paired seeds
    double gain_sigma = 0.0;        // std error of the paired gain
};

// First scheme in the list is the baseline. All schemes see identical
// (codebook, message, noise realization) per trial.
std::vector<FeedbackComparison> run_feedback_comparison(
    const NoiseModel& model, const StateSchedule& schedule, IsiMap g,
    const std::vector<std::shared_ptr<FeedbackScheme>>& schemes, int n, double rate,
    std::int64_t trials, std::uint64_t master_seed, std::uint64_t decode_cap = 1u << 16,
    int workers = 1);

// ---- Tx-CSI demo ------------------------------------------------------------

struct TxCsiDemo {
    CodingResult with_csi;     // blocklength chosen as a function of the state
    CodingResult without_csi;  // adversarial coupled state s(n) = n
};

TxCsiDemo tx_csi_demo(const NoiseModel& model, double s, double rate, std::int64_t trials,
                      std::uint64_t master_seed, int n_factor = 20);

// ---- uniform-output check ------------------------------------------------------

struct OutputCheck {
    bool exact = false;       // exact convolution vs statistical fallback
    double max_abs_dev = 0.0; // exact mode: max_y |p_Y(y) - M^{-n}|
    double chi2_stat = 0.0;   // statistical mode
    double chi2_crit = 0.0;
    bool uniform = false;
};

// input_pmf empty means the uniform input. Exact mode enumerates the M^n
// output law via per-position circular convolutions of the product-form noise
// branches; falls back to a sampled chi-square when M^n exceeds cap.
OutputCheck uniform_output_check(const NoiseModel& model, double s, int n, IsiMap g,
                                 const std::vector<double>& input_pmf = {},
                                 std::uint64_t cap = 1u << 20,
                                 std::uint64_t seed = 0x0cc1ab5eedULL,
                                 std::int64_t stat_samples = 1000000);

}  // namespace cclab

#endif
