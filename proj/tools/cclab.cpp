// cclab - compound-channel capacity laboratory CLI.
//
// Subcommands: spectrum, capacity, strong-converse, coding, props,
// replicate-paper. Every run is driven by an explicit master seed; re-running
// a config byte-reproduces all CSV outputs (the JSON summary carries the only
// timestamp).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cclab/capacity.hpp"
#include "cclab/coding.hpp"
#include "cclab/converse.hpp"
#include "cclab/csv.hpp"
#include "cclab/presets.hpp"
#include "cclab/spectrum.hpp"

using nlohmann::json;
using namespace cclab;

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir = "results";
    std::uint64_t seed = 0x0cc1ab01u;
    bool seed_given = false;
    double trials_scale = 1.0;
    int workers = 1;
};

void add_common_flags(CLI::App* cmd, GlobalFlags& flags, bool with_config = true) {
    if (with_config) cmd->add_option("--config", flags.config_path, "JSON experiment config");
    cmd->add_option("--out", flags.out_dir, "output directory (default: results)");
    cmd->add_option("--seed", flags.seed, "master seed (no wall-clock seeding)")
        ->each([&](const std::string&) { flags.seed_given = true; });
    cmd->add_option("--workers", flags.workers, "worker pool size (results are identical)");
    cmd->add_option("--trials-scale", flags.trials_scale,
                    "multiplies all trial counts (quick/thorough modes)");
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
    return buf;
}

// ---- config parsing ------------------------------------------------------------

std::shared_ptr<NoiseModel> parse_model(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "block_interference") {
        const auto M = j.value("M", 2u);
        std::vector<double> pmf;
        if (j.contains("head_pmf")) pmf = j.at("head_pmf").get<std::vector<double>>();
        return std::make_shared<BlockInterference>(Alphabet(M), pmf);
    }
    if (kind == "interference_plus_noise")
        return std::make_shared<InterferencePlusNoise>(j.at("p1").get<double>(),
                                                       j.at("p2").get<double>());
    if (kind == "decaying_bernoulli") return std::make_shared<DecayingBernoulli>();
    if (kind == "iid_bernoulli") return IidGeneric::bernoulli(j.at("q").get<double>());
    if (kind == "iid_generic")
        return std::make_shared<IidGeneric>(Alphabet(j.value("M", 2u)),
                                            j.at("pmf").get<std::vector<double>>());
    if (kind == "ergodic_mixture")
        return std::make_shared<ErgodicMixture>(j.at("p").get<double>(),
                                                parse_model(j.at("first")),
                                                parse_model(j.at("second")));
    if (kind == "complementary_blocks")
        return std::make_shared<ComplementaryBlocks>(j.at("p").get<double>());
    throw InvalidArgument("config: unknown model kind \"" + kind + "\"");
}

StateSchedule parse_schedule(const json& j) {
    StateSchedule sched;
    if (j.contains("fixed"))
        for (double s : j.at("fixed").get<std::vector<double>>()) sched.add_fixed(s);
    if (j.contains("coupled"))
        for (double c : j.at("coupled").get<std::vector<double>>()) sched.add_linear(c);
    if (j.contains("bound") && !j.at("bound").is_null())
        sched.bound = j.at("bound").get<double>();
    sched.validate();
    return sched;
}

EstimatorSettings parse_estimator(const json& j, const GlobalFlags& flags) {
    EstimatorSettings est;
    est.epsilon = j.value("epsilon", 0.01);
    if (j.contains("n_grid")) est.n_grid = j.at("n_grid").get<std::vector<int>>();
    est.trials = std::max<std::int64_t>(
        1000, std::int64_t(std::llround(double(j.value("trials", 10000)) * flags.trials_scale)));
    est.bootstrap_resamples = j.value("bootstrap", 200);
    est.workers = flags.workers;
    if (!(est.epsilon > 0.0 && est.epsilon < 0.5))
        throw InvalidArgument("config: epsilon must be in (0, 0.5)");
    return est;
}

struct LoadedConfig {
    json raw;
    std::shared_ptr<NoiseModel> model;
    StateSchedule schedule;
    EstimatorSettings estimator;
    std::uint64_t master_seed = 0;
};

LoadedConfig load_config(const GlobalFlags& flags) {
    if (flags.config_path.empty())
        throw InvalidArgument("this subcommand requires --config <file.json>");
    std::ifstream in(flags.config_path);
    if (!in) throw InvalidArgument("cannot read config " + flags.config_path);
    LoadedConfig cfg;
    in >> cfg.raw;
    if (cfg.raw.value("schema_version", 0) != 1)
        throw InvalidArgument("config: schema_version must be 1");
    cfg.model = parse_model(cfg.raw.at("model"));
    cfg.schedule = parse_schedule(cfg.raw.at("schedule"));
    cfg.estimator = parse_estimator(cfg.raw.value("estimator", json::object()), flags);
    if (flags.seed_given)
        cfg.master_seed = flags.seed;
    else if (cfg.raw.contains("master_seed"))
        cfg.master_seed = cfg.raw.at("master_seed").get<std::uint64_t>();
    else
        throw InvalidArgument("config: master_seed is mandatory (or pass --seed)");
    return cfg;
}

std::string schedule_string(const StateSchedule& sched) {
    std::ostringstream os;
    for (std::size_t r = 0; r < sched.size(); ++r) {
        if (r) os << '|';
        os << sched.rules[r].label();
    }
    if (sched.bound) os << "|S=" << *sched.bound;
    return os.str();
}

// ---- CSV emitters ------------------------------------------------------------------

void write_spectrum_csv(const std::string& path, const std::string& kind,
                        const EstimationRun& run, double epsilon, std::uint64_t seed) {
    CsvWriter csv(path, {"kind", "state", "n", "epsilon", "uuline", "uln", "oln", "ooline",
                         "uln_s", "oln_s", "bootstrap_halfwidth", "trials", "seed"});
    for (const auto& [key, cut] : run.bounds.per_state) {
        const auto& [label, n] = key;
        const BoundsQuad& q = run.bounds.at(n);
        double hw = 0.0;
        auto it = run.bounds.per_state_halfwidth.find(key);
        if (it != run.bounds.per_state_halfwidth.end())
            hw = std::max(it->second.lower, it->second.upper);
        csv.row({kind, label, std::to_string(n), format_full(epsilon), format_full(q.uuline),
                 format_full(q.uln), format_full(q.oln), format_full(q.ooline),
                 format_full(cut.lower), format_full(cut.upper), format_full(hw),
                 std::to_string(run.bounds.trials), std::to_string(seed)});
    }
}

void write_checks_csv(const std::string& path, const std::vector<presets::CheckResult>& checks) {
    CsvWriter csv(path, {"name", "pass", "observed", "lo", "hi", "detail"});
    for (const auto& c : checks)
        csv.row({c.name, c.pass ? "1" : "0", format_full(c.observed), format_full(c.lo),
                 format_full(c.hi), c.detail});
}

void write_coding_csv(const std::string& path, const std::vector<CodingResult>& rows) {
    CsvWriter csv(path, {"model", "state_rule", "n", "R", "codewords", "trials", "errors",
                         "error_rate", "halfwidth", "seed", "scheme"});
    for (const auto& r : rows)
        csv.row({r.model, r.state_label, std::to_string(r.n), format_full(r.rate),
                 format_full(r.codewords), std::to_string(r.trials), format_full(r.errors),
                 format_full(r.error_rate), format_full(r.halfwidth), std::to_string(r.seed),
                 r.scheme});
}

json checks_to_json(const std::vector<presets::CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"observed", c.observed},
                       {"lo", c.lo},
                       {"hi", c.hi},
                       {"detail", c.detail}});
    return arr;
}

json capacity_to_json(const CapacityReport& rep) {
    return {{"log_M", rep.log_M},
            {"ooline_H", rep.ooline_H},
            {"sup_s_H_bar", rep.sup_s_H_bar},
            {"C_compound", rep.C_compound},
            {"C_worst", rep.C_worst},
            {"delta_C", rep.delta_C},
            {"uniformity", rep.uniformity},
            {"provenance", rep.provenance},
            {"tolerance", rep.tolerance}};
}

int finish(const std::string& out_dir, const std::string& command, json summary,
           const std::vector<presets::CheckResult>& checks, std::uint64_t seed) {
    bool all_pass = true;
    for (const auto& c : checks) all_pass = all_pass && c.pass;
    summary["schema_version"] = 1;
    summary["command"] = command;
    summary["timestamp"] = iso_timestamp();
    summary["master_seed"] = seed;
    summary["checks"] = checks_to_json(checks);
    summary["pass"] = all_pass;
    std::ofstream out(out_dir + "/summary.json");
    out << summary.dump(2) << '\n';
    for (const auto& c : checks)
        std::printf("%-60s %s  observed=%s in [%s, %s] %s\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", format_round4(c.observed).c_str(),
                    format_round4(c.lo).c_str(), format_round4(c.hi).c_str(), c.detail.c_str());
    if (!checks.empty())
        std::printf("%s: %s\n", command.c_str(), all_pass ? "all checks passed" : "CHECK FAILURES");
    return all_pass ? 0 : 2;
}

// ---- subcommand runners ----------------------------------------------------------------

int run_spectrum_cmd(const GlobalFlags& flags) {
    LoadedConfig cfg = load_config(flags);
    cfg.estimator.keep_samples = false;
    NoiseEntropySource source(cfg.model);
    const EstimationRun run =
        estimate_spectrum(source, cfg.schedule, cfg.estimator, cfg.master_seed);
    write_spectrum_csv(flags.out_dir + "/spectrum.csv", cfg.model->kind(), run,
                       cfg.estimator.epsilon, cfg.master_seed);
    const int n = run.bounds.largest_n();
    const BoundsQuad& q = run.bounds.at(n);
    std::printf("n=%d  uuline=%s uln=%s oln=%s ooline=%s\n", n, format_round4(q.uuline).c_str(),
                format_round4(q.uln).c_str(), format_round4(q.oln).c_str(),
                format_round4(q.ooline).c_str());
    json summary{{"inputs", cfg.raw},
                 {"estimates",
                  {{"n", n},
                   {"uuline", q.uuline},
                   {"uln", q.uln},
                   {"oln", q.oln},
                   {"ooline", q.ooline}}}};
    return finish(flags.out_dir, "spectrum", summary, {}, cfg.master_seed);
}

int run_capacity_cmd(const GlobalFlags& flags) {
    LoadedConfig cfg = load_config(flags);
    cfg.estimator.keep_samples = true;
    NoiseEntropySource source(cfg.model);
    const EstimationRun run =
        estimate_spectrum(source, cfg.schedule, cfg.estimator, cfg.master_seed);
    const UniformityReport uni = check_uniformity(run, cfg.schedule);
    const std::uint32_t M = cfg.model->alphabet().M;
    const CapacityReport rep = capacity_report(run, cfg.schedule, M, uni.verdict);
    const SaddleCheck saddle = saddle_point_check(run, cfg.schedule, M, uni.verdict);
    CsvWriter csv(flags.out_dir + "/capacity.csv",
                  {"example_id", "params", "provenance", "C_compound", "C_worst", "delta_C",
                   "uniformity", "gap"});
    csv.row({"custom", schedule_string(cfg.schedule), rep.provenance,
             format_full(rep.C_compound), format_full(rep.C_worst), format_full(rep.delta_C),
             rep.uniformity, format_full(saddle.gap)});
    std::printf("C_compound=%s C_worst=%s delta_C=%s uniformity=%s saddle_gap=%s\n",
                format_round4(rep.C_compound).c_str(), format_round4(rep.C_worst).c_str(),
                format_round4(rep.delta_C).c_str(), rep.uniformity.c_str(),
                format_round4(saddle.gap).c_str());
    json summary{{"inputs", cfg.raw},
                 {"estimates", capacity_to_json(rep)},
                 {"saddle", {{"minimax", saddle.minimax}, {"maximin", saddle.maximin},
                             {"gap", saddle.gap}, {"saddle", saddle.saddle}}}};
    return finish(flags.out_dir, "capacity", summary, {}, cfg.master_seed);
}

int run_converse_cmd(const GlobalFlags& flags) {
    LoadedConfig cfg = load_config(flags);
    cfg.estimator.keep_samples = true;
    NoiseEntropySource source(cfg.model);
    ConverseAnalysis analysis =
        analyze_strong_converse(source, cfg.schedule, cfg.estimator, cfg.master_seed);
    const ConverseReport& r = analysis.report;
    CsvWriter csv(flags.out_dir + "/strong_converse.csv",
                  {"model", "schedule", "ooline_H", "uln_H", "oln_H", "inf_s_oln_s",
                   "sup_s_oln_s", "ergodic_rate", "gap", "verdict"});
    csv.row({cfg.model->kind(), schedule_string(cfg.schedule), format_full(r.ooline_H),
             format_full(r.uln_H), format_full(r.oln_H), format_full(r.inf_s_oln_s),
             format_full(r.sup_s_oln_s), format_full(r.ergodic_rate), format_full(r.gap),
             r.verdict});
    // spectral mode locations (per-state cuts) for external plotting
    CsvWriter modes(flags.out_dir + "/spectral_modes.csv", {"state", "n", "uln_s", "oln_s"});
    for (const auto& [key, cut] : analysis.run.bounds.per_state)
        modes.row({key.first, std::to_string(key.second), format_full(cut.lower),
                   format_full(cut.upper)});
    std::printf("ooline_H=%s uln_H=%s gap=%s verdict=%s\n", format_round4(r.ooline_H).c_str(),
                format_round4(r.uln_H).c_str(), format_round4(r.gap).c_str(), r.verdict.c_str());
    json summary{{"inputs", cfg.raw},
                 {"estimates",
                  {{"ooline_H", r.ooline_H},
                   {"uln_H", r.uln_H},
                   {"oln_H", r.oln_H},
                   {"inf_s_oln_s", r.inf_s_oln_s},
                   {"sup_s_oln_s", r.sup_s_oln_s},
                   {"ergodic_rate", r.ergodic_rate},
                   {"gap", r.gap},
                   {"tolerance", r.tolerance},
                   {"verdict", r.verdict}}}};
    return finish(flags.out_dir, "strong-converse", summary, {}, cfg.master_seed);
}

int run_coding_cmd(const GlobalFlags& flags) {
    LoadedConfig cfg = load_config(flags);
    const json jc = cfg.raw.value("coding", json::object());
    SweepSettings settings;
    settings.n_grid = jc.value("n_grid", std::vector<int>{20, 40, 60});
    settings.rate_grid = jc.value("rate_grid", std::vector<double>{0.25, 0.5});
    settings.trials = std::max<std::int64_t>(
        200, std::int64_t(std::llround(double(jc.value("trials", 1000)) * flags.trials_scale)));
    settings.decode_cap = jc.value("decode_cap", std::uint64_t(1) << 16);
    settings.isi.depth = jc.value("isi_depth", 0u);
    const std::string mode = jc.value("mode", "auto");
    settings.mode = mode == "ml"         ? SweepMode::BruteMl
                    : mode == "analytic" ? SweepMode::Analytic
                                         : SweepMode::Auto;
    settings.workers = flags.workers;
    const auto rows = run_error_sweep(*cfg.model, cfg.schedule, settings, cfg.master_seed);
    write_coding_csv(flags.out_dir + "/coding.csv", rows);
    for (const auto& r : rows)
        if (r.state_label == "compound")
            std::printf("n=%d R=%s compound error=%s\n", r.n, format_round4(r.rate).c_str(),
                        format_round4(r.error_rate).c_str());
    json summary{{"inputs", cfg.raw}, {"rows", rows.size()}};
    return finish(flags.out_dir, "coding", summary, {}, cfg.master_seed);
}

int run_props_cmd(const GlobalFlags& flags) {
    presets::RunOptions opts{flags.seed, flags.trials_scale, flags.workers};
    const auto checks = presets::property_suite(opts);
    write_checks_csv(flags.out_dir + "/props.csv", checks);
    json summary{{"trials_scale", flags.trials_scale}};
    return finish(flags.out_dir, "props", summary, checks, flags.seed);
}

int run_replicate_cmd(const GlobalFlags& flags, const std::string& example, int bounded_S,
                      bool unbounded) {
    presets::RunOptions opts{flags.seed, flags.trials_scale, flags.workers};
    std::vector<presets::CheckResult> checks;
    json estimates = json::object();
    std::vector<CodingResult> coding_rows;

    const bool all = example == "all";
    auto want = [&](const std::string& name) { return all || example == name; };
    // --bounded / --unbounded narrow the variants for examples 1-3.
    auto variants = [&]() {
        std::vector<bool> v;
        if (bounded_S >= 0 && !unbounded) return std::vector<bool>{true};
        if (unbounded && bounded_S < 0) return std::vector<bool>{false};
        return std::vector<bool>{true, false};
    };

    auto absorb = [&](const std::string& prefix, const std::vector<presets::CheckResult>& cs) {
        for (auto c : cs) {
            c.name = prefix + "/" + c.name;
            checks.push_back(std::move(c));
        }
    };

    if (want("operators")) {
        auto golden = presets::operator_golden(opts);
        absorb("operators/golden", golden.checks);
        auto asym = presets::operator_asymmetry(opts);
        absorb("operators/asymmetry", asym.checks);
    }
    for (int ex : {1, 2, 3}) {
        if (!want("example" + std::to_string(ex))) continue;
        for (bool bounded : variants()) {
            presets::CapacityReplication rep =
                ex == 1   ? presets::example1_capacity(bounded, opts)
                : ex == 2 ? presets::example2_capacity(bounded, opts)
                          : presets::example3_capacity(bounded, opts);
            absorb(rep.name, rep.checks);
            estimates[rep.name] = {{"estimated", capacity_to_json(rep.estimated)},
                                   {"reference", capacity_to_json(rep.reference)},
                                   {"saddle_gap", rep.saddle.gap}};
            presets::ConverseReplication conv = presets::converse_example(ex, bounded, opts);
            absorb(conv.name, conv.checks);
            estimates[conv.name] = {{"ooline_H", conv.analysis.report.ooline_H},
                                    {"uln_H", conv.analysis.report.uln_H},
                                    {"gap", conv.analysis.report.gap},
                                    {"verdict", conv.analysis.report.verdict}};
        }
        if (ex == 3) {
            const auto table = presets::decay_curve_table({1, 10, 100}, 200);
            CsvWriter csv(flags.out_dir + "/decay_curve.csv", {"s", "i", "h"});
            for (const auto& p : table)
                csv.row({format_full(p.s), std::to_string(p.i), format_full(p.h)});
        }
    }
    if (want("example4")) {
        auto conv = presets::converse_example4(opts);
        absorb(conv.name, conv.checks);
        auto plateau = presets::mixture_plateau(opts);
        absorb("example4/plateau", plateau.checks);
        coding_rows.insert(coding_rows.end(), plateau.rows.begin(), plateau.rows.end());
        estimates["example4"] = {{"gap", conv.analysis.report.gap},
                                 {"verdict", conv.analysis.report.verdict},
                                 {"outage_oracle", plateau.outage_estimate}};
    }
    if (want("split-block")) {
        auto rep = presets::split_block_replication(opts);
        absorb(rep.name, rep.checks);
        estimates["split-block"] = {{"uln_H", rep.analysis.report.uln_H},
                                {"oln_H", rep.analysis.report.oln_H},
                                {"ooline_H", rep.analysis.report.ooline_H},
                                {"sup_s_oln_s", rep.analysis.report.sup_s_oln_s}};
    }
    if (want("coding")) {
        auto phase = presets::coding_phase(opts);
        absorb("coding/phase", phase.checks);
        coding_rows.insert(coding_rows.end(), phase.rows.begin(), phase.rows.end());
        auto tx = presets::tx_csi_replication(opts);
        absorb("coding/tx_csi", tx.checks);
        coding_rows.push_back(tx.demo.with_csi);
        coding_rows.push_back(tx.demo.without_csi);
    }
    if (want("feedback")) {
        for (const auto& fn : presets::feedback_null(opts)) absorb("feedback", fn.checks);
    }
    if (want("structural")) absorb("structural", presets::structural_checks(opts));
    if (want("props")) absorb("props", presets::property_suite(opts));

    if (checks.empty())
        throw InvalidArgument("replicate-paper: unknown --example \"" + example + "\"");
    write_checks_csv(flags.out_dir + "/replicate_checks.csv", checks);
    if (!coding_rows.empty()) write_coding_csv(flags.out_dir + "/coding.csv", coding_rows);
    json summary{{"example", example}, {"estimates", estimates},
                 {"trials_scale", flags.trials_scale}};
    return finish(flags.out_dir, "replicate-paper", summary, checks, flags.seed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cclab: compound-channel capacity laboratory"};
    app.require_subcommand(1);
    GlobalFlags flags;

    auto* spectrum_cmd = app.add_subcommand("spectrum", "estimate compound spectral bounds");
    add_common_flags(spectrum_cmd, flags);
    auto* capacity_cmd = app.add_subcommand("capacity", "capacity / Tx-CSI gain estimates");
    add_common_flags(capacity_cmd, flags);
    auto* converse_cmd =
        app.add_subcommand("strong-converse", "strong-converse condition and ordering");
    add_common_flags(converse_cmd, flags);
    auto* coding_cmd = app.add_subcommand("coding", "random-coding error sweeps");
    add_common_flags(coding_cmd, flags);
    auto* props_cmd = app.add_subcommand("props", "compound-operator property suite");
    add_common_flags(props_cmd, flags, false);
    auto* replicate_cmd =
        app.add_subcommand("replicate-paper", "replicate the bundled reference results");
    add_common_flags(replicate_cmd, flags, false);
    std::string example = "all";
    int bounded_S = -1;
    bool unbounded = false;
    replicate_cmd->add_option("--example", example,
                              "1|2|3|4|split-block|operators|coding|feedback|structural|props|all");
    replicate_cmd->add_option("--bounded", bounded_S, "restrict to the bounded variant (cap S)");
    replicate_cmd->add_flag("--unbounded", unbounded, "restrict to the unbounded variant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        std::filesystem::create_directories(flags.out_dir);
        if (spectrum_cmd->parsed()) return run_spectrum_cmd(flags);
        if (capacity_cmd->parsed()) return run_capacity_cmd(flags);
        if (converse_cmd->parsed()) return run_converse_cmd(flags);
        if (coding_cmd->parsed()) return run_coding_cmd(flags);
        if (props_cmd->parsed()) return run_props_cmd(flags);
        if (replicate_cmd->parsed()) {
            if (example.size() == 1 && example[0] >= '1' && example[0] <= '4')
                example = "example" + example;
            return run_replicate_cmd(flags, example, bounded_S, unbounded);
        }
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
