// Acceptance suite: replicates every reference result at full scale and
// prints one PASS/FAIL line per criterion. Exit code is the number of failed
// criteria.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "cclab/presets.hpp"

using namespace cclab;
using presets::CheckResult;

namespace {

struct Criterion {
    std::string title;
    std::vector<CheckResult> checks;
    double limit_seconds = 0.0;  // 0 = no stated limit
    double elapsed_seconds = 0.0;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        if (limit_seconds > 0.0 && elapsed_seconds > limit_seconds) return false;
        return true;
    }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void append(std::vector<CheckResult>& into, const std::vector<CheckResult>& from,
            const std::string& prefix = "") {
    for (auto c : from) {
        if (!prefix.empty()) c.name = prefix + ": " + c.name;
        into.push_back(std::move(c));
    }
}

std::vector<CheckResult> filter(const std::vector<CheckResult>& checks, const std::string& key,
                                bool keep_matching) {
    std::vector<CheckResult> out;
    for (const auto& c : checks)
        if ((c.name.find(key) != std::string::npos) == keep_matching) out.push_back(c);
    return out;
}

}  // namespace

int main() {
    presets::RunOptions opts;
    opts.workers = 2;
    std::vector<Criterion> criteria;

    {
        Stopwatch sw;
        Criterion c{"operator golden values: 2-state uniform quartet = (0, 1, 2, 3)", {}, 10.0};
        append(c.checks, presets::operator_golden(opts).checks);
        c.elapsed_seconds = sw.seconds();
        criteria.push_back(std::move(c));
    }
    {
        Stopwatch sw;
        Criterion c{"operator asymmetry: per-state cuts vanish, compound uln -> 1", {}, 30.0};
        append(c.checks, presets::operator_asymmetry(opts).checks);
        c.elapsed_seconds = sw.seconds();
        criteria.push_back(std::move(c));
    }

    // capacity replications feed criteria 3, 4 and 5
    Stopwatch sw_ex1;
    const auto ex1b = presets::example1_capacity(true, opts);
    const auto ex1u = presets::example1_capacity(false, opts);
    const double ex1_time = sw_ex1.seconds();
    Stopwatch sw_ex2;
    const auto ex2b = presets::example2_capacity(true, opts);
    const auto ex2u = presets::example2_capacity(false, opts);
    const double ex2_time = sw_ex2.seconds();
    const auto ex3b = presets::example3_capacity(true, opts);
    const auto ex3u = presets::example3_capacity(false, opts);

    {
        Criterion c{"example 1 capacity dichotomy (bounded vs unbounded)", {}, 60.0};
        c.elapsed_seconds = ex1_time;
        append(c.checks, filter(ex1b.checks, "uniformity", false), ex1b.name);
        append(c.checks, filter(ex1u.checks, "uniformity", false), ex1u.name);
        criteria.push_back(std::move(c));
    }
    {
        Criterion c{"example 2 Tx-CSI gain", {}, 60.0};
        c.elapsed_seconds = ex2_time;
        append(c.checks, filter(ex2b.checks, "uniformity", false), ex2b.name);
        append(c.checks, filter(ex2u.checks, "uniformity", false), ex2u.name);
        criteria.push_back(std::move(c));
    }
    {
        Criterion c{"uniformity diagnostic verdicts", {}};
        append(c.checks, filter(ex1b.checks, "uniformity", true), ex1b.name);
        append(c.checks, filter(ex1u.checks, "uniformity", true), ex1u.name);
        append(c.checks, filter(ex2b.checks, "uniformity", true), ex2b.name);
        append(c.checks, filter(ex2u.checks, "uniformity", true), ex2u.name);
        criteria.push_back(std::move(c));
    }
    {
        Criterion c{"strong converse verdicts (examples 1-4)", {}};
        for (int ex : {1, 2, 3}) {
            for (bool bounded : {true, false}) {
                const auto rep = presets::converse_example(ex, bounded, opts);
                append(c.checks, rep.checks, rep.name);
            }
        }
        const auto ex4 = presets::converse_example4(opts);
        append(c.checks, ex4.checks, ex4.name);
        criteria.push_back(std::move(c));
    }
    {
        Criterion c{"split-block counterexample replication", {}};
        append(c.checks, presets::split_block_replication(opts).checks);
        criteria.push_back(std::move(c));
    }
    {
        Stopwatch sw;
        Criterion c{"coding phase behavior across three seeds", {}, 600.0};
        append(c.checks, presets::coding_phase(opts).checks);
        c.elapsed_seconds = sw.seconds();
        criteria.push_back(std::move(c));
    }
    {
        Stopwatch sw;
        Criterion c{"no-strong-converse error plateau (mixture outage)", {}, 900.0};
        append(c.checks, presets::mixture_plateau(opts).checks);
        c.elapsed_seconds = sw.seconds();
        criteria.push_back(std::move(c));
    }
    {
        Criterion c{"feedback null result", {}};
        for (const auto& fn : presets::feedback_null(opts)) append(c.checks, fn.checks);
        criteria.push_back(std::move(c));
    }
    {
        Criterion c{"exact structural checks", {}};
        append(c.checks, presets::structural_checks(opts));
        criteria.push_back(std::move(c));
    }
    {
        Criterion c{"compound-operator property suite", {}};
        append(c.checks, presets::property_suite(opts));
        criteria.push_back(std::move(c));
    }
    {
        Criterion c{"supplementary: Tx-CSI operational effect", {}};
        append(c.checks, presets::tx_csi_replication(opts).checks);
        criteria.push_back(std::move(c));
    }

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const bool pass = c.pass();
        if (!pass) ++failures;
        const std::string tag =
            i < 12 ? "criterion " + std::to_string(i + 1) : "extra";
        std::printf("%s %s: %s", pass ? "PASS" : "FAIL", tag.c_str(), c.title.c_str());
        if (c.limit_seconds > 0.0)
            std::printf("  [%.1fs / limit %.0fs]", c.elapsed_seconds, c.limit_seconds);
        std::printf("\n");
        for (const auto& chk : c.checks) {
            if (!chk.pass)
                std::printf("    FAIL %s: observed=%.6g expected in [%.6g, %.6g] %s\n",
                            chk.name.c_str(), chk.observed, chk.lo, chk.hi, chk.detail.c_str());
        }
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures;
}
