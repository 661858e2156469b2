// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "helpers.hpp"
#include "rtleak/experiments.hpp"
#include "rtleak/inference.hpp"
#include "rtleak/metrics.hpp"
#include "rtleak/rta.hpp"
#include "rtleak/simulator.hpp"

using namespace rtleak;

namespace {

struct Failure {
    std::string message;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure{msg};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

int jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? int(n) : 4;
}

// Shared by criteria 8 and 9: the utilization x rate grid at desk scale.
std::vector<PointResult> g_grid;

void ensure_grid() {
    if (!g_grid.empty()) return;
    ExperimentSpec spec;  // desk-scale defaults
    g_grid = run_grid(spec, jobs());
}

double rate_mean_ip(double rate) {
    double sum = 0;
    int n = 0;
    for (const auto& p : g_grid)
        if (std::abs(p.critical_rate - rate) < 1e-9) {
            sum += p.method.ip.mean;
            ++n;
        }
    require(n > 0, "no grid points at rate " + fmt(rate));
    return sum / n;
}

double rate_mean_baseline_fp(double rate) {
    double sum = 0;
    int n = 0;
    for (const auto& p : g_grid)
        if (std::abs(p.critical_rate - rate) < 1e-9) {
            sum += p.baseline.fp.mean;
            ++n;
        }
    require(n > 0, "no grid points at rate " + fmt(rate));
    return sum / n;
}

void criterion1() {
    SymbolSeq seq = testutil::repeated_pattern(1200);
    SymbolSeq s{1, 2};
    long n = count_suffix(seq, s);
    long n1 = count_followed(seq, s, 1);
    long n2 = count_followed(seq, s, 2);
    require(n == 267, "N(r1 r2) = " + std::to_string(n) + ", want 267");
    require(n1 == 134, "N(r1 r2 -> r1) = " + std::to_string(n1));
    require(n2 == 133, "N(r1 r2 -> r2) = " + std::to_string(n2));
    require(std::abs(cond_prob(seq, s, 1) - 134.0 / 267.0) < 1e-12,
            "P(r1|r1 r2) off");
    require(std::abs(cond_prob(seq, s, 2) - 133.0 / 267.0) < 1e-12,
            "P(r2|r1 r2) off");
}

void criterion2() {
    SymbolSeq seq = testutil::repeated_pattern(1200);
    Pst pst = build_pst(seq, 3, 0.001);
    const PstNode& root = pst.root();
    require(std::abs(root.successor_probs.at(1) - 0.44) <= 0.01,
            "root P(r1) = " + fmt(root.successor_probs.at(1)));
    require(std::abs(root.successor_probs.at(2) - 0.33) <= 0.01,
            "root P(r2) = " + fmt(root.successor_probs.at(2)));
    require(std::abs(root.successor_probs.at(3) - 0.22) <= 0.01,
            "root P(r3) = " + fmt(root.successor_probs.at(3)));
    const PstNode* n3 = pst.find({3});
    require(n3 != nullptr, "context {r3} missing");
    require(n3->successor_probs.count(1) &&
                n3->successor_probs.at(1) == 1.0,
            "P(r1|r3) != 1.0");
}

void criterion3() {
    std::vector<Time> values{43, 47, 51, 45, 49};
    ClusterModel m = kmeans_1d(values);
    require(m.centroid_low == 44.0, "low centroid " + fmt(m.centroid_low));
    require(m.centroid_high == 49.0, "high centroid " + fmt(m.centroid_high));
    std::vector<int> want{0, 1, 1, 0, 1};  // {43,45} low, {47,49,51} high
    require(m.assignments == want, "cluster membership mismatch");
    double cut = threshold_of(m);
    for (Time v : values) {
        Mode got = classify(v, cut);
        Mode expect = v > 46.5 ? Mode::Critical : Mode::Typical;
        require(got == expect,
                "classification of " + std::to_string(v) + " mismatch");
    }
}

void criterion4() {
    TaskSet ts = testutil::table1();
    auto m = all_modes(ts, Mode::Typical);
    require(window_interference_bound(ts, 2, m) == 9, "typ/typ bound != 9");
    m[1] = Mode::Critical;
    require(window_interference_bound(ts, 2, m) == 11, "typ/cri bound != 11");
    m = all_modes(ts, Mode::Typical);
    m[0] = Mode::Critical;
    require(window_interference_bound(ts, 2, m) == 15, "cri/typ bound != 15");
    m[1] = Mode::Critical;
    require(window_interference_bound(ts, 2, m) == 17, "cri/cri bound != 17");
}

void criterion5() {
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<int> nd(3, 5);
    std::uniform_real_distribution<double> ud(0.3, 0.7);
    int accepted = 0;
    while (accepted < 100) {
        GeneratorConfig cfg;
        cfg.n_tasks = nd(rng);
        cfg.total_utilization = ud(rng);
        TaskSet ts = generate_taskset(cfg, rng);
        bool schedulable = true;
        for (const auto& t : ts.tasks)
            if (!r_min_max(ts, t.id).schedulable) schedulable = false;
        if (!schedulable) continue;
        ++accepted;

        Trace tr = simulate_with_modes(ts, 1, [](const TaskSpec& t, long) {
            return t.dual_mode() ? Mode::Critical : Mode::Typical;
        });
        RtaResult obs = r_min_max(ts, ts.observer().id);
        Time max_resp = 0;
        for (const auto& j : tr.jobs)
            if (j.task_id == ts.observer().id) {
                max_resp = std::max(max_resp, j.response);
                require(obs.r_min <= j.response,
                        "observer response " + std::to_string(j.response) +
                            " below r_min " + std::to_string(obs.r_min));
            }
        require(max_resp == obs.r_max,
                "max simulated response " + std::to_string(max_resp) +
                    " != r_max " + std::to_string(obs.r_max));
    }
}

void criterion6() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> lend(50, 400), alpha(2, 5),
        sufflen(1, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        int k = alpha(rng);
        std::uniform_int_distribution<Symbol> sym(1, k);
        SymbolSeq seq(lend(rng));
        for (auto& v : seq) v = sym(rng);
        SymbolSeq S(sufflen(rng));
        for (auto& v : S) v = sym(rng);
        Symbol a = sym(rng);
        require(count_suffix(seq, S) == testutil::oracle_count(seq, S),
                "count mismatch at trial " + std::to_string(trial));
        require(count_followed(seq, S, a) ==
                    testutil::oracle_count_followed(seq, S, a),
                "followed-count mismatch at trial " + std::to_string(trial));
    }
}

void criterion7() {
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> nd(3, 12);
    std::uniform_int_distribution<Time> vd(1, 60);
    int done = 0;
    while (done < 200) {
        std::vector<Time> values(nd(rng));
        for (auto& v : values) v = vd(rng);
        bool distinct = false;
        for (Time v : values)
            if (v != values[0]) distinct = true;
        if (!distinct) continue;
        ++done;
        ClusterModel m = kmeans_1d(values);
        double best = testutil::oracle_split_wcss(values);
        require(std::abs(m.wcss - best) < 1e-9,
                "WCSS " + fmt(m.wcss) + " != optimum " + fmt(best));
    }
}

void criterion8() {
    ensure_grid();
    for (const auto& p : g_grid)
        require(p.method.ip.mean > p.baseline.ip.mean,
                "method does not beat baseline at U=" + fmt(p.utilization) +
                    " rate=" + fmt(p.critical_rate));
    double ip10 = rate_mean_ip(0.1);
    require(ip10 >= 0.62 && ip10 <= 0.82,
            "rate-10% mean IP " + fmt(ip10) + " outside [0.62, 0.82]");
    double ip30 = rate_mean_ip(0.3);
    require(ip30 > 0.55, "rate-30% mean IP " + fmt(ip30) + " <= 0.55");
}

void criterion9() {
    ensure_grid();
    for (const auto& p : g_grid)
        require(p.method.fp.mean < 0.30,
                "method FP " + fmt(p.method.fp.mean) + " at U=" +
                    fmt(p.utilization) + " rate=" + fmt(p.critical_rate));
    double fp10 = rate_mean_baseline_fp(0.1);
    require(fp10 >= 0.33 && fp10 <= 0.50,
            "rate-10% baseline FP " + fmt(fp10) + " outside [0.33, 0.50]");
}

void criterion10() {
    ExperimentSpec spec;
    auto ip_at = [&](int train_hp, int window) {
        PointResult p = run_point(
            spec, 0.6, 0.3, train_hp, window,
            derive_seed(spec.master_seed, 3, train_hp, window));
        return p.method.ip.mean;
    };
    double d_train = std::abs(ip_at(30, spec.default_window) -
                              ip_at(110, spec.default_window));
    require(d_train < 0.05,
            "training-duration IP gap " + fmt(d_train) + " >= 0.05");
    double d_window = std::abs(ip_at(spec.default_train_hyperperiods, 10) -
                               ip_at(spec.default_train_hyperperiods, 50));
    require(d_window < 0.05,
            "observation-window IP gap " + fmt(d_window) + " >= 0.05");
}

void criterion11() {
    ExperimentSpec spec;
    spec.utilizations = {0.5};
    spec.critical_rates = {0.2, 0.3};
    spec.train_sweep = {10, 30};
    spec.window_sweep = {10, 20};
    spec.tasksets_per_point = 5;
    spec.eval_hyperperiods = 10;
    spec.default_train_hyperperiods = 30;
    spec.master_seed = 909;

    auto base = std::filesystem::temp_directory_path();
    auto dir_a = base / "rtleak_acc_a", dir_b = base / "rtleak_acc_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
    write_experiment_outputs(spec, dir_a.string(), 1);
    write_experiment_outputs(spec, dir_b.string(), jobs());
    for (const char* name :
         {"experiment1.csv", "experiment2.csv", "experiment3.csv"}) {
        std::ifstream fa(dir_a / name), fb(dir_b / name);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        require(!sa.str().empty(), std::string(name) + " is empty");
        require(sa.str() == sb.str(),
                std::string(name) + " differs between reruns");
    }
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

void criterion12() {
    Trace tr = simulate(testutil::table1(), 10200, 4242);
    auto preds = random_baseline(tr, 99);
    require(preds.size() >= 10000,
            "only " + std::to_string(preds.size()) + " predictions");
    MetricsReport m = score(preds);
    require(m.ip >= 0.47 && m.ip <= 0.53,
            "baseline IP " + fmt(m.ip) + " outside [0.47, 0.53]");
}

struct Entry {
    int id;
    const char* title;
    std::function<void()> fn;
};

}  // namespace

int main() {
    const std::vector<Entry> entries{
        {1, "suffix counts on the repeated pattern", criterion1},
        {2, "model topology and marginals", criterion2},
        {3, "two-cluster split of the five-value example", criterion3},
        {4, "observer window interference bounds", criterion4},
        {5, "analysis vs simulation response bracket", criterion5},
        {6, "counting primitives vs brute force", criterion6},
        {7, "clustering objective vs exhaustive split", criterion7},
        {8, "inference precision beats the coin toss", criterion8},
        {9, "false-positive bands", criterion9},
        {10, "training and window sweeps are flat", criterion10},
        {11, "seeded reruns are byte-identical", criterion11},
        {12, "coin-toss precision sits at one half", criterion12},
    };

    int failures = 0;
    for (const auto& e : entries) {
        auto t0 = std::chrono::steady_clock::now();
        std::string verdict = "PASS", detail;
        try {
            e.fn();
        } catch (const Failure& f) {
            verdict = "FAIL";
            detail = f.message;
            ++failures;
        } catch (const std::exception& ex) {
            verdict = "FAIL";
            detail = std::string("exception: ") + ex.what();
            ++failures;
        }
        double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", verdict.c_str(),
                    e.id, e.title, secs, detail.empty() ? "" : " - ",
                    detail.c_str());
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
