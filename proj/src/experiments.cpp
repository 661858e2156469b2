#include "rtleak/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rtleak/rta.hpp"
#include "rtleak/simulator.hpp"

namespace rtleak {

void ExperimentSpec::expand_full() {
    utilizations.clear();
    for (int u = 10; u <= 90; u += 10) utilizations.push_back(u / 100.0);
    critical_rates = {0.1, 0.2, 0.3};
    train_sweep = {2, 5, 10, 20, 30, 50, 70, 90, 110};
    window_sweep = {2, 3, 4, 10, 20, 30, 40, 50};
    tasksets_per_point = 100;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b, std::uint64_t c) {
    // splitmix64 over the mixed inputs
    std::uint64_t z = master;
    for (std::uint64_t v : {a, b, c}) {
        z += 0x9e3779b97f4a7c15ULL + v * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
    }
    return z;
}

PointResult run_point(const ExperimentSpec& spec, double utilization,
                      double critical_rate, int train_hyperperiods,
                      int window_len, std::uint64_t point_seed) {
    PointResult out;
    out.utilization = utilization;
    out.critical_rate = critical_rate;
    out.train_hyperperiods = train_hyperperiods;
    out.window_len = window_len;

    TrainConfig cfg;
    cfg.train_hyperperiods = train_hyperperiods;
    cfg.window_len = window_len;

    GeneratorConfig gen;
    gen.n_tasks = spec.n_tasks;
    gen.total_utilization = utilization;
    gen.period_lo = spec.period_lo;
    gen.period_hi = spec.period_hi;
    gen.fixed_hyperperiod = spec.fixed_hyperperiod;
    gen.critical_rate = critical_rate;

    std::vector<MetricsReport> method_reports, baseline_reports;
    int usable = 0;
    std::uint64_t attempt = 0;
    const std::uint64_t max_attempts =
        std::uint64_t(spec.tasksets_per_point) * 200;
    while (usable < spec.tasksets_per_point) {
        if (++attempt > max_attempts)
            throw std::runtime_error("run_point: could not generate enough "
                                     "schedulable tasksets");
        std::uint64_t ts_seed = derive_seed(point_seed, attempt, 0);
        try {
            std::mt19937_64 rng(ts_seed);
            TaskSet ts = generate_taskset(gen, rng);
            if (!r_min_max(ts, ts.observer().id).schedulable) {
                ++out.regenerated;
                continue;
            }
            Trace train_trace = simulate(ts, train_hyperperiods,
                                         derive_seed(point_seed, attempt, 1));
            AttackModel model = train(train_trace, cfg);
            Trace eval_trace = simulate(ts, spec.eval_hyperperiods,
                                        derive_seed(point_seed, attempt, 2));
            auto method = run_attack(model, eval_trace);
            if (method.empty()) {
                ++out.regenerated;
                continue;
            }
            auto baseline = random_baseline(
                eval_trace, derive_seed(point_seed, attempt, 3), window_len);
            method_reports.push_back(score(method));
            baseline_reports.push_back(score(baseline));
            ++usable;
        } catch (const std::exception&) {
            // degenerate taskset (e.g. a single observed response value)
            ++out.regenerated;
        }
    }
    out.method = aggregate(method_reports);
    out.baseline = aggregate(baseline_reports);
    return out;
}

namespace {

template <typename Fn>
std::vector<PointResult> run_parallel(std::size_t n_points, int jobs, Fn&& fn) {
    std::vector<PointResult> results(n_points);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n_points; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n_points; i = next++)
            results[i] = fn(i);
    };
    std::vector<std::future<void>> futs;
    for (int w = 0; w < jobs; ++w)
        futs.push_back(std::async(std::launch::async, worker));
    for (auto& f : futs) f.get();
    return results;
}

}  // namespace

std::vector<PointResult> run_grid(const ExperimentSpec& spec, int jobs) {
    struct Point { double u, rate; };
    std::vector<Point> points;
    for (double u : spec.utilizations)
        for (double rate : spec.critical_rates) points.push_back({u, rate});
    return run_parallel(points.size(), jobs, [&](std::size_t i) {
        return run_point(spec, points[i].u, points[i].rate,
                         spec.default_train_hyperperiods, spec.default_window,
                         derive_seed(spec.master_seed, 0x6772, i));
    });
}

std::vector<PointResult> run_sweeps(const ExperimentSpec& spec, int jobs) {
    struct Point { double rate; int train_h, window; };
    std::vector<Point> points;
    for (int h : spec.train_sweep)
        for (double rate : spec.critical_rates)
            points.push_back({rate, h, spec.default_window});
    for (int w : spec.window_sweep)
        for (double rate : spec.critical_rates)
            points.push_back({rate, spec.default_train_hyperperiods, w});
    return run_parallel(points.size(), jobs, [&](std::size_t i) {
        return run_point(spec, 0.6, points[i].rate, points[i].train_h,
                         points[i].window,
                         derive_seed(spec.master_seed, 0x5377, i));
    });
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string experiment1_csv(const std::vector<PointResult>& results) {
    std::ostringstream out;
    out << "utilization,critical_rate,method,ip_mean,ip_std,n_tasksets,regenerated\n";
    for (const auto& r : results) {
        out << fmt(r.utilization) << ',' << fmt(r.critical_rate) << ",pst,"
            << fmt(r.method.ip.mean) << ',' << fmt(r.method.ip.stddev) << ','
            << r.method.n_reports << ',' << r.regenerated << '\n';
        out << fmt(r.utilization) << ',' << fmt(r.critical_rate) << ",random,"
            << fmt(r.baseline.ip.mean) << ',' << fmt(r.baseline.ip.stddev)
            << ',' << r.baseline.n_reports << ',' << r.regenerated << '\n';
    }
    return out.str();
}

std::string experiment2_csv(const std::vector<PointResult>& results) {
    std::ostringstream out;
    out << "utilization,critical_rate,method,fp_mean,fp_std,n_tasksets,regenerated\n";
    for (const auto& r : results) {
        out << fmt(r.utilization) << ',' << fmt(r.critical_rate) << ",pst,"
            << fmt(r.method.fp.mean) << ',' << fmt(r.method.fp.stddev) << ','
            << r.method.n_reports << ',' << r.regenerated << '\n';
        out << fmt(r.utilization) << ',' << fmt(r.critical_rate) << ",random,"
            << fmt(r.baseline.fp.mean) << ',' << fmt(r.baseline.fp.stddev)
            << ',' << r.baseline.n_reports << ',' << r.regenerated << '\n';
    }
    return out.str();
}

std::string experiment3_csv(const std::vector<PointResult>& results) {
    std::ostringstream out;
    out << "train_hyperperiods,window_len,critical_rate,ip_mean,ip_std,"
           "fp_mean,fp_std,n_tasksets\n";
    for (const auto& r : results)
        out << r.train_hyperperiods << ',' << r.window_len << ','
            << fmt(r.critical_rate) << ',' << fmt(r.method.ip.mean) << ','
            << fmt(r.method.ip.stddev) << ',' << fmt(r.method.fp.mean) << ','
            << fmt(r.method.fp.stddev) << ',' << r.method.n_reports << '\n';
    return out.str();
}

BenchReport bench(const TaskSet& ts, const TrainConfig& cfg,
                  std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    BenchReport rep;
    rep.lambda_budget = cfg.lambda_budget;

    Trace train_trace = simulate(ts, cfg.train_hyperperiods, seed);
    auto t0 = clock::now();
    AttackModel model = train(train_trace, cfg);
    auto t1 = clock::now();
    rep.train_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep.model_bytes = attack_model_to_json_string(model).size();

    Trace eval_trace = simulate(ts, 5, derive_seed(seed, 1));
    auto responses = observer_sequence(eval_trace);
    std::vector<double> times_us;
    const int w = cfg.window_len;
    for (std::size_t j = std::size_t(w); j < responses.size(); ++j) {
        std::span<const Time> recent(responses.data() + j - w, std::size_t(w));
        auto p0 = clock::now();
        infer_next(model, recent);
        auto p1 = clock::now();
        times_us.push_back(
            std::chrono::duration<double, std::micro>(p1 - p0).count());
    }
    if (times_us.empty())
        throw std::runtime_error("bench: no predictions possible");
    std::sort(times_us.begin(), times_us.end());
    rep.n_predictions = long(times_us.size());
    rep.predict_median_us = times_us[times_us.size() / 2];
    rep.predict_p90_us = times_us[times_us.size() * 9 / 10];
    return rep;
}

ExperimentSpec spec_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    nlohmann::json j;
    in >> j;
    ExperimentSpec s;
    s.name = j.value("name", s.name);
    if (j.contains("utilizations"))
        s.utilizations = j["utilizations"].get<std::vector<double>>();
    if (j.contains("critical_rates"))
        s.critical_rates = j["critical_rates"].get<std::vector<double>>();
    if (j.contains("train_sweep"))
        s.train_sweep = j["train_sweep"].get<std::vector<int>>();
    if (j.contains("window_sweep"))
        s.window_sweep = j["window_sweep"].get<std::vector<int>>();
    s.tasksets_per_point = j.value("tasksets_per_point", s.tasksets_per_point);
    s.eval_hyperperiods = j.value("eval_hyperperiods", s.eval_hyperperiods);
    s.default_train_hyperperiods =
        j.value("train_hyperperiods", s.default_train_hyperperiods);
    s.default_window = j.value("window_len", s.default_window);
    s.n_tasks = j.value("n_tasks", s.n_tasks);
    s.fixed_hyperperiod = j.value("hyperperiod", s.fixed_hyperperiod);
    s.period_lo = j.value("period_lo", s.period_lo);
    s.period_hi = j.value("period_hi", s.period_hi);
    s.master_seed = j.value("seed", s.master_seed);
    return s;
}

std::string spec_to_json_string(const ExperimentSpec& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["utilizations"] = s.utilizations;
    j["critical_rates"] = s.critical_rates;
    j["train_sweep"] = s.train_sweep;
    j["window_sweep"] = s.window_sweep;
    j["tasksets_per_point"] = s.tasksets_per_point;
    j["eval_hyperperiods"] = s.eval_hyperperiods;
    j["train_hyperperiods"] = s.default_train_hyperperiods;
    j["window_len"] = s.default_window;
    j["n_tasks"] = s.n_tasks;
    j["hyperperiod"] = s.fixed_hyperperiod;
    j["period_lo"] = s.period_lo;
    j["period_hi"] = s.period_hi;
    j["seed"] = s.master_seed;
    return j.dump(2) + "\n";
}

void write_experiment_outputs(const ExperimentSpec& spec,
                              const std::string& out_dir, int jobs) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto grid = run_grid(spec, jobs);
    auto sweeps = run_sweeps(spec, jobs);
    auto write = [&](const std::string& file, const std::string& text) {
        std::ofstream out(fs::path(out_dir) / file);
        if (!out) throw std::runtime_error("cannot write " + file);
        out << text;
    };
    write("experiment1.csv", experiment1_csv(grid));
    write("experiment2.csv", experiment2_csv(grid));
    write("experiment3.csv", experiment3_csv(sweeps));

    nlohmann::json manifest;
    manifest["spec"] = nlohmann::json::parse(spec_to_json_string(spec));
    manifest["master_seed"] = spec.master_seed;
    manifest["jobs"] = jobs;
    manifest["outputs"] = {"experiment1.csv", "experiment2.csv",
                           "experiment3.csv"};
    manifest["version"] = 1;
    std::ofstream mf(fs::path(out_dir) / "manifest.json");
    mf << manifest.dump(2) << "\n";
}

}  // namespace rtleak
