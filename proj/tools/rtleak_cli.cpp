// Command-line front end for the response-time leakage toolkit.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtleak/cluster.hpp"
#include "rtleak/experiments.hpp"
#include "rtleak/inference.hpp"
#include "rtleak/metrics.hpp"
#include "rtleak/pst.hpp"
#include "rtleak/rta.hpp"
#include "rtleak/simulator.hpp"
#include "rtleak/taskmodel.hpp"

namespace {

using namespace rtleak;

std::vector<Time> load_responses_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open responses file: " + path);
    std::vector<Time> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0])))
            continue;  // header or blank
        out.push_back(std::stoll(line));
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Trace trace_from_csv(const std::string& trace_path,
                     const std::string& taskset_path) {
    Trace tr;
    tr.taskset = load_taskset(taskset_path);
    tr.jobs = load_jobs_csv(trace_path);
    Time last = 0;
    for (const auto& j : tr.jobs) last = std::max(last, j.release + 1);
    Time h = hyperperiod(tr.taskset);
    tr.horizon = (last + h - 1) / h * h;
    return tr;
}

int cmd_rta(const std::string& taskset_path, bool csv) {
    TaskSet ts = load_taskset(taskset_path);
    std::vector<RtaResult> rows;
    for (const auto& t : ts.tasks) rows.push_back(r_min_max(ts, t.id));
    if (csv) {
        std::cout << "task_id,r_min,r_max,schedulable\n";
        for (const auto& r : rows)
            std::cout << r.task_id << ',' << r.r_min << ',' << r.r_max << ','
                      << (r.schedulable ? 1 : 0) << '\n';
    } else {
        std::printf("%8s %10s %10s %12s\n", "task", "r_min", "r_max", "schedulable");
        for (const auto& r : rows)
            std::printf("%8d %10lld %10lld %12s\n", r.task_id,
                        (long long)r.r_min, (long long)r.r_max,
                        r.schedulable ? "yes" : "no");
    }
    bool obs_ok = r_min_max(ts, ts.observer().id).schedulable;
    if (obs_ok) {
        auto cc = combination_count(ts);
        std::cout << "combination_count,2^" << cc.log2 << "," << cc.to_string()
                  << "\n";
    } else {
        std::cout << "combination_count,unavailable (observer unschedulable)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timing-leakage analysis toolkit for dual-mode "
                 "fixed-priority tasksets"};
    app.require_subcommand(1);

    // rta
    std::string taskset_path;
    bool csv = false;
    auto* rta_cmd = app.add_subcommand("rta", "Response-time analysis table");
    rta_cmd->add_option("taskset", taskset_path, "Taskset JSON file")->required();
    rta_cmd->add_flag("--csv", csv, "Emit CSV instead of a table");

    // simulate
    std::string sim_taskset, sim_out = "trace.csv";
    int sim_hyperperiods = 1;
    std::uint64_t sim_seed = 0;
    auto* sim_cmd = app.add_subcommand("simulate", "Run the schedule simulator");
    sim_cmd->add_option("taskset", sim_taskset, "Taskset JSON file")->required();
    sim_cmd->add_option("--hyperperiods", sim_hyperperiods, "Horizon length")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim_seed, "RNG seed");
    sim_cmd->add_option("--out", sim_out, "Output trace CSV");

    // pst build
    std::string pst_in, pst_out = "model.json";
    int pst_depth = 3;
    double pst_pmin = 0.001;
    auto* pst_cmd = app.add_subcommand("pst", "Suffix-model operations");
    auto* pst_build = pst_cmd->add_subcommand("build", "Build from responses");
    pst_build->add_option("--in", pst_in, "Responses CSV (one value per line)")
        ->required();
    pst_build->add_option("--depth", pst_depth, "Maximum suffix length");
    pst_build->add_option("--pmin", pst_pmin, "Probability threshold");
    pst_build->add_option("--out", pst_out, "Output model JSON");

    // cluster
    std::string cl_in, cl_out = "cluster.json";
    auto* cl_cmd = app.add_subcommand("cluster", "Two-cluster split of responses");
    cl_cmd->add_option("--in", cl_in, "Responses CSV")->required();
    cl_cmd->add_option("--out", cl_out, "Output cluster JSON");

    // attack train / run
    auto* attack_cmd = app.add_subcommand("attack", "Train or run the inference");
    std::string at_trace, at_taskset, at_config, at_out = "model.json";
    auto* at_train = attack_cmd->add_subcommand("train", "Offline training");
    at_train->add_option("--trace", at_trace, "Training trace CSV")->required();
    at_train->add_option("--taskset", at_taskset, "Taskset JSON")->required();
    at_train->add_option("--config", at_config, "TrainConfig JSON (optional)");
    at_train->add_option("--out", at_out, "Output model JSON");

    std::string ar_model, ar_trace, ar_taskset, ar_out = "preds.csv";
    auto* at_run = attack_cmd->add_subcommand("run", "Runtime inference");
    at_run->add_option("--model", ar_model, "Model JSON")->required();
    at_run->add_option("--trace", ar_trace, "Evaluation trace CSV")->required();
    at_run->add_option("--taskset", ar_taskset, "Taskset JSON")->required();
    at_run->add_option("--out", ar_out, "Output predictions CSV");

    // experiment run
    auto* exp_cmd = app.add_subcommand("experiment", "Reproduce the experiments");
    std::string ex_spec, ex_out = "results";
    std::uint64_t ex_seed = 1;
    bool ex_full = false;
    int ex_jobs = 1;
    auto* ex_run = exp_cmd->add_subcommand("run", "Run the experiment grid");
    ex_run->add_option("--spec", ex_spec, "Experiment spec JSON (optional)");
    ex_run->add_option("--out", ex_out, "Output directory");
    ex_run->add_option("--seed", ex_seed, "Master seed");
    ex_run->add_flag("--full", ex_full, "Full-scale sweeps");
    ex_run->add_option("--jobs", ex_jobs, "Worker threads")
        ->check(CLI::PositiveNumber);

    // bench
    std::string bn_taskset;
    int bn_train = 20, bn_window = 20;
    std::uint64_t bn_seed = 1;
    auto* bn_cmd = app.add_subcommand("bench", "Timing/memory micro-benchmark");
    bn_cmd->add_option("taskset", bn_taskset, "Taskset JSON file")->required();
    bn_cmd->add_option("--hyperperiods", bn_train, "Training duration");
    bn_cmd->add_option("--window", bn_window, "Observation window");
    bn_cmd->add_option("--seed", bn_seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*rta_cmd) return cmd_rta(taskset_path, csv);

        if (*sim_cmd) {
            TaskSet ts = load_taskset(sim_taskset);
            Trace tr = simulate(ts, sim_hyperperiods, sim_seed);
            save_trace_csv(tr, sim_out);
            std::cout << "jobs=" << tr.jobs.size()
                      << " deadline_misses=" << tr.deadline_misses << "\n";
            return 0;
        }

        if (*pst_build) {
            auto responses = load_responses_csv(pst_in);
            SymbolSeq seq(responses.begin(), responses.end());
            Pst pst = build_pst(seq, pst_depth, pst_pmin);
            write_file(pst_out, pst_to_json_string(pst));
            std::cout << "nodes=" << pst.nodes.size()
                      << " alphabet=" << pst.alphabet.size() << "\n";
            return 0;
        }

        if (*cl_cmd) {
            auto responses = load_responses_csv(cl_in);
            ClusterModel m = kmeans_1d(responses);
            write_file(cl_out, cluster_to_json_string(m));
            std::cout << "centroids=[" << m.centroid_low << ","
                      << m.centroid_high << "] threshold=" << m.threshold
                      << "\n";
            return 0;
        }

        if (*at_train) {
            Trace tr = trace_from_csv(at_trace, at_taskset);
            TrainConfig cfg;
            if (!at_config.empty()) {
                auto j = nlohmann::json::parse(read_file(at_config));
                cfg.train_hyperperiods =
                    j.value("train_hyperperiods", cfg.train_hyperperiods);
                cfg.pst_depth = j.value("pst_depth", cfg.pst_depth);
                cfg.p_min = j.value("p_min", cfg.p_min);
                cfg.window_len = j.value("window_len", cfg.window_len);
                cfg.lambda_budget = j.value("lambda_budget", cfg.lambda_budget);
            }
            AttackModel model = train(tr, cfg);
            write_file(at_out, attack_model_to_json_string(model));
            std::cout << "threshold=" << model.cluster.threshold
                      << " pst_nodes=" << model.pst.nodes.size() << "\n";
            return 0;
        }

        if (*at_run) {
            AttackModel model = attack_model_from_json_string(read_file(ar_model));
            Trace tr = trace_from_csv(ar_trace, ar_taskset);
            auto records = run_attack(model, tr);
            save_predictions_csv(records, ar_out);
            if (!records.empty()) {
                auto rep = score(records);
                std::cout << "n=" << rep.n_jobs << " ip=" << rep.ip
                          << " fp=" << rep.fp_pct << "\n";
            }
            return 0;
        }

        if (*ex_run) {
            ExperimentSpec spec;
            if (!ex_spec.empty()) spec = spec_from_json_file(ex_spec);
            spec.master_seed = ex_seed;
            if (ex_full) spec.expand_full();
            write_experiment_outputs(spec, ex_out, ex_jobs);
            std::cout << "results written to " << ex_out << "\n";
            return 0;
        }

        if (*bn_cmd) {
            TaskSet ts = load_taskset(bn_taskset);
            TrainConfig cfg;
            cfg.train_hyperperiods = bn_train;
            cfg.window_len = bn_window;
            BenchReport rep = bench(ts, cfg, bn_seed);
            std::cout << "train_ms=" << rep.train_ms
                      << " predict_median_us=" << rep.predict_median_us
                      << " predict_p90_us=" << rep.predict_p90_us
                      << " model_bytes=" << rep.model_bytes
                      << " n_predictions=" << rep.n_predictions << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
