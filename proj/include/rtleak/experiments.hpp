#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtleak/inference.hpp"
#include "rtleak/metrics.hpp"
#include "rtleak/taskmodel.hpp"

namespace rtleak {

struct ExperimentSpec {
    std::string name = "experiment";
    std::vector<double> utilizations{0.2, 0.5, 0.8};
    std::vector<double> critical_rates{0.1, 0.2, 0.3};
    std::vector<int> train_sweep{2, 10, 30, 50, 110};
    std::vector<int> window_sweep{2, 10, 20, 50};
    int tasksets_per_point = 20;  // N_u
    int eval_hyperperiods = 20;
    int default_train_hyperperiods = 50;
    int default_window = 20;
    int n_tasks = 7;
    Time fixed_hyperperiod = 4500;
    Time period_lo = 100;
    Time period_hi = 900;
    std::uint64_t master_seed = 1;

    /// Full-scale sweeps (utilization 10%..90%, N_u = 100).
    void expand_full();
};

ExperimentSpec spec_from_json_file(const std::string& path);
std::string spec_to_json_string(const ExperimentSpec& spec);

struct PointResult {
    double utilization = 0.0;
    double critical_rate = 0.0;
    int train_hyperperiods = 0;
    int window_len = 0;
    MetricsSummary method;
    MetricsSummary baseline;
    int regenerated = 0;  // tasksets discarded before N_u usable ones
};

/// One experiment grid point: N_u generated tasksets, each simulated,
/// trained on, attacked, and scored against the coin-toss baseline.
PointResult run_point(const ExperimentSpec& spec, double utilization,
                      double critical_rate, int train_hyperperiods,
                      int window_len, std::uint64_t point_seed);

/// Utilization x rate grid at the default training duration and window.
std::vector<PointResult> run_grid(const ExperimentSpec& spec, int jobs = 1);

/// Grid results formatted as inference-precision rows.
std::string experiment1_csv(const std::vector<PointResult>& results);
/// Same grid, false-positive rows.
std::string experiment2_csv(const std::vector<PointResult>& results);

/// Training-duration and observation-window sweeps at 60% utilization.
std::vector<PointResult> run_sweeps(const ExperimentSpec& spec, int jobs = 1);
std::string experiment3_csv(const std::vector<PointResult>& results);

struct BenchReport {
    double train_ms = 0.0;
    double predict_median_us = 0.0;
    double predict_p90_us = 0.0;
    std::size_t model_bytes = 0;
    long n_predictions = 0;
    Time lambda_budget = 0;
};

/// Relative timing/memory properties of the attack pipeline on one taskset.
BenchReport bench(const TaskSet& ts, const TrainConfig& cfg,
                  std::uint64_t seed);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

void write_experiment_outputs(const ExperimentSpec& spec,
                              const std::string& out_dir, int jobs);

}  // namespace rtleak
