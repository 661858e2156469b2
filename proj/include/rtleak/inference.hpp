#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rtleak/cluster.hpp"
#include "rtleak/inference_types.hpp"
#include "rtleak/pst.hpp"
#include "rtleak/simulator.hpp"

namespace rtleak {

struct TrainConfig {
    int train_hyperperiods = 50;  // H-hat
    int pst_depth = 3;
    double p_min = 0.001;
    int window_len = 20;     // |R_o|
    Time lambda_budget = 1;  // recorded for budget accounting only

    void validate() const;
};

struct AttackModel {
    Pst pst;
    ClusterModel cluster;
    TrainConfig config;
    std::string taskset_fingerprint;
};

/// Offline phase: PST plus cluster threshold over the observer responses of
/// the first train_hyperperiods of the trace.
AttackModel train(const Trace& training_trace, const TrainConfig& cfg);

/// One-step-ahead prediction from the most recent observer responses.
std::pair<Symbol, Mode> infer_next(const AttackModel& model,
                                   std::span<const Time> recent);

/// Predict the window label of every observer job from index window_len on,
/// using only the preceding responses. Ground truth comes from align().
std::vector<PredictionRecord> run_attack(const AttackModel& model,
                                         const Trace& eval_trace);

/// Coin-toss reference: uniform typical/critical per observer job,
/// independent of observations. Scored over the same job range when
/// window_len is given.
std::vector<PredictionRecord> random_baseline(const Trace& eval_trace,
                                              std::uint64_t seed,
                                              int window_len = 0);

std::string attack_model_to_json_string(const AttackModel& model);
AttackModel attack_model_from_json_string(const std::string& text);

std::string taskset_fingerprint(const TaskSet& ts);

void save_predictions_csv(const std::vector<PredictionRecord>& records,
                          const std::string& path);

}  // namespace rtleak
