#include "rtleak/inference.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace rtleak {

void TrainConfig::validate() const {
    if (train_hyperperiods < 1)
        throw std::invalid_argument("train_hyperperiods must be >= 1");
    if (window_len < 1) throw std::invalid_argument("window_len must be >= 1");
    if (pst_depth < 1) throw std::invalid_argument("pst_depth must be >= 1");
    if (p_min < 0.0 || p_min >= 1.0)
        throw std::invalid_argument("p_min must lie in [0, 1)");
    if (lambda_budget <= 0)
        throw std::invalid_argument("lambda_budget must be positive");
}

std::string taskset_fingerprint(const TaskSet& ts) {
    std::size_t h = std::hash<std::string>{}(taskset_to_json_string(ts));
    char buf[2 * sizeof(h) + 1];
    std::snprintf(buf, sizeof(buf), "%016zx", h);
    return buf;
}

AttackModel train(const Trace& training_trace, const TrainConfig& cfg) {
    cfg.validate();
    const TaskSpec& obs = training_trace.taskset.observer();
    if (cfg.lambda_budget >= obs.wcet_critical)
        throw std::invalid_argument("lambda_budget must be < observer wcet");
    const Time span =
        hyperperiod(training_trace.taskset) * cfg.train_hyperperiods;
    if (training_trace.horizon < span)
        throw std::invalid_argument("trace shorter than the training duration");

    std::vector<Time> responses;
    for (const auto& j : training_trace.jobs)
        if (j.task_id == obs.id && j.release < span)
            responses.push_back(j.response);

    AttackModel model;
    model.config = cfg;
    model.taskset_fingerprint = taskset_fingerprint(training_trace.taskset);
    // Cluster the response alphabet rather than the raw multiset so that a
    // heavily repeated level cannot drag the cutoff into its own cluster.
    std::vector<Time> levels(responses);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    model.cluster = kmeans_1d(levels);  // throws on a single distinct value
    SymbolSeq seq(responses.begin(), responses.end());
    model.pst = build_pst(seq, cfg.pst_depth, cfg.p_min);
    return model;
}

std::pair<Symbol, Mode> infer_next(const AttackModel& model,
                                   std::span<const Time> recent) {
    std::span<const Time> window = recent;
    if (int(window.size()) > model.config.window_len)
        window = window.subspan(window.size() - model.config.window_len);
    Symbol predicted = predict(model.pst, window);
    return {predicted, classify(predicted, model.cluster.threshold)};
}

std::vector<PredictionRecord> run_attack(const AttackModel& model,
                                         const Trace& eval_trace) {
    const auto responses = observer_sequence(eval_trace);
    const auto samples = align(eval_trace);
    const int w = model.config.window_len;
    std::vector<PredictionRecord> out;
    for (std::size_t j = std::size_t(w); j < responses.size(); ++j) {
        std::span<const Time> recent(responses.data() + j - w, std::size_t(w));
        auto [value, mode] = infer_next(model, recent);
        PredictionRecord rec;
        rec.observer_job_index = long(j);
        rec.predicted_response = value;
        rec.predicted_mode = mode;
        rec.actual_window_label = samples[j].window_label;
        rec.correct = rec.predicted_mode == rec.actual_window_label;
        out.push_back(rec);
    }
    return out;
}

std::vector<PredictionRecord> random_baseline(const Trace& eval_trace,
                                              std::uint64_t seed,
                                              int window_len) {
    const auto samples = align(eval_trace);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<PredictionRecord> out;
    for (std::size_t j = std::size_t(window_len); j < samples.size(); ++j) {
        PredictionRecord rec;
        rec.observer_job_index = long(j);
        rec.predicted_response = 0;
        rec.predicted_mode = coin(rng) ? Mode::Critical : Mode::Typical;
        rec.actual_window_label = samples[j].window_label;
        rec.correct = rec.predicted_mode == rec.actual_window_label;
        out.push_back(rec);
    }
    return out;
}

std::string attack_model_to_json_string(const AttackModel& model) {
    nlohmann::json j;
    j["pst"] = nlohmann::json::parse(pst_to_json_string(model.pst));
    j["cluster"] = nlohmann::json::parse(cluster_to_json_string(model.cluster));
    j["config"] = {{"train_hyperperiods", model.config.train_hyperperiods},
                   {"pst_depth", model.config.pst_depth},
                   {"p_min", model.config.p_min},
                   {"window_len", model.config.window_len},
                   {"lambda_budget", model.config.lambda_budget}};
    j["taskset_fingerprint"] = model.taskset_fingerprint;
    return j.dump(2) + "\n";
}

AttackModel attack_model_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    AttackModel model;
    model.pst = pst_from_json_string(j.at("pst").dump());
    model.cluster = cluster_from_json_string(j.at("cluster").dump());
    const auto& c = j.at("config");
    model.config.train_hyperperiods = c.at("train_hyperperiods").get<int>();
    model.config.pst_depth = c.at("pst_depth").get<int>();
    model.config.p_min = c.at("p_min").get<double>();
    model.config.window_len = c.at("window_len").get<int>();
    model.config.lambda_budget = c.at("lambda_budget").get<Time>();
    model.taskset_fingerprint = j.at("taskset_fingerprint").get<std::string>();
    return model;
}

void save_predictions_csv(const std::vector<PredictionRecord>& records,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write predictions file: " + path);
    out << "job_index,predicted_response,predicted_mode,actual_label,correct\n";
    for (const auto& r : records)
        out << r.observer_job_index << ',' << r.predicted_response << ','
            << to_string(r.predicted_mode) << ','
            << to_string(r.actual_window_label) << ',' << (r.correct ? 1 : 0)
            << '\n';
}

}  // namespace rtleak
