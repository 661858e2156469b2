#include "rtleak/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace rtleak {

MetricsReport score(const std::vector<PredictionRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("metrics: empty prediction stream");
    MetricsReport r;
    r.n_jobs = long(records.size());
    for (const auto& p : records) {
        if (p.correct) ++r.n_correct;
        if (p.predicted_mode == Mode::Critical &&
            p.actual_window_label == Mode::Typical)
            ++r.n_false_positive;
    }
    r.ip = double(r.n_correct) / double(r.n_jobs);
    r.fp_pct = double(r.n_false_positive) / double(r.n_jobs);
    return r;
}

double inference_precision(const std::vector<PredictionRecord>& records) {
    return score(records).ip;
}

double false_positive_pct(const std::vector<PredictionRecord>& records) {
    return score(records).fp_pct;
}

namespace {

AggregateStats stats_of(const std::vector<double>& xs) {
    AggregateStats s;
    double sum = 0;
    for (double x : xs) sum += x;
    s.mean = sum / double(xs.size());
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = xs.size() > 1 ? std::sqrt(ss / double(xs.size() - 1)) : 0.0;
    s.one_sigma = {s.mean - s.stddev, s.mean + s.stddev};
    s.two_sigma = {s.mean - 2 * s.stddev, s.mean + 2 * s.stddev};
    return s;
}

}  // namespace

MetricsSummary aggregate(const std::vector<MetricsReport>& reports) {
    if (reports.size() < 2)
        throw std::invalid_argument("aggregate: need at least two reports");
    std::vector<double> ips, fps;
    for (const auto& r : reports) {
        ips.push_back(r.ip);
        fps.push_back(r.fp_pct);
    }
    MetricsSummary s;
    s.ip = stats_of(ips);
    s.fp = stats_of(fps);
    s.n_reports = int(reports.size());
    return s;
}

}  // namespace rtleak
