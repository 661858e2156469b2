#pragma once

#include <string>
#include <vector>

#include "rtleak/inference_types.hpp"

namespace rtleak {

struct MetricsReport {
    double ip = 0.0;      // correct predictions / total observed jobs
    double fp_pct = 0.0;  // predicted-critical-but-typical / total observed jobs
    long n_jobs = 0;
    long n_correct = 0;
    long n_false_positive = 0;
};

struct SigmaRange {
    double lo = 0.0;
    double hi = 0.0;
};

struct AggregateStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    SigmaRange one_sigma;
    SigmaRange two_sigma;
};

struct MetricsSummary {
    AggregateStats ip;
    AggregateStats fp;
    int n_reports = 0;
};

double inference_precision(const std::vector<PredictionRecord>& records);
double false_positive_pct(const std::vector<PredictionRecord>& records);
MetricsReport score(const std::vector<PredictionRecord>& records);
MetricsSummary aggregate(const std::vector<MetricsReport>& reports);

}  // namespace rtleak
