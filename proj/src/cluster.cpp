#include "rtleak/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace rtleak {

ClusterModel kmeans_1d(const std::vector<Time>& values, int max_iter) {
    if (values.size() < 2)
        throw std::invalid_argument("kmeans_1d: need at least two values");
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    if (*lo_it == *hi_it)
        throw std::invalid_argument("kmeans_1d: all values identical");

    double mu_low = double(*lo_it);
    double mu_high = double(*hi_it);
    std::vector<int> assign(values.size(), 0);

    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        double sum0 = 0, sum1 = 0;
        long n0 = 0, n1 = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            double v = double(values[i]);
            int a = std::abs(v - mu_low) < std::abs(v - mu_high) ? 0 : 1;
            if (a != assign[i]) changed = true;
            assign[i] = a;
            if (a == 0) { sum0 += v; ++n0; } else { sum1 += v; ++n1; }
        }
        if (n0 == 0 || n1 == 0) break;  // degenerate split, keep centroids
        mu_low = sum0 / double(n0);
        mu_high = sum1 / double(n1);
        if (!changed && iter > 0) break;
    }

    ClusterModel m;
    m.centroid_low = mu_low;
    m.centroid_high = mu_high;
    m.threshold = (mu_low + mu_high) / 2.0;
    m.assignments = assign;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double mu = assign[i] == 0 ? mu_low : mu_high;
        double d = double(values[i]) - mu;
        m.wcss += d * d;
    }

    // Lloyd can converge to a non-optimal contiguous split. The 1-D
    // two-cluster optimum is always a contiguous split of the sorted data,
    // so scan all splits and adopt one only when it is strictly better.
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<double> prefix(values.size() + 1, 0.0),
        prefix_sq(values.size() + 1, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = double(values[order[i]]);
        prefix[i + 1] = prefix[i] + v;
        prefix_sq[i + 1] = prefix_sq[i] + v * v;
    }
    auto segment_ss = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
        double n = double(hi - lo);
        double s = prefix[hi] - prefix[lo];
        return (prefix_sq[hi] - prefix_sq[lo]) - s * s / n;
    };
    std::size_t best_cut = 0;
    double best_wcss = m.wcss;
    for (std::size_t cut = 1; cut < values.size(); ++cut) {
        double w = segment_ss(0, cut) + segment_ss(cut, values.size());
        if (w < best_wcss - 1e-9) {
            best_wcss = w;
            best_cut = cut;
        }
    }
    if (best_cut != 0) {
        m.wcss = best_wcss;
        m.centroid_low = (prefix[best_cut] - prefix[0]) / double(best_cut);
        m.centroid_high = (prefix[values.size()] - prefix[best_cut]) /
                          double(values.size() - best_cut);
        m.threshold = (m.centroid_low + m.centroid_high) / 2.0;
        for (std::size_t i = 0; i < order.size(); ++i)
            m.assignments[order[i]] = i < best_cut ? 0 : 1;
    }
    return m;
}

double threshold_of(const ClusterModel& model) {
    return (model.centroid_low + model.centroid_high) / 2.0;
}

Mode classify(Time response, double threshold) {
    return double(response) > threshold ? Mode::Critical : Mode::Typical;
}

std::string cluster_to_json_string(const ClusterModel& model) {
    nlohmann::json j;
    j["centroids"] = {model.centroid_low, model.centroid_high};
    j["threshold"] = model.threshold;
    j["wcss"] = model.wcss;
    j["assignments"] = model.assignments;
    return j.dump(2) + "\n";
}

ClusterModel cluster_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ClusterModel m;
    m.centroid_low = j.at("centroids").at(0).get<double>();
    m.centroid_high = j.at("centroids").at(1).get<double>();
    m.threshold = j.at("threshold").get<double>();
    m.wcss = j.at("wcss").get<double>();
    m.assignments = j.at("assignments").get<std::vector<int>>();
    return m;
}

}  // namespace rtleak
