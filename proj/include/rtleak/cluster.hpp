#pragma once

#include <string>
#include <vector>

#include "rtleak/taskmodel.hpp"

namespace rtleak {

/// Two 1-D centroids plus the cutoff separating typical-induced from
/// critical-induced observer response times.
struct ClusterModel {
    double centroid_low = 0.0;
    double centroid_high = 0.0;
    double threshold = 0.0;  // (centroid_low + centroid_high) / 2
    double wcss = 0.0;
    std::vector<int> assignments;  // 0 = low cluster, 1 = high cluster
};

/// Lloyd iterations with k = 2, initialized at min/max of the input.
/// Ties in the assignment step go to the high cluster. Throws when all
/// values are identical.
ClusterModel kmeans_1d(const std::vector<Time>& values, int max_iter = 100);

double threshold_of(const ClusterModel& model);

/// Critical iff response strictly exceeds the threshold.
Mode classify(Time response, double threshold);

std::string cluster_to_json_string(const ClusterModel& model);
ClusterModel cluster_from_json_string(const std::string& text);

}  // namespace rtleak
