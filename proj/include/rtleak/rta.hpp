#pragma once

#include <map>
#include <string>

#include "rtleak/taskmodel.hpp"

namespace rtleak {

/// Per-task execution mode used for an analytical scenario.
using ModeAssignment = std::map<int, Mode>;

ModeAssignment all_modes(const TaskSet& ts, Mode m);

struct RtaResult {
    int task_id = 0;
    Time r_min = 0;
    Time r_max = 0;
    bool schedulable = false;
    int iterations = 0;
};

struct FixedPointResult {
    Time response = 0;
    bool schedulable = false;
    int iterations = 0;
};

/// max C_l^cri over lower-priority tasks; 0 for the lowest-priority task.
Time blocking(const TaskSet& ts, int task_id);

/// Coarse window bound: C_i + B_i + sum over hp of ceil(T_i/T_h) * C_h,
/// with each C chosen per the mode assignment. B_i is included only when
/// the taskset carries the blocking flag.
Time window_interference_bound(const TaskSet& ts, int task_id,
                               const ModeAssignment& modes);

/// Response-time recurrence: iterate R(k+1) = B + C_i + sum ceil(R(k)/T_j) C_j
/// from R(0) = C_i until a fixed point or R(k) > D_i.
FixedPointResult response_time_fixed_point(const TaskSet& ts, int task_id,
                                           const ModeAssignment& modes,
                                           Time blocking_term);

/// r_max with all-critical WCETs (plus blocking when enabled); r_min with
/// all-typical WCETs and no blocking.
RtaResult r_min_max(const TaskSet& ts, int task_id);

/// Number of victim-job invocation combinations the observer can face,
/// always an exact power of two. Kept as an exponent since the product
/// can exceed 64 bits.
struct CombinationCount {
    long long log2 = 0;
    std::string to_string() const;  // exact decimal
};

CombinationCount combination_count(const TaskSet& ts);

}  // namespace rtleak
