#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rtleak/taskmodel.hpp"

namespace rtleak {

struct JobRecord {
    int task_id = 0;
    long job_index = 0;
    Time release = 0;
    Mode mode = Mode::Typical;
    Time exec_demand = 0;
    Time completion = 0;
    Time response = 0;
};

struct Trace {
    TaskSet taskset;
    Time horizon = 0;
    std::vector<JobRecord> jobs;  // ordered by release, then priority
    std::uint64_t seed = 0;
    long deadline_misses = 0;
};

/// Chooses the execution mode of a released job.
using ModeFn = std::function<Mode(const TaskSpec&, long job_index)>;

/// Exact preemptive fixed-priority simulation with synchronous release at
/// t = 0 over `hyperperiods` hyperperiods. Modes are drawn per job from
/// the seeded RNG (probability = task critical_rate).
Trace simulate(const TaskSet& ts, int hyperperiods, std::uint64_t seed);

/// Same schedule machinery with caller-chosen modes (used by analyses and
/// oracle tests).
Trace simulate_with_modes(const TaskSet& ts, int hyperperiods, ModeFn mode_fn);

/// Observer response times in release order.
std::vector<Time> observer_sequence(const Trace& tr);

struct AlignedSample {
    JobRecord observer_job;
    std::vector<JobRecord> victim_jobs;  // releases in [release, completion)
    Mode window_label = Mode::Typical;   // Critical iff any victim job critical
    bool empty_window = false;
};

/// One sample per observer job, victim jobs assigned by release time.
std::vector<AlignedSample> align(const Trace& tr);

void save_trace_csv(const Trace& tr, const std::string& path);
std::vector<JobRecord> load_jobs_csv(const std::string& path);

}  // namespace rtleak
