#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rtleak {

using Time = std::int64_t;

enum class Mode { Typical, Critical };
enum class Role { Victim, Observer, Other };

std::string to_string(Mode m);
std::string to_string(Role r);
Mode mode_from_string(const std::string& s);
Role role_from_string(const std::string& s);

/// Static parameters of one periodic task. Lower priority number means
/// higher scheduling priority.
struct TaskSpec {
    int id = 0;
    std::string name;
    Time period = 0;
    Time deadline = 0;
    Time wcet_typical = 0;
    Time wcet_critical = 0;
    int priority = 0;
    double critical_rate = 0.0;
    Role role = Role::Other;

    bool dual_mode() const { return wcet_typical != wcet_critical; }
    Time wcet(Mode m) const {
        return m == Mode::Critical ? wcet_critical : wcet_typical;
    }
};

/// A set of periodic tasks with exactly one Victim and one Observer.
struct TaskSet {
    std::vector<TaskSpec> tasks;
    bool use_blocking = false;

    const TaskSpec& task(int id) const;
    const TaskSpec& victim() const;
    const TaskSpec& observer() const;

    /// Tasks with priority strictly higher than task `id`.
    std::vector<const TaskSpec*> higher_priority(int id) const;
    /// Tasks with priority strictly lower than task `id`.
    std::vector<const TaskSpec*> lower_priority(int id) const;

    /// Throws std::invalid_argument when any model invariant is violated.
    void validate() const;
};

struct GeneratorConfig {
    int n_tasks = 7;
    double total_utilization = 0.6;
    Time period_lo = 100;
    Time period_hi = 900;
    Time fixed_hyperperiod = 4500;
    double typ_to_cri_ratio = 0.7;
    double critical_rate = 0.3;
    std::uint64_t seed = 0;
    int max_retries = 500;
};

/// UUniFast: n positive utilizations summing to total_u.
std::vector<double> uunifast(int n, double total_u, std::mt19937_64& rng);

/// Random dual-mode taskset with rate-monotonic priorities, periods drawn
/// from the divisors of the fixed hyperperiod inside the period range.
TaskSet generate_taskset(const GeneratorConfig& config, std::mt19937_64& rng);

/// LCM of all periods; throws on 64-bit overflow.
Time hyperperiod(const TaskSet& ts);

/// Divisors of `h` inside [lo, hi], ascending.
std::vector<Time> hyperperiod_divisors(Time h, Time lo, Time hi);

TaskSet load_taskset(const std::string& path);
TaskSet taskset_from_json_string(const std::string& text);
std::string taskset_to_json_string(const TaskSet& ts);
void save_taskset(const TaskSet& ts, const std::string& path);

}  // namespace rtleak
