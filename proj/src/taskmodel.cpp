#include "rtleak/taskmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rtleak {

std::string to_string(Mode m) {
    return m == Mode::Critical ? "critical" : "typical";
}

std::string to_string(Role r) {
    switch (r) {
        case Role::Victim: return "victim";
        case Role::Observer: return "observer";
        default: return "other";
    }
}

Mode mode_from_string(const std::string& s) {
    if (s == "typical") return Mode::Typical;
    if (s == "critical") return Mode::Critical;
    throw std::invalid_argument("unknown mode: " + s);
}

Role role_from_string(const std::string& s) {
    if (s == "victim") return Role::Victim;
    if (s == "observer") return Role::Observer;
    if (s == "other") return Role::Other;
    throw std::invalid_argument("unknown role: " + s);
}

const TaskSpec& TaskSet::task(int id) const {
    for (const auto& t : tasks)
        if (t.id == id) return t;
    throw std::invalid_argument("unknown task id " + std::to_string(id));
}

const TaskSpec& TaskSet::victim() const {
    for (const auto& t : tasks)
        if (t.role == Role::Victim) return t;
    throw std::invalid_argument("taskset has no victim");
}

const TaskSpec& TaskSet::observer() const {
    for (const auto& t : tasks)
        if (t.role == Role::Observer) return t;
    throw std::invalid_argument("taskset has no observer");
}

std::vector<const TaskSpec*> TaskSet::higher_priority(int id) const {
    const TaskSpec& ref = task(id);
    std::vector<const TaskSpec*> out;
    for (const auto& t : tasks)
        if (t.priority < ref.priority) out.push_back(&t);
    std::sort(out.begin(), out.end(),
              [](auto* a, auto* b) { return a->priority < b->priority; });
    return out;
}

std::vector<const TaskSpec*> TaskSet::lower_priority(int id) const {
    const TaskSpec& ref = task(id);
    std::vector<const TaskSpec*> out;
    for (const auto& t : tasks)
        if (t.priority > ref.priority) out.push_back(&t);
    std::sort(out.begin(), out.end(),
              [](auto* a, auto* b) { return a->priority < b->priority; });
    return out;
}

void TaskSet::validate() const {
    if (tasks.empty()) throw std::invalid_argument("empty taskset");
    std::set<int> ids, prios;
    int victims = 0, observers = 0;
    for (const auto& t : tasks) {
        if (!(0 < t.wcet_typical && t.wcet_typical <= t.wcet_critical &&
              t.wcet_critical < t.period))
            throw std::invalid_argument(
                "task " + std::to_string(t.id) +
                ": need 0 < wcet_typical <= wcet_critical < period");
        if (t.deadline != t.period)
            throw std::invalid_argument("task " + std::to_string(t.id) +
                                        ": implicit deadlines required");
        if (t.critical_rate < 0.0 || t.critical_rate > 1.0)
            throw std::invalid_argument("task " + std::to_string(t.id) +
                                        ": critical_rate outside [0,1]");
        if (!ids.insert(t.id).second)
            throw std::invalid_argument("duplicate task id " +
                                        std::to_string(t.id));
        if (!prios.insert(t.priority).second)
            throw std::invalid_argument("duplicate priority " +
                                        std::to_string(t.priority));
        if (t.role == Role::Victim) ++victims;
        if (t.role == Role::Observer) ++observers;
    }
    if (victims != 1 || observers != 1)
        throw std::invalid_argument("need exactly one victim and one observer");
    if (!(observer().priority > victim().priority))
        throw std::invalid_argument(
            "observer priority must be strictly lower than victim priority");
    hyperperiod(*this);  // throws on overflow
}

std::vector<double> uunifast(int n, double total_u, std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("uunifast: n must be >= 1");
    if (!(total_u > 0.0 && total_u < 1.0))
        throw std::invalid_argument("uunifast: total_u must be in (0,1)");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> out(n);
    double sum = total_u;
    for (int i = 1; i < n; ++i) {
        double next = sum * std::pow(unif(rng), 1.0 / (n - i));
        out[i - 1] = sum - next;
        sum = next;
    }
    out[n - 1] = sum;
    return out;
}

std::vector<Time> hyperperiod_divisors(Time h, Time lo, Time hi) {
    std::vector<Time> out;
    for (Time d = lo; d <= hi; ++d)
        if (h % d == 0) out.push_back(d);
    return out;
}

namespace {

Time checked_lcm(Time a, Time b) {
    Time g = std::gcd(a, b);
    Time q = a / g;
    if (q != 0 && b > std::numeric_limits<Time>::max() / q)
        throw std::overflow_error("hyperperiod overflows 64-bit arithmetic");
    return q * b;
}

}  // namespace

Time hyperperiod(const TaskSet& ts) {
    Time l = 1;
    for (const auto& t : ts.tasks) l = checked_lcm(l, t.period);
    return l;
}

TaskSet generate_taskset(const GeneratorConfig& config, std::mt19937_64& rng) {
    if (config.n_tasks < 2)
        throw std::invalid_argument("generate_taskset: need n_tasks >= 2");
    if (!(config.total_utilization > 0.0 && config.total_utilization < 1.0))
        throw std::invalid_argument("generate_taskset: utilization in (0,1)");
    if (!(config.typ_to_cri_ratio > 0.0 && config.typ_to_cri_ratio <= 1.0))
        throw std::invalid_argument("generate_taskset: ratio in (0,1]");
    auto periods_pool = hyperperiod_divisors(config.fixed_hyperperiod,
                                             config.period_lo, config.period_hi);
    if (periods_pool.empty())
        throw std::invalid_argument(
            "no divisor of the hyperperiod lies in the period range");

    std::uniform_int_distribution<std::size_t> pick(0, periods_pool.size() - 1);
    for (int attempt = 0; attempt < config.max_retries; ++attempt) {
        auto utils = uunifast(config.n_tasks, config.total_utilization, rng);
        TaskSet ts;
        bool ok = true;
        for (int i = 0; i < config.n_tasks; ++i) {
            TaskSpec t;
            t.id = i;
            t.period = periods_pool[pick(rng)];
            t.deadline = t.period;
            t.wcet_critical =
                std::max<Time>(1, std::llround(utils[i] * double(t.period)));
            t.wcet_typical = std::max<Time>(
                1, std::llround(config.typ_to_cri_ratio * double(t.wcet_critical)));
            if (t.wcet_critical >= t.period) { ok = false; break; }
            ts.tasks.push_back(t);
        }
        if (!ok) continue;

        // Rate-monotonic priorities; ties broken by task index.
        std::vector<int> order(ts.tasks.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (ts.tasks[a].period != ts.tasks[b].period)
                return ts.tasks[a].period < ts.tasks[b].period;
            return a < b;
        });
        for (std::size_t p = 0; p < order.size(); ++p)
            ts.tasks[order[p]].priority = int(p) + 1;

        // Observer: the lowest-priority task, forced single-mode.
        TaskSpec& obs = ts.tasks[order.back()];
        obs.wcet_typical = obs.wcet_critical;
        obs.critical_rate = 0.0;
        obs.role = Role::Observer;

        // Victim: the highest-priority dual-mode task. The experiment's
        // critical rate is the victim's arrival rate; other tasks keep
        // their dual WCET parameters but never draw critical jobs, so the
        // observer's response variation is caused by the victim alone.
        TaskSpec* victim = nullptr;
        for (int idx : order) {
            TaskSpec& t = ts.tasks[idx];
            if (t.role == Role::Other && t.dual_mode()) { victim = &t; break; }
        }
        if (!victim) continue;
        victim->role = Role::Victim;
        victim->critical_rate = config.critical_rate;

        ts.validate();
        return ts;
    }
    throw std::runtime_error("generate_taskset: retries exhausted");
}

namespace {

nlohmann::json task_to_json(const TaskSpec& t) {
    nlohmann::json j;
    if (!t.name.empty()) j["name"] = t.name;
    j["id"] = t.id;
    j["period"] = t.period;
    j["deadline"] = t.deadline;
    j["wcet_typical"] = t.wcet_typical;
    j["wcet_critical"] = t.wcet_critical;
    j["priority"] = t.priority;
    j["critical_rate"] = t.critical_rate;
    j["role"] = to_string(t.role);
    return j;
}

TaskSpec task_from_json(const nlohmann::json& j) {
    TaskSpec t;
    t.id = j.at("id").get<int>();
    t.name = j.value("name", std::string());
    t.period = j.at("period").get<Time>();
    t.deadline = j.at("deadline").get<Time>();
    t.wcet_typical = j.at("wcet_typical").get<Time>();
    t.wcet_critical = j.at("wcet_critical").get<Time>();
    t.priority = j.at("priority").get<int>();
    t.critical_rate = j.at("critical_rate").get<double>();
    t.role = role_from_string(j.at("role").get<std::string>());
    return t;
}

}  // namespace

std::string taskset_to_json_string(const TaskSet& ts) {
    nlohmann::json j;
    j["blocking"] = ts.use_blocking;
    j["tasks"] = nlohmann::json::array();
    for (const auto& t : ts.tasks) j["tasks"].push_back(task_to_json(t));
    return j.dump(2) + "\n";
}

TaskSet taskset_from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    TaskSet ts;
    const nlohmann::json* arr = &j;
    if (j.is_object()) {
        ts.use_blocking = j.value("blocking", false);
        arr = &j.at("tasks");
    }
    for (const auto& tj : *arr) ts.tasks.push_back(task_from_json(tj));
    ts.validate();
    return ts;
}

TaskSet load_taskset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open taskset file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return taskset_from_json_string(ss.str());
}

void save_taskset(const TaskSet& ts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write taskset file: " + path);
    out << taskset_to_json_string(ts);
}

}  // namespace rtleak
