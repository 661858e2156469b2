#include "rtleak/rta.hpp"

#include <algorithm>
#include <stdexcept>

namespace rtleak {

ModeAssignment all_modes(const TaskSet& ts, Mode m) {
    ModeAssignment out;
    for (const auto& t : ts.tasks) out[t.id] = m;
    return out;
}

namespace {

Time wcet_of(const TaskSpec& t, const ModeAssignment& modes) {
    auto it = modes.find(t.id);
    return t.wcet(it == modes.end() ? Mode::Typical : it->second);
}

Time ceil_div(Time a, Time b) { return (a + b - 1) / b; }

}  // namespace

Time blocking(const TaskSet& ts, int task_id) {
    Time b = 0;
    for (const TaskSpec* t : ts.lower_priority(task_id))
        b = std::max(b, t->wcet_critical);
    return b;
}

Time window_interference_bound(const TaskSet& ts, int task_id,
                               const ModeAssignment& modes) {
    const TaskSpec& ti = ts.task(task_id);
    Time interference = 0;
    for (const TaskSpec* th : ts.higher_priority(task_id))
        interference += ceil_div(ti.period, th->period) * wcet_of(*th, modes);
    Time b = ts.use_blocking ? blocking(ts, task_id) : 0;
    return wcet_of(ti, modes) + b + interference;
}

FixedPointResult response_time_fixed_point(const TaskSet& ts, int task_id,
                                           const ModeAssignment& modes,
                                           Time blocking_term) {
    const TaskSpec& ti = ts.task(task_id);
    auto hp = ts.higher_priority(task_id);
    FixedPointResult res;
    Time r = wcet_of(ti, modes);
    res.iterations = 0;
    while (true) {
        if (r > ti.deadline) {
            res.response = r;
            res.schedulable = false;
            return res;
        }
        Time next = blocking_term + wcet_of(ti, modes);
        for (const TaskSpec* th : hp)
            next += ceil_div(r, th->period) * wcet_of(*th, modes);
        ++res.iterations;
        if (next == r) {
            res.response = r;
            res.schedulable = true;
            return res;
        }
        r = next;
    }
}

RtaResult r_min_max(const TaskSet& ts, int task_id) {
    RtaResult out;
    out.task_id = task_id;
    Time b_max = ts.use_blocking ? blocking(ts, task_id) : 0;
    auto max_fp =
        response_time_fixed_point(ts, task_id, all_modes(ts, Mode::Critical), b_max);
    auto min_fp =
        response_time_fixed_point(ts, task_id, all_modes(ts, Mode::Typical), 0);
    out.r_max = max_fp.response;
    out.r_min = min_fp.response;
    out.schedulable = max_fp.schedulable;
    out.iterations = max_fp.iterations + min_fp.iterations;
    return out;
}

std::string CombinationCount::to_string() const {
    // 2^log2 as a decimal string via repeated doubling.
    std::vector<int> digits{1};  // least significant first
    for (long long i = 0; i < log2; ++i) {
        int carry = 0;
        for (int& d : digits) {
            int v = d * 2 + carry;
            d = v % 10;
            carry = v / 10;
        }
        if (carry) digits.push_back(carry);
    }
    std::string s;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        s += char('0' + *it);
    return s;
}

CombinationCount combination_count(const TaskSet& ts) {
    const TaskSpec& obs = ts.observer();
    RtaResult rta = r_min_max(ts, obs.id);
    if (!rta.schedulable)
        throw std::runtime_error("combination_count: observer is unschedulable");
    CombinationCount cc;
    for (const TaskSpec* th : ts.higher_priority(obs.id))
        if (th->dual_mode()) cc.log2 += ceil_div(rta.r_max, th->period);
    return cc;
}

}  // namespace rtleak
