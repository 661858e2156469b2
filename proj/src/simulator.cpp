#include "rtleak/simulator.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rtleak/taskmodel.hpp"

namespace rtleak {

namespace {

struct Release {
    Time time;
    int task_pos;  // index into ts.tasks
    long job_index;
};

struct PendingJob {
    std::size_t record;  // index into Trace::jobs
    Time remaining;
};

}  // namespace

Trace simulate_with_modes(const TaskSet& ts, int hyperperiods, ModeFn mode_fn) {
    ts.validate();
    if (hyperperiods < 1)
        throw std::invalid_argument("simulate: need at least one hyperperiod");
    const Time horizon = hyperperiod(ts) * hyperperiods;

    Trace tr;
    tr.taskset = ts;
    tr.horizon = horizon;

    // All releases, sorted by time then priority. Mode draws happen in this
    // order, which pins the RNG consumption sequence.
    std::vector<Release> releases;
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
        const auto& t = ts.tasks[i];
        long n_jobs = horizon / t.period;
        for (long k = 0; k < n_jobs; ++k)
            releases.push_back({k * t.period, int(i), k});
    }
    std::sort(releases.begin(), releases.end(), [&](const Release& a, const Release& b) {
        if (a.time != b.time) return a.time < b.time;
        return ts.tasks[a.task_pos].priority < ts.tasks[b.task_pos].priority;
    });

    tr.jobs.reserve(releases.size());
    for (const auto& r : releases) {
        const TaskSpec& t = ts.tasks[r.task_pos];
        JobRecord j;
        j.task_id = t.id;
        j.job_index = r.job_index;
        j.release = r.time;
        j.mode = mode_fn(t, r.job_index);
        j.exec_demand = t.wcet(j.mode);
        tr.jobs.push_back(j);
    }

    // Preemptive highest-priority-first execution. Same-task jobs queue FIFO.
    std::vector<std::deque<PendingJob>> pending(ts.tasks.size());
    std::vector<int> by_priority(ts.tasks.size());
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) by_priority[i] = int(i);
    std::sort(by_priority.begin(), by_priority.end(), [&](int a, int b) {
        return ts.tasks[a].priority < ts.tasks[b].priority;
    });

    const Time kInf = std::numeric_limits<Time>::max();
    std::size_t rel_idx = 0;
    std::size_t completed = 0;
    Time t = 0;
    while (completed < tr.jobs.size()) {
        while (rel_idx < releases.size() && releases[rel_idx].time <= t) {
            pending[releases[rel_idx].task_pos].push_back(
                {rel_idx, tr.jobs[rel_idx].exec_demand});
            ++rel_idx;
        }
        PendingJob* job = nullptr;
        std::deque<PendingJob>* queue = nullptr;
        for (int pos : by_priority) {
            if (!pending[pos].empty()) {
                queue = &pending[pos];
                job = &queue->front();
                break;
            }
        }
        if (!job) {
            t = releases[rel_idx].time;  // idle until next release
            continue;
        }
        Time next_release = rel_idx < releases.size() ? releases[rel_idx].time : kInf;
        Time run = std::min(job->remaining, next_release - t);
        job->remaining -= run;
        t += run;
        if (job->remaining == 0) {
            JobRecord& rec = tr.jobs[job->record];
            rec.completion = t;
            rec.response = t - rec.release;
            if (rec.response > tr.taskset.tasks[releases[job->record].task_pos].deadline)
                ++tr.deadline_misses;
            queue->pop_front();
            ++completed;
        }
    }
    return tr;
}

Trace simulate(const TaskSet& ts, int hyperperiods, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Trace tr = simulate_with_modes(ts, hyperperiods, [&](const TaskSpec& t, long) {
        return unif(rng) < t.critical_rate ? Mode::Critical : Mode::Typical;
    });
    tr.seed = seed;
    return tr;
}

std::vector<Time> observer_sequence(const Trace& tr) {
    const int obs_id = tr.taskset.observer().id;
    std::vector<Time> out;
    for (const auto& j : tr.jobs)
        if (j.task_id == obs_id) out.push_back(j.response);
    return out;
}

std::vector<AlignedSample> align(const Trace& tr) {
    const int obs_id = tr.taskset.observer().id;
    const int vic_id = tr.taskset.victim().id;
    std::vector<JobRecord> victims;
    std::vector<AlignedSample> out;
    for (const auto& j : tr.jobs)
        if (j.task_id == vic_id) victims.push_back(j);
    for (const auto& j : tr.jobs) {
        if (j.task_id != obs_id) continue;
        AlignedSample s;
        s.observer_job = j;
        for (const auto& v : victims)
            if (v.release >= j.release && v.release < j.completion)
                s.victim_jobs.push_back(v);
        s.empty_window = s.victim_jobs.empty();
        s.window_label = Mode::Typical;
        for (const auto& v : s.victim_jobs)
            if (v.mode == Mode::Critical) s.window_label = Mode::Critical;
        out.push_back(std::move(s));
    }
    return out;
}

void save_trace_csv(const Trace& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file: " + path);
    out << "task_id,job_index,release,mode,exec_demand,completion,response\n";
    for (const auto& j : tr.jobs)
        out << j.task_id << ',' << j.job_index << ',' << j.release << ','
            << to_string(j.mode) << ',' << j.exec_demand << ',' << j.completion
            << ',' << j.response << '\n';
}

std::vector<JobRecord> load_jobs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<JobRecord> jobs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        JobRecord j;
        std::getline(ss, field, ',');
        j.task_id = std::stoi(field);
        std::getline(ss, field, ',');
        j.job_index = std::stol(field);
        std::getline(ss, field, ',');
        j.release = std::stoll(field);
        std::getline(ss, field, ',');
        j.mode = mode_from_string(field);
        std::getline(ss, field, ',');
        j.exec_demand = std::stoll(field);
        std::getline(ss, field, ',');
        j.completion = std::stoll(field);
        std::getline(ss, field, ',');
        j.response = std::stoll(field);
        jobs.push_back(j);
    }
    return jobs;
}

}  // namespace rtleak
