#include "palwabp/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace palwabp {

double combined_cycle_time(const std::vector<double>& line_cycle_times) {
    if (line_cycle_times.empty())
        throw std::runtime_error("combined cycle time: no active lines");
    double rate = 0.0;
    for (double c : line_cycle_times) {
        if (!(c > 0.0)) throw std::runtime_error("combined cycle time: invalid cycle time");
        rate += 1.0 / c;
    }
    return 1.0 / rate;
}

LineEvaluation evaluate_line(const Instance& inst, const LineSolution& line) {
    const int n = inst.task_count();
    std::vector<int> station_of(n, -1);
    std::vector<int> pos_of(n, -1);

    LineEvaluation ev;
    ev.station_loads.assign(line.stations.size(), 0);
    for (std::size_t s = 0; s < line.stations.size(); ++s) {
        const Station& st = line.stations[s];
        if (st.worker < 0 || st.worker >= inst.worker_count())
            throw std::runtime_error("evaluate: station references unknown worker");
        for (std::size_t p = 0; p < st.tasks.size(); ++p) {
            int i = st.tasks[p];
            if (i < 0 || i >= n)
                throw std::runtime_error("evaluate: station references unknown task");
            if (station_of[i] != -1)
                throw std::runtime_error("evaluate: task " + std::to_string(i + 1) +
                                         " assigned twice");
            if (!inst.can_do(st.worker, i))
                throw std::runtime_error("evaluate: worker " + inst.worker_name(st.worker) +
                                         " cannot execute task " + std::to_string(i + 1));
            station_of[i] = static_cast<int>(s);
            pos_of[i] = static_cast<int>(p);
            ev.station_loads[s] += inst.time(st.worker, i);
        }
    }
    for (int i = 0; i < n; ++i)
        if (station_of[i] == -1)
            throw std::runtime_error("evaluate: task " + std::to_string(i + 1) +
                                     " not assigned");
    for (auto [i, j] : inst.precedence()) {
        if (station_of[i] > station_of[j] ||
            (station_of[i] == station_of[j] && pos_of[i] > pos_of[j]))
            throw std::runtime_error("evaluate: precedence violated for tasks " +
                                     std::to_string(i + 1) + " -> " + std::to_string(j + 1));
    }
    ev.cycle_time = 0;
    for (Duration l : ev.station_loads) ev.cycle_time = std::max(ev.cycle_time, l);
    return ev;
}

namespace {

void add(ValidationReport& rep, ViolationKind kind, std::string msg) {
    rep.ok = false;
    rep.violations.push_back({kind, std::move(msg)});
}

}  // namespace

ValidationReport validate_solution(const Instance& inst, const ParallelSolution& sol) {
    ValidationReport rep;
    const int n = inst.task_count();
    const int m = inst.worker_count();

    if (static_cast<int>(sol.lines.size()) > sol.k_max)
        add(rep, ViolationKind::LineCount,
            "solution uses " + std::to_string(sol.lines.size()) + " lines but k_max is " +
                std::to_string(sol.k_max));
    if (sol.lines.empty())
        add(rep, ViolationKind::Structure, "solution has no lines");

    std::vector<int> worker_uses(m, 0);
    for (std::size_t k = 0; k < sol.lines.size(); ++k) {
        const LineSolution& line = sol.lines[k];
        std::string where = "line " + std::to_string(k + 1);
        std::vector<int> station_of(n, -1);
        std::vector<int> pos_of(n, -1);
        std::vector<int> seen(n, 0);

        for (std::size_t s = 0; s < line.stations.size(); ++s) {
            const Station& st = line.stations[s];
            if (st.worker < 0 || st.worker >= m) {
                add(rep, ViolationKind::Structure, where + ": unknown worker index");
                continue;
            }
            ++worker_uses[st.worker];
            for (std::size_t p = 0; p < st.tasks.size(); ++p) {
                int i = st.tasks[p];
                if (i < 0 || i >= n) {
                    add(rep, ViolationKind::Structure, where + ": unknown task id");
                    continue;
                }
                ++seen[i];
                station_of[i] = static_cast<int>(s);
                pos_of[i] = static_cast<int>(p);
                if (!inst.can_do(st.worker, i))
                    add(rep, ViolationKind::Incompatibility,
                        where + ": worker " + inst.worker_name(st.worker) +
                            " cannot execute task " + std::to_string(i + 1));
            }
        }
        for (int i = 0; i < n; ++i) {
            if (seen[i] == 0)
                add(rep, ViolationKind::TaskCoverage,
                    where + ": task " + std::to_string(i + 1) + " missing");
            else if (seen[i] > 1)
                add(rep, ViolationKind::TaskCoverage,
                    where + ": task " + std::to_string(i + 1) + " assigned " +
                        std::to_string(seen[i]) + " times");
        }
        for (auto [i, j] : inst.precedence()) {
            if (station_of[i] == -1 || station_of[j] == -1) continue;
            if (station_of[i] > station_of[j] ||
                (station_of[i] == station_of[j] && pos_of[i] > pos_of[j]))
                add(rep, ViolationKind::Precedence,
                    where + ": precedence violated, task " + std::to_string(i + 1) +
                        " must come before task " + std::to_string(j + 1));
        }
    }

    for (int w = 0; w < m; ++w) {
        if (worker_uses[w] == 0)
            add(rep, ViolationKind::WorkerUniqueness,
                "worker " + inst.worker_name(w) + " not assigned to any line");
        else if (worker_uses[w] > 1)
            add(rep, ViolationKind::WorkerUniqueness,
                "worker " + inst.worker_name(w) + " duplicated across stations/lines");
    }
    return rep;
}

Duration lower_bound(const Instance& inst, const std::vector<int>& subset) {
    if (subset.empty()) throw std::runtime_error("lower bound: empty worker subset");
    const int n = inst.task_count();
    Duration total = 0;
    Duration max_min = 0;
    for (int i = 0; i < n; ++i) {
        Duration mn = kInfeasibleBound;
        for (int w : subset) {
            if (!inst.can_do(w, i)) continue;
            mn = std::min<Duration>(mn, inst.time(w, i));
        }
        if (mn == kInfeasibleBound) return kInfeasibleBound;
        total += mn;
        max_min = std::max(max_min, mn);
    }
    Duration stations = static_cast<Duration>(subset.size());
    Duration by_total = (total + stations - 1) / stations;  // ceil
    return std::max(by_total, max_min);
}

ThroughputReport throughput_report(const ParallelSolution& sol) {
    ThroughputReport tr;
    std::vector<double> cts;
    for (const auto& line : sol.lines) {
        tr.line_throughput.push_back(3600.0 / static_cast<double>(line.cycle_time));
        cts.push_back(static_cast<double>(line.cycle_time));
    }
    tr.combined_cycle_time = combined_cycle_time(cts);
    tr.combined_throughput = 3600.0 / tr.combined_cycle_time;
    return tr;
}

ParallelSolution make_parallel_solution(const Instance& inst,
                                        std::vector<LineSolution> lines,
                                        int k_max) {
    ParallelSolution sol;
    sol.k_max = k_max;
    std::vector<double> cts;
    for (auto& line : lines) {
        line.cycle_time = evaluate_line(inst, line).cycle_time;
        cts.push_back(static_cast<double>(line.cycle_time));
    }
    sol.lines = std::move(lines);
    sol.combined_cycle_time = combined_cycle_time(cts);
    sol.combined_throughput = 3600.0 / sol.combined_cycle_time;
    return sol;
}

}  // namespace palwabp
