#include "palwabp/constructive.hpp"

#include <algorithm>
#include <stdexcept>

namespace palwabp {

namespace {

// Largest team for which the portfolio tries every worker order (6! = 720
// permutations per task rule).
constexpr std::size_t kPortfolioPermutationCap = 6;

// Sorts the team into the order stations will take workers. Scores are
// static, so the order is fixed up front.
std::vector<int> station_order(const Instance& inst, const std::vector<int>& team,
                               const PriorityRules& rules) {
    std::vector<int> order = team;
    std::sort(order.begin(), order.end());
    auto key_less = [&](int a, int b) {
        switch (rules.worker_rule) {
            case WorkerRule::FewestCapableTasks: {
                int ca = inst.task_count() - static_cast<int>(inst.incompatible(a).size());
                int cb = inst.task_count() - static_cast<int>(inst.incompatible(b).size());
                if (ca != cb) return ca < cb;
                break;
            }
            case WorkerRule::MinTotalTime: {
                Duration ta = 0, tb = 0;
                for (int i = 0; i < inst.task_count(); ++i) {
                    if (inst.can_do(a, i)) ta += inst.time(a, i);
                    if (inst.can_do(b, i)) tb += inst.time(b, i);
                }
                if (ta != tb) return ta < tb;
                break;
            }
            case WorkerRule::External: {
                double pa = rules.worker_priority.at(a);
                double pb = rules.worker_priority.at(b);
                if (pa != pb) return pa > pb;
                break;
            }
        }
        return a < b;
    };
    std::stable_sort(order.begin(), order.end(), key_less);
    return order;
}

double task_score(const Instance& inst, const PriorityRules& rules, int i) {
    switch (rules.task_rule) {
        case TaskRule::MostSuccessors:
            return static_cast<double>(inst.successor_count(i));
        case TaskRule::MaxPositionalWeight: {
            // Positional weight on the per-task minimum feasible time.
            double w = inst.min_time(i);
            for (int j = 0; j < inst.task_count(); ++j)
                if (inst.precedes(i, j)) w += inst.min_time(j);
            return w;
        }
        case TaskRule::External:
            return rules.task_priority.at(i);
    }
    return 0.0;
}

}  // namespace

std::optional<LineSolution> construct_line(const Instance& inst,
                                           const std::vector<int>& team,
                                           const PriorityRules& rules,
                                           Duration trial_ct) {
    if (team.empty()) throw std::runtime_error("construct: empty team");
    if (rules.worker_rule == WorkerRule::External &&
        rules.worker_priority.size() != static_cast<std::size_t>(inst.worker_count()))
        throw std::runtime_error("construct: worker priority vector has wrong length");
    if (rules.task_rule == TaskRule::External &&
        rules.task_priority.size() != static_cast<std::size_t>(inst.task_count()))
        throw std::runtime_error("construct: task priority vector has wrong length");

    const int n = inst.task_count();
    std::vector<int> order = station_order(inst, team, rules);
    std::vector<double> score(n);
    for (int i = 0; i < n; ++i) score[i] = task_score(inst, rules, i);

    std::vector<int> unassigned_preds(n, 0);
    for (int i = 0; i < n; ++i)
        unassigned_preds[i] = static_cast<int>(inst.immediate_predecessors(i).size());
    std::vector<bool> assigned(n, false);
    int remaining = n;

    LineSolution line;
    line.stations.reserve(order.size());
    for (int w : order) {
        Station st;
        st.worker = w;
        Duration load = 0;
        while (remaining > 0) {
            int best = -1;
            for (int i = 0; i < n; ++i) {
                if (assigned[i] || unassigned_preds[i] > 0) continue;   // not available
                if (!inst.can_do(w, i)) continue;
                if (load + inst.time(w, i) > trial_ct) continue;        // does not fit
                if (best == -1 || score[i] > score[best]) best = i;
            }
            if (best == -1) break;  // station closes: nothing available fits
            assigned[best] = true;
            --remaining;
            load += inst.time(w, best);
            st.tasks.push_back(best);
            for (int j : inst.immediate_successors(best)) --unassigned_preds[j];
        }
        line.cycle_time = std::max(line.cycle_time, load);
        line.stations.push_back(std::move(st));
    }
    if (remaining > 0) return std::nullopt;
    return line;
}

std::optional<LineSolution> solve_serial(const Instance& inst,
                                         const std::vector<int>& team,
                                         const PriorityRules& rules,
                                         CtIncrement increment) {
    Duration lb = lower_bound(inst, team);
    if (lb == kInfeasibleBound) return std::nullopt;
    Duration step = increment == CtIncrement::One ? 1 : inst.min_time_overall();
    if (step < 1) step = 1;
    Duration limit = inst.max_time_sum();
    for (Duration trial = lb; trial <= limit; trial += step) {
        auto line = construct_line(inst, team, rules, trial);
        if (line) return line;
    }
    return std::nullopt;
}

std::optional<LineSolution> solve_serial_portfolio(const Instance& inst,
                                                   const std::vector<int>& team,
                                                   const PriorityRules& rules,
                                                   CtIncrement increment) {
    std::optional<LineSolution> best = solve_serial(inst, team, rules, increment);
    auto consider = [&](const PriorityRules& alt) {
        auto line = solve_serial(inst, team, alt, increment);
        if (line && (!best || line->cycle_time < best->cycle_time))
            best = std::move(line);
    };

    const WorkerRule wrules[] = {WorkerRule::MinTotalTime, WorkerRule::FewestCapableTasks};
    const TaskRule trules[] = {TaskRule::MostSuccessors, TaskRule::MaxPositionalWeight};
    for (WorkerRule wr : wrules) {
        for (TaskRule tr : trules) {
            if (wr == rules.worker_rule && tr == rules.task_rule) continue;
            PriorityRules alt;
            alt.worker_rule = wr;
            alt.task_rule = tr;
            consider(alt);
        }
    }

    // Station order dominates line quality, so small teams are additionally
    // solved under every worker order. Teams beyond the cap stick to the
    // heuristic worker rules above.
    if (team.size() <= kPortfolioPermutationCap) {
        std::vector<int> order = team;
        std::sort(order.begin(), order.end());
        do {
            for (TaskRule tr : trules) {
                PriorityRules alt;
                alt.worker_rule = WorkerRule::External;
                alt.task_rule = tr;
                alt.worker_priority.assign(inst.worker_count(), 0.0);
                for (std::size_t p = 0; p < order.size(); ++p)
                    alt.worker_priority[order[p]] =
                        static_cast<double>(order.size() - p);
                consider(alt);
            }
        } while (std::next_permutation(order.begin(), order.end()));
    }
    return best;
}

}  // namespace palwabp
