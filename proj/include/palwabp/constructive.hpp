#pragma once

#include <optional>
#include <vector>

#include "palwabp/instance.hpp"
#include "palwabp/objective.hpp"
#include "palwabp/solution.hpp"

namespace palwabp {

enum class WorkerRule {
    FewestCapableTasks,  // most constrained worker first
    MinTotalTime,        // smallest sum of feasible times first
    External,            // highest priority value first
};

enum class TaskRule {
    MostSuccessors,       // most transitive successors first
    MaxPositionalWeight,  // largest min-time positional weight first
    External,             // highest priority value first
};

/// Priority rules steering the greedy line construction. External vectors
/// are indexed by worker / task id; larger value means higher priority.
/// All ties break toward the lowest index.
struct PriorityRules {
    WorkerRule worker_rule = WorkerRule::MinTotalTime;
    TaskRule task_rule = TaskRule::MostSuccessors;
    std::vector<double> worker_priority;  // used when worker_rule == External
    std::vector<double> task_priority;    // used when task_rule == External
};

/// How solve_serial advances the trial cycle time after a failed attempt.
enum class CtIncrement {
    MinTaskTime,  // add the smallest feasible matrix entry
    One,          // add 1
};

/// Builds one serial line for `team` under a cycle-time budget. Stations
/// open left to right; each takes the best remaining worker per worker_rule,
/// then greedily adds available tasks in task_rule order while the load
/// stays within trial_ct. Returns the line (exactly |team| stations,
/// trailing ones possibly empty) or nullopt when some task cannot be placed.
std::optional<LineSolution> construct_line(const Instance& inst,
                                           const std::vector<int>& team,
                                           const PriorityRules& rules,
                                           Duration trial_ct);

/// Minimum-cycle-time serial solve: sweeps trial_ct upward from
/// lower_bound(team) until construct_line succeeds. Returns nullopt when the
/// team cannot cover all tasks or no trial up to the instance-wide load
/// bound succeeds.
std::optional<LineSolution> solve_serial(const Instance& inst,
                                         const std::vector<int>& team,
                                         const PriorityRules& rules,
                                         CtIncrement increment = CtIncrement::MinTaskTime);

/// Best solve_serial line across a portfolio of rule settings: the given
/// rules, the remaining combinations of the two static rules, and, for teams
/// of up to six workers, every worker order crossed with both task rules.
/// The greedy is sensitive to station order (a worker placed before its
/// tasks become available can miss a feasible or tight line), so the
/// portfolio keeps whichever attempt yields the lowest cycle time. The
/// enumeration order is fixed, making the result deterministic.
std::optional<LineSolution> solve_serial_portfolio(
    const Instance& inst, const std::vector<int>& team, const PriorityRules& rules,
    CtIncrement increment = CtIncrement::MinTaskTime);

}  // namespace palwabp
