#pragma once

#include <limits>
#include <string>
#include <vector>

#include "palwabp/instance.hpp"
#include "palwabp/solution.hpp"

namespace palwabp {

/// Combined cycle time of parallel lines: the harmonic-style composition
/// 1 / sum(1/c_k). Throws on an empty list ("no active lines") or a
/// non-positive entry ("invalid cycle time").
double combined_cycle_time(const std::vector<double>& line_cycle_times);

/// Station loads and the resulting line cycle time. Throws if a task is
/// assigned to a worker that cannot execute it, if the task set is not a
/// partition of the full task set, or if precedence is violated.
struct LineEvaluation {
    std::vector<Duration> station_loads;
    Duration cycle_time = 0;
};
LineEvaluation evaluate_line(const Instance& inst, const LineSolution& line);

enum class ViolationKind {
    Structure,        // out-of-range ids, malformed shapes
    TaskCoverage,     // a line does not execute every task exactly once
    WorkerUniqueness, // worker missing or appearing in more than one station/line
    Precedence,       // task order violates the partial order
    Incompatibility,  // task given to a worker that cannot execute it
    LineCount,        // more than k_max lines
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

/// Checks all structural feasibility rules of a candidate solution and
/// returns the violations as data (never throws on bad candidates).
ValidationReport validate_solution(const Instance& inst, const ParallelSolution& sol);

/// Sentinel returned by lower_bound when the subset cannot cover some task.
inline constexpr Duration kInfeasibleBound = std::numeric_limits<Duration>::max();

/// Cycle-time lower bound for a serial line staffed by `subset`:
/// max(ceil(sum_i min_w p_wi / |subset|), max_i min_w p_wi), minima taken
/// over the subset. Returns kInfeasibleBound if some task has no capable
/// worker in the subset. Throws on an empty subset.
Duration lower_bound(const Instance& inst, const std::vector<int>& subset);

/// Per-line and combined throughput (products/hour) of a solution whose
/// line cycle times are already computed.
ThroughputReport throughput_report(const ParallelSolution& sol);

/// Assembles a ParallelSolution from solved lines: recomputes every line's
/// cycle time and the combined figures. Throws if any line is invalid.
ParallelSolution make_parallel_solution(const Instance& inst,
                                        std::vector<LineSolution> lines,
                                        int k_max);

}  // namespace palwabp
