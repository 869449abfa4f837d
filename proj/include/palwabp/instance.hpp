#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace palwabp {

using Duration = std::int64_t;

/// Matrix entry marking a task a worker cannot execute.
inline constexpr int kInfeasible = -1;

/// Immutable problem data: a set of tasks under a precedence partial order
/// and a worker/task time matrix with worker-dependent execution times.
///
/// Tasks and workers are 0-based indices internally; the text format uses
/// 1-based task ids and worker names. Precedence is stored transitively
/// reduced; the full partial order is available through precedes().
class Instance {
public:
    /// Validates and builds an instance. Throws std::runtime_error on a
    /// precedence cycle, an uncoverable task (no capable worker), non-positive
    /// times, or out-of-range edges. Input edges may contain transitive
    /// duplicates; they are reduced here.
    static Instance create(int task_count,
                           std::vector<std::pair<int, int>> precedence,
                           std::vector<std::string> workers,
                           std::vector<std::vector<int>> times);

    int task_count() const { return task_count_; }
    int worker_count() const { return static_cast<int>(workers_.size()); }
    const std::vector<std::string>& workers() const { return workers_; }
    const std::string& worker_name(int w) const { return workers_[w]; }
    /// Index for a worker name, -1 if unknown.
    int worker_index(const std::string& name) const;

    int time(int w, int i) const { return times_[w][i]; }
    bool can_do(int w, int i) const { return times_[w][i] != kInfeasible; }
    /// Tasks worker w cannot execute.
    const std::vector<int>& incompatible(int w) const { return incompatible_[w]; }

    /// Transitively reduced edges, sorted ascending.
    const std::vector<std::pair<int, int>>& precedence() const { return reduced_; }
    /// Strict partial order: true iff i must be executed before j.
    bool precedes(int i, int j) const { return closure_[static_cast<std::size_t>(i) * task_count_ + j] != 0; }
    const std::vector<int>& immediate_successors(int i) const { return succ_[i]; }
    const std::vector<int>& immediate_predecessors(int i) const { return pred_[i]; }
    /// Number of (transitive) successors of i.
    int successor_count(int i) const { return succ_count_[i]; }
    /// Canonical topological order (Kahn, lowest index first).
    const std::vector<int>& topological_order() const { return topo_; }
    /// Position of a task in the canonical topological order.
    int topo_rank(int i) const { return topo_rank_[i]; }

    /// Smallest feasible time for task i over all workers.
    int min_time(int i) const { return min_time_[i]; }
    /// Smallest feasible entry of the whole matrix; the finest step by which
    /// a trial cycle time is worth increasing.
    Duration min_time_overall() const { return min_time_overall_; }
    /// Sum over tasks of the largest feasible time; an upper bound on any
    /// station load and therefore on any useful trial cycle time.
    Duration max_time_sum() const { return max_time_sum_; }

private:
    Instance() = default;

    int task_count_ = 0;
    std::vector<std::string> workers_;
    std::vector<std::vector<int>> times_;
    std::vector<std::vector<int>> incompatible_;
    std::vector<std::pair<int, int>> reduced_;
    std::vector<std::uint8_t> closure_;  // task_count x task_count
    std::vector<std::vector<int>> succ_;
    std::vector<std::vector<int>> pred_;
    std::vector<int> succ_count_;
    std::vector<int> topo_;
    std::vector<int> topo_rank_;
    std::vector<int> min_time_;
    Duration min_time_overall_ = 0;
    Duration max_time_sum_ = 0;
};

}  // namespace palwabp
