#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_set>
#include <vector>

#include "palwabp/instance.hpp"

namespace palwabp {

/// Task subsets and worker teams are manipulated as 64-bit masks; the
/// preprocessing stage therefore supports up to 64 tasks and 64 workers.
using TaskMask = std::uint64_t;
using WorkerMask = std::uint64_t;

inline WorkerMask workers_to_mask(const std::vector<int>& workers) {
    WorkerMask m = 0;
    for (int w : workers) m |= WorkerMask{1} << w;
    return m;
}

inline std::vector<int> mask_to_workers(WorkerMask m) {
    std::vector<int> ws;
    for (int w = 0; m != 0; ++w, m >>= 1)
        if (m & 1) ws.push_back(w);
    return ws;
}

/// One executable task set of a worker. starts_line marks the set generated
/// with no prior infeasible tasks assumed executed: the worker may occupy
/// the first stations of a line with it.
struct TaskSet {
    TaskMask tasks = 0;
    bool starts_line = false;
};

/// All task sets a worker can execute, in generation order (the starts_line
/// set, if any, comes first).
std::vector<TaskSet> task_sets(const Instance& inst, int worker);

/// One catalog entry: a worker team together with the chosen task set index
/// (into task_sets) for each member. The union of the chosen sets covers all
/// tasks.
struct WorkerSetEntry {
    std::vector<std::pair<int, int>> choices;  // (worker, set index), workers ascending
    WorkerMask workers = 0;
};

struct WorkerSetCatalog {
    std::vector<std::vector<TaskSet>> sets_per_worker;
    std::vector<WorkerSetEntry> entries;
    bool overflowed = false;
    std::size_t limit = 0;

    /// True if some entry's team equals `team`. Because every covering
    /// combination is enumerated (supersets included), this tests whether
    /// the team can execute all tasks.
    bool contains_team(WorkerMask team) const { return team_index.count(team) != 0; }

    std::unordered_set<WorkerMask> team_index;
};

inline constexpr std::size_t kDefaultCatalogLimit = 1000000;

/// Enumerates every combination of per-worker task-set choices whose union
/// covers all tasks (each worker contributes at most one of its sets).
/// Entries are capped at `limit`; on overflow the catalog carries what was
/// found plus overflowed = true.
WorkerSetCatalog worker_sets(const Instance& inst, std::size_t limit = kDefaultCatalogLimit);

/// One line per entry: "workers: W1,W2 | sets: {1,3,5};{2,4}".
void dump_catalog(std::ostream& out, const Instance& inst, const WorkerSetCatalog& catalog);

}  // namespace palwabp
