#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "palwabp/constructive.hpp"
#include "palwabp/instance.hpp"
#include "palwabp/preprocess.hpp"
#include "palwabp/rng.hpp"
#include "palwabp/solution.hpp"

namespace palwabp {

enum class MoveKind { Transfer, Exchange };

/// A neighborhood move between two lines of the current partition.
/// Transfer: `workers` leave line_a for line_b. Exchange: `lack` moves from
/// line_b into line_a while `excess` moves from line_a into line_b.
struct Move {
    MoveKind kind = MoveKind::Transfer;
    WorkerMask workers = 0;
    WorkerMask lack = 0;
    WorkerMask excess = 0;
    int line_a = -1;
    int line_b = -1;
};

/// Seeds a partition: one random catalog entry is pinned, further pairwise-
/// disjoint entries are collected first-fit with backtracking until k_max
/// teams are seeded (fewer is accepted when the catalog cannot supply more),
/// and leftover workers are spread uniformly at random over the seeded
/// teams. Throws "no solution exists" on an empty catalog. Tests may pin the
/// first entry explicitly.
std::vector<WorkerMask> initial_solution(const Instance& inst,
                                         const WorkerSetCatalog& catalog, int k_max,
                                         Rng& rng,
                                         std::optional<std::size_t> pinned_entry = {});

/// All catalog-feasible transfers and exchanges from the current partition.
/// For each line and each catalog entry sharing workers with it, the entry
/// defines excess (workers the line does not need) and lack (workers it
/// would need): an empty lack yields one transfer per (excess worker, other
/// line); otherwise an exchange with any line containing lack whose
/// post-move team is still in the catalog.
std::vector<Move> neighborhood(const std::vector<WorkerMask>& teams,
                               const WorkerSetCatalog& catalog);

void apply_move(std::vector<WorkerMask>& teams, const Move& m);

/// Order-insensitive move identity used for the tabu list; a move and its
/// inverse hash identically, so undoing a recent move is tabu.
std::uint64_t move_fingerprint(const std::vector<WorkerMask>& teams, const Move& m);

struct TabuParams {
    int k_max = 2;
    std::uint64_t seed = 0;
    int tenure = 10;
    int max_idle_iterations = 1000;
    int max_restarts = 10;
    PriorityRules rules;
    std::size_t catalog_limit = kDefaultCatalogLimit;
    double time_limit_seconds = 0.0;  // 0 disables the wall-clock guard
};

struct SearchLogRow {
    long long iteration = 0;
    std::string event;
    double combined_ct = 0.0;
    double incumbent_ct = 0.0;
};

struct TabuResult {
    ParallelSolution best;
    std::vector<SearchLogRow> log;
    int restarts_used = 0;
    long long iterations = 0;
    Duration serial_cycle_time = 0;  // full-team fallback, always evaluated
};

/// Tabu search over worker partitions. The serial full-team solution is
/// evaluated first and the incumbent never falls below it. Deterministic for
/// a fixed seed. Throws "no solution exists" only when even the serial
/// full-team problem has no feasible line.
TabuResult tabu_search(const Instance& inst, const TabuParams& params);

}  // namespace palwabp
