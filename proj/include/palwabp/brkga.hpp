#pragma once

#include <cstdint>
#include <vector>

#include "palwabp/instance.hpp"
#include "palwabp/preprocess.hpp"
#include "palwabp/solution.hpp"

namespace palwabp {

/// Random-key chromosome, every gene in [0, 1). Layout for an instance with
/// |W| workers and |N| tasks at k_max lines:
///   [0, |W|)                 line keys: worker w joins line floor(g * k_max)
///   [|W|, 2|W|)              worker priorities (higher = earlier station)
///   [2|W|, 2|W| + |N|*k_max) task priorities, line-major (slice k for line k)
using Chromosome = std::vector<double>;

std::size_t chromosome_length(const Instance& inst, int k_max);

struct BrkgaParams {
    int k_max = 2;
    std::uint64_t seed = 0;
    int population = 100;
    int elite = 20;
    int mutants = 10;
    double elite_inherit_prob = 0.70;
    int max_generations = 200;
    double time_limit_seconds = 0.0;  // 0 disables the wall-clock guard
};

/// Decode output. Lines whose team cannot reach a feasible serial line
/// contribute zero fitness and are reported separately; `lines[i]` pairs
/// with `teams[i]`.
struct DecodeResult {
    std::vector<LineSolution> lines;
    std::vector<std::vector<int>> line_teams;        // teams of feasible lines
    std::vector<std::vector<int>> infeasible_teams;  // flagged, zero fitness
    double fitness = 0.0;                            // sum of 1/cycle_time (per second)
};

/// Pure, deterministic decoder: splits workers over lines by the line keys,
/// then builds each line with the greedy constructive under external
/// priorities taken from the chromosome.
DecodeResult decode(const Chromosome& c, const Instance& inst, int k_max);

/// One generation step. `population` must be sorted by fitness descending.
/// Copies the elite block, appends fresh mutants, and fills the rest with
/// biased crossover (gene from the elite parent with elite_inherit_prob).
/// Each offspring slot draws from its own RNG substream of `rng`.
std::vector<Chromosome> evolve(const std::vector<Chromosome>& population,
                               const BrkgaParams& params, const class Rng& rng);

struct BrkgaLogRow {
    int generation = 0;
    double best_fitness = 0.0;
    double best_combined_ct = 0.0;  // 1/best_fitness, 0 when nothing feasible
    double mean_fitness = 0.0;
};

struct BrkgaResult {
    ParallelSolution best;
    std::vector<BrkgaLogRow> log;
    int generations = 0;
    double best_fitness = 0.0;
};

/// Full run: evolves until max_generations or the time limit, then repairs
/// the best individual (workers of zero-fitness lines merge into the best
/// feasible line, which is re-solved) so the returned solution covers every
/// worker. Throws "no solution exists" when even the full team has no
/// feasible serial line.
BrkgaResult brkga_solve(const Instance& inst, const BrkgaParams& params);

}  // namespace palwabp
