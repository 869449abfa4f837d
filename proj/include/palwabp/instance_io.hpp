#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "palwabp/instance.hpp"

namespace palwabp {

/// Parses the instance text format:
///
///   tasks <n>
///   workers <m>
///   precedence
///   <i> <j>        (1-based, i before j)
///   end
///   times
///   <name>: <v1> ... <vn>   ('-' marks an infeasible task)
///
/// '#' starts a comment, blank lines are ignored, sections appear in this
/// order. Errors carry the offending line number.
Instance parse_instance(std::istream& in);
Instance parse_instance_string(const std::string& text);
Instance load_instance(const std::string& path);

/// Canonical writer: tasks ascending, transitively reduced precedence sorted
/// ascending, workers in declared order. Output is byte-stable, so
/// write(parse(write(x))) == write(x).
void write_instance(std::ostream& out, const Instance& inst);
std::string instance_to_string(const Instance& inst);
void save_instance(const std::string& path, const Instance& inst);

/// A single-product assembly-line base: task times and precedence, no
/// workers. Stored as a one-worker instance file (worker name is free).
struct SalbpBase {
    std::vector<int> times;
    std::vector<std::pair<int, int>> precedence;
};
SalbpBase parse_salbp_base(std::istream& in);
SalbpBase load_salbp_base(const std::string& path);

struct GeneratorConfig {
    int worker_count = 0;
    double variability_factor = 2.0;  // feasible times drawn from [t, factor*t]
    double infeasible_rate = 0.10;    // probability a cell becomes '-'
    std::uint64_t seed = 0;
};

/// Derives a heterogeneous-worker instance from a base. Every (worker, task)
/// cell is drawn from its own RNG substream keyed by (worker, task), so the
/// output is byte-identical for a given seed regardless of platform or
/// iteration order. A task left with no capable worker is repaired by
/// re-drawing a feasible time for one uniformly chosen worker (substream
/// keyed by the task).
Instance generate_instance(const SalbpBase& base, const GeneratorConfig& cfg);

}  // namespace palwabp
