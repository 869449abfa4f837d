#pragma once

#include <iosfwd>
#include <string>

#include "palwabp/instance.hpp"
#include "palwabp/solution.hpp"

namespace palwabp {

/// Writes the solution text format:
///
///   line <k>
///   station <s> worker <name>: <t1> <t2> ...   # load <sum>
///   ...
///   cycle <ct>
///   ...
///   combined <value>
///
/// Tasks are 1-based, `combined` carries three decimals, and the station
/// loads appear as trailing comments. Output is byte-stable.
void write_solution(std::ostream& out, const Instance& inst, const ParallelSolution& sol);
std::string solution_to_string(const Instance& inst, const ParallelSolution& sol);
void save_solution(const std::string& path, const Instance& inst,
                   const ParallelSolution& sol);

/// A parsed solution file: the structure plus the cycle and combined values
/// the file claims, kept verbatim so a verifier can compare them against
/// recomputed figures.
struct ParsedSolution {
    ParallelSolution solution;  // cycle_time fields hold the claimed values
    double claimed_combined = 0.0;
};

ParsedSolution parse_solution(std::istream& in, const Instance& inst);
ParsedSolution load_solution(const std::string& path, const Instance& inst);

}  // namespace palwabp
