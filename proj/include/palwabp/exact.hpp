#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "palwabp/constructive.hpp"
#include "palwabp/instance.hpp"
#include "palwabp/preprocess.hpp"
#include "palwabp/solution.hpp"

namespace palwabp {

/// Brute-force baseline over the worker-set catalog: tries every choice of up
/// to k_max pairwise-disjoint catalog entries, appends each leftover worker
/// to the team where it improves the combined cycle time the most (ties to
/// the lowest line index), solves every team with the greedy constructive,
/// and keeps the best combination. The serial full-team line is always among
/// the candidates. Throws "enumeration infeasible" when the catalog
/// overflowed its entry cap, and "no solution exists" when no candidate team
/// assignment yields feasible lines.
ParallelSolution enumerate_solve(const Instance& inst, const WorkerSetCatalog& catalog,
                                 int k_max, const PriorityRules& rules = {});

/// Ground-truth optimum for tiny instances: enumerates every partition of
/// the workers into at most k_max teams and solves each team exactly
/// (every station order, every precedence-respecting task split). Returns
/// nullopt when no partition admits feasible lines. Guarded to at most
/// 10 tasks and 5 workers; larger instances throw.
std::optional<ParallelSolution> exhaustive_oracle(const Instance& inst, int k_max);

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct MilpRow {
    std::string name;  // carries the defining equation tag, e.g. "eq15_2_1_1"
    std::vector<std::pair<std::string, double>> terms;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
};

/// Linearized model maximizing the summed line production rates. Stations
/// per line are sized to the worker count (safe upper bound). All rates are
/// per second and bounded by big_m = 1 since task times are at least 1 s.
struct MilpModel {
    std::vector<std::string> binaries;    // x_s_w_i_k, y_s_w_k, z_k
    std::vector<std::string> continuous;  // C_k, F_k, f_s_w_k, v_s_w_i_k
    std::vector<MilpRow> rows;
    std::vector<std::pair<std::string, double>> objective;  // maximized
    double big_m = 1.0;
    int station_count = 0;
    int k_max = 0;

    bool has_variable(const std::string& name) const;
};

MilpModel build_milp(const Instance& inst, int k_max);

/// Renders the model in LP file format, each constraint block annotated with
/// the equation it encodes.
std::string export_milp(const Instance& inst, int k_max);

/// Encodes a solution as the variable assignment the model would take:
/// station rates are 1/load for loaded stations and the line rate for idle
/// ones, so every row of build_milp is satisfied.
std::map<std::string, double> solution_to_variable_map(const Instance& inst,
                                                       const ParallelSolution& sol);

struct MilpVerification {
    bool feasible = false;   // every constraint row holds within tolerance
    double objective = 0.0;  // sum of the F_k values in the assignment
    std::vector<std::string> violated_rows;
    bool reconstruction_ok = false;  // x/y decode to a valid solution matching 1/objective
    std::optional<ParallelSolution> reconstructed;
};

/// Re-checks an externally produced assignment (missing variables are zero)
/// against every model row at tolerance 1e-6, then rebuilds the solution
/// from the x/y variables and cross-checks its combined cycle time against
/// the claimed objective. Unknown variable names throw.
MilpVerification verify_milp_solution(const Instance& inst, int k_max,
                                      const std::map<std::string, double>& assignment);

}  // namespace palwabp
