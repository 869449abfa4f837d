#include "palwabp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "palwabp/objective.hpp"

namespace palwabp {

namespace {

std::vector<int> full_team(const Instance& inst) {
    std::vector<int> team(inst.worker_count());
    for (int w = 0; w < inst.worker_count(); ++w) team[w] = w;
    return team;
}

}  // namespace

ParallelSolution enumerate_solve(const Instance& inst, const WorkerSetCatalog& catalog,
                                 int k_max, const PriorityRules& rules) {
    if (k_max < 1) throw std::runtime_error("k_max must be at least 1");
    if (catalog.overflowed)
        throw std::runtime_error("enumeration infeasible: worker-set catalog overflowed");

    std::unordered_map<WorkerMask, std::optional<LineSolution>> cache;
    auto solve = [&](WorkerMask mask) -> const std::optional<LineSolution>& {
        auto it = cache.find(mask);
        if (it != cache.end()) return it->second;
        auto line = solve_serial(inst, mask_to_workers(mask), rules);
        return cache.emplace(mask, std::move(line)).first->second;
    };

    const WorkerMask full_mask = workers_to_mask(full_team(inst));
    std::vector<LineSolution> best_lines;
    double best_rate = -1.0;

    // Evaluates one choice of disjoint catalog entries: solve the seeded
    // teams, then hand each leftover worker to the team whose combined rate
    // gains the most from it (first team on ties).
    auto consider = [&](const std::vector<WorkerMask>& seed_teams) {
        std::vector<WorkerMask> teams = seed_teams;
        std::vector<double> cts;
        WorkerMask used = 0;
        for (WorkerMask t : teams) {
            const auto& line = solve(t);
            if (!line) return;
            cts.push_back(static_cast<double>(line->cycle_time));
            used |= t;
        }
        for (int w = 0; w < inst.worker_count(); ++w) {
            WorkerMask bit = WorkerMask{1} << w;
            if (used & bit) continue;
            int best_t = -1;
            double best_gain_rate = 0.0;
            double best_ct = 0.0;
            for (std::size_t t = 0; t < teams.size(); ++t) {
                const auto& line = solve(teams[t] | bit);
                if (!line) continue;
                double rate = 0.0;
                for (std::size_t j = 0; j < teams.size(); ++j)
                    rate += 1.0 / (j == t ? static_cast<double>(line->cycle_time) : cts[j]);
                if (best_t == -1 || rate > best_gain_rate) {
                    best_t = static_cast<int>(t);
                    best_gain_rate = rate;
                    best_ct = static_cast<double>(line->cycle_time);
                }
            }
            if (best_t == -1) return;
            teams[best_t] |= bit;
            cts[best_t] = best_ct;
        }
        double rate = 0.0;
        for (double ct : cts) rate += 1.0 / ct;
        if (rate > best_rate) {
            best_rate = rate;
            best_lines.clear();
            for (WorkerMask t : teams) best_lines.push_back(*solve(t));
        }
    };

    // The serial full-team line is the first candidate, so a split must beat
    // it strictly to be returned.
    consider({full_mask});

    std::vector<WorkerMask> chosen;
    auto walk = [&](auto&& self, std::size_t start, WorkerMask used) -> void {
        for (std::size_t idx = start; idx < catalog.entries.size(); ++idx) {
            WorkerMask entry = catalog.entries[idx].workers;
            if (entry & used) continue;
            chosen.push_back(entry);
            consider(chosen);
            if (static_cast<int>(chosen.size()) < k_max)
                self(self, idx + 1, used | entry);
            chosen.pop_back();
        }
    };
    walk(walk, 0, 0);

    if (best_lines.empty()) {
        auto line = solve_serial_portfolio(inst, full_team(inst), rules);
        if (!line)
            throw std::runtime_error(
                "no solution exists: full team has no feasible serial line");
        best_lines.push_back(std::move(*line));
    }
    return make_parallel_solution(inst, std::move(best_lines), k_max);
}

namespace {

// Shared tables for the exact per-team solver: predecessor closures, the
// ideal (predecessor-closed) task masks, and per-worker loads of every mask.
struct OracleTables {
    int n = 0;
    TaskMask full = 0;
    std::vector<char> is_ideal;
    std::vector<std::vector<Duration>> load;  // [worker][mask], sentinel if incompatible

    explicit OracleTables(const Instance& inst) : n(inst.task_count()) {
        full = (TaskMask{1} << n) - 1;
        std::vector<TaskMask> pred(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (inst.precedes(j, i)) pred[i] |= TaskMask{1} << j;

        const std::size_t count = std::size_t{1} << n;
        is_ideal.assign(count, 1);
        for (TaskMask m = 0; m < count; ++m)
            for (int i = 0; i < n; ++i)
                if ((m >> i) & 1)
                    if ((pred[i] & m) != pred[i]) {
                        is_ideal[m] = 0;
                        break;
                    }

        load.assign(inst.worker_count(), std::vector<Duration>(count, 0));
        for (int w = 0; w < inst.worker_count(); ++w) {
            for (TaskMask m = 1; m < count; ++m) {
                int i = std::countr_zero(m);
                Duration prev = load[w][m & (m - 1)];
                if (prev == kInfeasibleBound || !inst.can_do(w, i))
                    load[w][m] = kInfeasibleBound;
                else
                    load[w][m] = prev + inst.time(w, i);
            }
        }
    }
};

// Exact serial optimum for one team: minimizes the max station load over all
// worker orders and all precedence-closed prefixes per station.
std::optional<LineSolution> exact_team_line(const Instance& inst,
                                            const OracleTables& tab,
                                            const std::vector<int>& team) {
    const std::size_t count = std::size_t{1} << tab.n;
    const int stations = static_cast<int>(team.size());

    std::vector<int> perm = team;
    std::sort(perm.begin(), perm.end());

    Duration best_ct = kInfeasibleBound;
    std::vector<int> best_perm;
    std::vector<std::vector<TaskMask>> best_pick;

    std::vector<std::vector<Duration>> f(stations + 1,
                                         std::vector<Duration>(count, kInfeasibleBound));
    std::vector<std::vector<TaskMask>> pick(stations + 1, std::vector<TaskMask>(count, 0));
    do {
        for (auto& layer : f) std::fill(layer.begin(), layer.end(), kInfeasibleBound);
        f[0][0] = 0;
        for (int s = 1; s <= stations; ++s) {
            const auto& wload = tab.load[perm[s - 1]];
            for (TaskMask m = 0; m < count; ++m) {
                if (!tab.is_ideal[m]) continue;
                Duration best = kInfeasibleBound;
                TaskMask best_d = 0;
                for (TaskMask d = m;; d = (d - 1) & m) {
                    TaskMask rest = m ^ d;
                    if (tab.is_ideal[rest] && f[s - 1][rest] != kInfeasibleBound &&
                        wload[d] != kInfeasibleBound) {
                        Duration ct = std::max(f[s - 1][rest], wload[d]);
                        if (ct < best) {
                            best = ct;
                            best_d = d;
                        }
                    }
                    if (d == 0) break;
                }
                f[s][m] = best;
                pick[s][m] = best_d;
            }
        }
        if (f[stations][tab.full] < best_ct) {
            best_ct = f[stations][tab.full];
            best_perm = perm;
            best_pick = pick;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (best_ct == kInfeasibleBound) return std::nullopt;

    LineSolution line;
    line.cycle_time = best_ct;
    line.stations.resize(stations);
    TaskMask remaining = tab.full;
    for (int s = stations; s >= 1; --s) {
        TaskMask d = best_pick[s][remaining];
        remaining ^= d;
        Station& st = line.stations[s - 1];
        st.worker = best_perm[s - 1];
        for (int i = 0; i < tab.n; ++i)
            if ((d >> i) & 1) st.tasks.push_back(i);
        std::sort(st.tasks.begin(), st.tasks.end(), [&](int a, int b) {
            return inst.topo_rank(a) < inst.topo_rank(b);
        });
    }
    return line;
}

}  // namespace

std::optional<ParallelSolution> exhaustive_oracle(const Instance& inst, int k_max) {
    if (k_max < 1) throw std::runtime_error("k_max must be at least 1");
    if (inst.task_count() > 10 || inst.worker_count() > 5)
        throw std::runtime_error(
            "oracle size guard: instance exceeds 10 tasks / 5 workers");

    OracleTables tab(inst);
    std::unordered_map<WorkerMask, std::optional<LineSolution>> cache;
    auto solve = [&](const std::vector<int>& team) -> const std::optional<LineSolution>& {
        WorkerMask mask = workers_to_mask(team);
        auto it = cache.find(mask);
        if (it != cache.end()) return it->second;
        return cache.emplace(mask, exact_team_line(inst, tab, team)).first->second;
    };

    double best_rate = -1.0;
    std::vector<LineSolution> best_lines;

    std::vector<std::vector<int>> blocks;
    auto assign = [&](auto&& self, int w) -> void {
        if (w == inst.worker_count()) {
            double rate = 0.0;
            std::vector<const LineSolution*> lines;
            for (const auto& block : blocks) {
                const auto& line = solve(block);
                if (!line) return;
                rate += 1.0 / static_cast<double>(line->cycle_time);
                lines.push_back(&*line);
            }
            if (rate > best_rate) {
                best_rate = rate;
                best_lines.clear();
                for (const LineSolution* l : lines) best_lines.push_back(*l);
            }
            return;
        }
        // Recursion grows `blocks`, so index rather than iterate.
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            blocks[b].push_back(w);
            self(self, w + 1);
            blocks[b].pop_back();
        }
        if (static_cast<int>(blocks.size()) < k_max) {
            blocks.push_back({w});
            self(self, w + 1);
            blocks.pop_back();
        }
    };
    assign(assign, 0);

    if (best_lines.empty()) return std::nullopt;
    return make_parallel_solution(inst, std::move(best_lines), k_max);
}

namespace {

std::string idx4(const char* base, int a, int b, int c, int d) {
    std::ostringstream os;
    os << base << '_' << a << '_' << b << '_' << c << '_' << d;
    return os.str();
}

std::string idx3(const char* base, int a, int b, int c) {
    std::ostringstream os;
    os << base << '_' << a << '_' << b << '_' << c;
    return os.str();
}

std::string idx2(const char* base, int a, int b) {
    std::ostringstream os;
    os << base << '_' << a << '_' << b;
    return os.str();
}

std::string idx1(const char* base, int a) {
    std::ostringstream os;
    os << base << '_' << a;
    return os.str();
}

// All variable name builders take 1-based indices, matching the row names.
std::string x_name(int s, int w, int i, int k) { return idx4("x", s, w, i, k); }
std::string y_name(int s, int w, int k) { return idx3("y", s, w, k); }
std::string z_name(int k) { return idx1("z", k); }
std::string c_name(int k) { return idx1("C", k); }
std::string f_cap_name(int k) { return idx1("F", k); }
std::string f_name(int s, int w, int k) { return idx3("f", s, w, k); }
std::string v_name(int s, int w, int i, int k) { return idx4("v", s, w, i, k); }

}  // namespace

bool MilpModel::has_variable(const std::string& name) const {
    return std::find(binaries.begin(), binaries.end(), name) != binaries.end() ||
           std::find(continuous.begin(), continuous.end(), name) != continuous.end();
}

MilpModel build_milp(const Instance& inst, int k_max) {
    if (k_max < 1) throw std::runtime_error("k_max must be at least 1");
    const int n = inst.task_count();
    const int m = inst.worker_count();
    const int S = m;  // stations per line: worker count is a safe upper bound
    const double M = 1.0;

    MilpModel model;
    model.big_m = M;
    model.station_count = S;
    model.k_max = k_max;

    for (int k = 1; k <= k_max; ++k) model.binaries.push_back(z_name(k));
    for (int k = 1; k <= k_max; ++k)
        for (int s = 1; s <= S; ++s)
            for (int w = 1; w <= m; ++w) model.binaries.push_back(y_name(s, w, k));
    for (int k = 1; k <= k_max; ++k)
        for (int s = 1; s <= S; ++s)
            for (int w = 1; w <= m; ++w)
                for (int i = 1; i <= n; ++i) model.binaries.push_back(x_name(s, w, i, k));

    for (int k = 1; k <= k_max; ++k) model.continuous.push_back(c_name(k));
    for (int k = 1; k <= k_max; ++k) model.continuous.push_back(f_cap_name(k));
    for (int k = 1; k <= k_max; ++k)
        for (int s = 1; s <= S; ++s)
            for (int w = 1; w <= m; ++w) model.continuous.push_back(f_name(s, w, k));
    for (int k = 1; k <= k_max; ++k)
        for (int s = 1; s <= S; ++s)
            for (int w = 1; w <= m; ++w)
                for (int i = 1; i <= n; ++i) model.continuous.push_back(v_name(s, w, i, k));

    for (int k = 1; k <= k_max; ++k)
        model.objective.emplace_back(f_cap_name(k), 1.0);

    auto add = [&](MilpRow row) { model.rows.push_back(std::move(row)); };

    // eq2: every active line executes each task once.
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= k_max; ++k) {
            MilpRow row{idx2("eq2", i, k), {}, RowSense::Equal, 0.0};
            for (int s = 1; s <= S; ++s)
                for (int w = 1; w <= m; ++w) row.terms.emplace_back(x_name(s, w, i, k), 1.0);
            row.terms.emplace_back(z_name(k), -1.0);
            add(std::move(row));
        }

    // eq3: each worker takes exactly one station of one line.
    for (int w = 1; w <= m; ++w) {
        MilpRow row{idx1("eq3", w), {}, RowSense::Equal, 1.0};
        for (int k = 1; k <= k_max; ++k)
            for (int s = 1; s <= S; ++s) row.terms.emplace_back(y_name(s, w, k), 1.0);
        add(std::move(row));
    }

    // eq4: at most one worker per station, none on inactive lines.
    for (int s = 1; s <= S; ++s)
        for (int k = 1; k <= k_max; ++k) {
            MilpRow row{idx2("eq4", s, k), {}, RowSense::LessEqual, 0.0};
            for (int w = 1; w <= m; ++w) row.terms.emplace_back(y_name(s, w, k), 1.0);
            row.terms.emplace_back(z_name(k), -1.0);
            add(std::move(row));
        }

    // eq5: suffix-sum precedence (a predecessor never sits after its successor).
    for (const auto& [pi, pj] : inst.precedence())
        for (int t = 1; t <= S; ++t)
            for (int k = 1; k <= k_max; ++k) {
                MilpRow row{idx4("eq5", pi + 1, pj + 1, t, k), {}, RowSense::LessEqual, 0.0};
                for (int w = 1; w <= m; ++w)
                    for (int s = t; s <= S; ++s) {
                        row.terms.emplace_back(x_name(s, w, pi + 1, k), 1.0);
                        row.terms.emplace_back(x_name(s, w, pj + 1, k), -1.0);
                    }
                add(std::move(row));
            }

    // eq6: a worker only executes tasks at the station they occupy.
    for (int w = 1; w <= m; ++w)
        for (int s = 1; s <= S; ++s)
            for (int k = 1; k <= k_max; ++k) {
                MilpRow row{idx3("eq6", w, s, k), {}, RowSense::LessEqual, 0.0};
                for (int i = 1; i <= n; ++i) row.terms.emplace_back(x_name(s, w, i, k), 1.0);
                row.terms.emplace_back(y_name(s, w, k), -static_cast<double>(n));
                add(std::move(row));
            }

    // eq7: station loads stay within the line cycle time.
    for (int s = 1; s <= S; ++s)
        for (int w = 1; w <= m; ++w)
            for (int k = 1; k <= k_max; ++k) {
                MilpRow row{idx3("eq7", s, w, k), {}, RowSense::LessEqual, 0.0};
                for (int i = 1; i <= n; ++i)
                    if (inst.can_do(w - 1, i - 1))
                        row.terms.emplace_back(
                            x_name(s, w, i, k),
                            static_cast<double>(inst.time(w - 1, i - 1)));
                row.terms.emplace_back(c_name(k), -1.0);
                add(std::move(row));
            }

    // eq8: incompatible worker-task pairs are fixed at zero.
    for (int s = 1; s <= S; ++s)
        for (int w = 1; w <= m; ++w)
            for (int i : inst.incompatible(w - 1))
                for (int k = 1; k <= k_max; ++k)
                    add({idx4("eq8", s, w, i + 1, k),
                         {{x_name(s, w, i + 1, k), 1.0}},
                         RowSense::Equal,
                         0.0});

    // eq13: inactive lines produce nothing.
    for (int k = 1; k <= k_max; ++k)
        add({idx1("eq13", k),
             {{f_cap_name(k), 1.0}, {z_name(k), -M}},
             RowSense::LessEqual,
             0.0});

    // eq14: the line rate never exceeds an occupied station's rate.
    for (int s = 1; s <= S; ++s)
        for (int k = 1; k <= k_max; ++k) {
            MilpRow row{idx2("eq14", s, k), {}, RowSense::GreaterEqual, -M};
            for (int w = 1; w <= m; ++w) row.terms.emplace_back(f_name(s, w, k), 1.0);
            row.terms.emplace_back(f_cap_name(k), -1.0);
            for (int w = 1; w <= m; ++w) row.terms.emplace_back(y_name(s, w, k), -M);
            add(std::move(row));
        }

    // eq15: the rate-weighted load of an occupied station stays within one
    // cycle. Kept as <= so a station whose worker has no tasks remains
    // feasible with all v at zero.
    for (int w = 1; w <= m; ++w)
        for (int s = 1; s <= S; ++s)
            for (int k = 1; k <= k_max; ++k) {
                MilpRow row{idx3("eq15", w, s, k), {}, RowSense::LessEqual, 0.0};
                for (int i = 1; i <= n; ++i)
                    if (inst.can_do(w - 1, i - 1))
                        row.terms.emplace_back(
                            v_name(s, w, i, k),
                            static_cast<double>(inst.time(w - 1, i - 1)));
                row.terms.emplace_back(y_name(s, w, k), -1.0);
                add(std::move(row));
            }

    // eq16: unoccupied stations have zero rate.
    for (int w = 1; w <= m; ++w)
        for (int s = 1; s <= S; ++s)
            for (int k = 1; k <= k_max; ++k)
                add({idx3("eq16", w, s, k),
                     {{f_name(s, w, k), 1.0}, {y_name(s, w, k), -M}},
                     RowSense::LessEqual,
                     0.0});

    // eq17 and eq18: v equals the station rate exactly on assigned tasks and
    // vanishes elsewhere.
    for (int s = 1; s <= S; ++s)
        for (int w = 1; w <= m; ++w)
            for (int i = 1; i <= n; ++i)
                for (int k = 1; k <= k_max; ++k)
                    add({idx4("eq17", s, w, i, k),
                         {{v_name(s, w, i, k), 1.0},
                          {f_name(s, w, k), -1.0},
                          {x_name(s, w, i, k), -M}},
                         RowSense::GreaterEqual,
                         -M});
    for (int s = 1; s <= S; ++s)
        for (int w = 1; w <= m; ++w)
            for (int i = 1; i <= n; ++i)
                for (int k = 1; k <= k_max; ++k)
                    add({idx4("eq18", s, w, i, k),
                         {{v_name(s, w, i, k), 1.0}, {x_name(s, w, i, k), -M}},
                         RowSense::LessEqual,
                         0.0});

    return model;
}

namespace {

std::string format_number(double v) {
    double r = std::round(v);
    if (std::abs(v - r) < 1e-12 && std::abs(r) < 1e15) {
        std::ostringstream os;
        os << static_cast<long long>(r);
        return os.str();
    }
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void append_terms(std::ostringstream& out,
                  const std::vector<std::pair<std::string, double>>& terms) {
    int on_line = 0;
    bool first = true;
    for (const auto& [name, coef] : terms) {
        if (on_line == 8) {
            out << "\n   ";
            on_line = 0;
        }
        if (first) {
            if (coef < 0) out << "- ";
            first = false;
        } else {
            out << (coef < 0 ? " - " : " + ");
        }
        double mag = std::abs(coef);
        if (mag != 1.0) out << format_number(mag) << ' ';
        out << name;
        ++on_line;
    }
}

const char* block_comment(const std::string& row_name) {
    auto tag = row_name.substr(0, row_name.find('_'));
    if (tag == "eq2") return "eq2: every active line executes each task exactly once";
    if (tag == "eq3") return "eq3: each worker occupies one station of one line";
    if (tag == "eq4") return "eq4: at most one worker per station, none on inactive lines";
    if (tag == "eq5") return "eq5: precedence as suffix-sum dominance per line";
    if (tag == "eq6") return "eq6: tasks only run at the station their worker occupies";
    if (tag == "eq7") return "eq7: station loads bound the line cycle time";
    if (tag == "eq8") return "eq8: incompatible worker-task pairs fixed to zero";
    if (tag == "eq13") return "eq13: inactive lines produce nothing";
    if (tag == "eq14") return "eq14: line rate at most each occupied station's rate";
    if (tag == "eq15") return "eq15: rate-weighted station load within one cycle";
    if (tag == "eq16") return "eq16: unoccupied stations have zero rate";
    if (tag == "eq17") return "eq17: v reaches the station rate on assigned tasks";
    if (tag == "eq18") return "eq18: v vanishes on unassigned tasks";
    return "";
}

}  // namespace

std::string export_milp(const Instance& inst, int k_max) {
    MilpModel model = build_milp(inst, k_max);
    std::ostringstream out;
    out << "\\ Parallel assembly line worker assignment, linearized rate model\n";
    out << "\\ tasks: " << inst.task_count() << ", workers: " << inst.worker_count()
        << ", stations per line: " << model.station_count << ", lines: " << model.k_max
        << ", big M: " << format_number(model.big_m) << "\n";
    out << "\\ domains: x, y, z binary (eq9, eq10, eq11); C, F, f, v nonnegative"
           " continuous (eq19, eq20, eq21)\n";
    out << "Maximize\n obj: ";
    append_terms(out, model.objective);
    out << "\nSubject To\n";
    std::string last_tag;
    for (const auto& row : model.rows) {
        std::string tag = row.name.substr(0, row.name.find('_'));
        if (tag != last_tag) {
            out << "\\ " << block_comment(row.name) << "\n";
            last_tag = tag;
        }
        out << ' ' << row.name << ": ";
        append_terms(out, row.terms);
        switch (row.sense) {
            case RowSense::LessEqual: out << " <= "; break;
            case RowSense::Equal: out << " = "; break;
            case RowSense::GreaterEqual: out << " >= "; break;
        }
        out << format_number(row.rhs) << "\n";
    }
    out << "Binaries\n";
    int on_line = 0;
    for (const auto& name : model.binaries) {
        out << (on_line == 0 ? " " : " ") << name;
        if (++on_line == 8) {
            out << "\n";
            on_line = 0;
        }
    }
    if (on_line != 0) out << "\n";
    out << "End\n";
    return out.str();
}

std::map<std::string, double> solution_to_variable_map(const Instance& inst,
                                                       const ParallelSolution& sol) {
    std::map<std::string, double> vars;
    for (std::size_t li = 0; li < sol.lines.size(); ++li) {
        const int k = static_cast<int>(li) + 1;
        const LineSolution& line = sol.lines[li];
        vars[z_name(k)] = 1.0;
        vars[c_name(k)] = static_cast<double>(line.cycle_time);
        double rate = 1.0 / static_cast<double>(line.cycle_time);
        vars[f_cap_name(k)] = rate;
        for (std::size_t si = 0; si < line.stations.size(); ++si) {
            const int s = static_cast<int>(si) + 1;
            const Station& st = line.stations[si];
            const int w = st.worker + 1;
            vars[y_name(s, w, k)] = 1.0;
            Duration load = 0;
            for (int i : st.tasks) load += inst.time(st.worker, i);
            // Idle workers carry the line rate so the station-rate rows hold.
            double station_rate = load > 0 ? 1.0 / static_cast<double>(load) : rate;
            vars[f_name(s, w, k)] = station_rate;
            for (int i : st.tasks) {
                vars[x_name(s, w, i + 1, k)] = 1.0;
                vars[v_name(s, w, i + 1, k)] = station_rate;
            }
        }
    }
    return vars;
}

MilpVerification verify_milp_solution(const Instance& inst, int k_max,
                                      const std::map<std::string, double>& assignment) {
    MilpModel model = build_milp(inst, k_max);
    std::unordered_set<std::string> known(model.binaries.begin(), model.binaries.end());
    known.insert(model.continuous.begin(), model.continuous.end());
    for (const auto& [name, value] : assignment) {
        (void)value;
        if (!known.count(name))
            throw std::runtime_error("malformed variable name: " + name);
    }

    auto val = [&](const std::string& name) {
        auto it = assignment.find(name);
        return it == assignment.end() ? 0.0 : it->second;
    };

    constexpr double tol = 1e-6;
    MilpVerification report;
    for (const auto& row : model.rows) {
        double lhs = 0.0;
        for (const auto& [name, coef] : row.terms) lhs += coef * val(name);
        bool ok = true;
        switch (row.sense) {
            case RowSense::LessEqual: ok = lhs <= row.rhs + tol; break;
            case RowSense::Equal: ok = std::abs(lhs - row.rhs) <= tol; break;
            case RowSense::GreaterEqual: ok = lhs >= row.rhs - tol; break;
        }
        if (!ok) report.violated_rows.push_back(row.name);
    }
    report.feasible = report.violated_rows.empty();
    for (const auto& [name, coef] : model.objective) report.objective += coef * val(name);

    // Rebuild the solution the assignment describes and cross-check it.
    const int S = model.station_count;
    const int m = inst.worker_count();
    const int n = inst.task_count();
    bool shape_ok = true;
    std::vector<LineSolution> lines;
    for (int k = 1; k <= k_max; ++k) {
        if (val(z_name(k)) <= 0.5) continue;
        LineSolution line;
        for (int s = 1; s <= S; ++s) {
            int worker = 0;
            int hits = 0;
            for (int w = 1; w <= m; ++w)
                if (val(y_name(s, w, k)) > 0.5) {
                    worker = w;
                    ++hits;
                }
            if (hits > 1) shape_ok = false;
            if (hits != 1) continue;
            Station st;
            st.worker = worker - 1;
            for (int i = 1; i <= n; ++i)
                if (val(x_name(s, worker, i, k)) > 0.5) st.tasks.push_back(i - 1);
            std::sort(st.tasks.begin(), st.tasks.end(), [&](int a, int b) {
                return inst.topo_rank(a) < inst.topo_rank(b);
            });
            line.stations.push_back(std::move(st));
        }
        if (line.stations.empty()) {
            shape_ok = false;
            continue;
        }
        lines.push_back(std::move(line));
    }

    if (shape_ok && !lines.empty()) {
        try {
            ParallelSolution rebuilt = make_parallel_solution(inst, std::move(lines), k_max);
            auto check = validate_solution(inst, rebuilt);
            double rate = 0.0;
            for (const auto& line : rebuilt.lines)
                rate += 1.0 / static_cast<double>(line.cycle_time);
            report.reconstruction_ok =
                check.ok && std::abs(rate - report.objective) <= tol;
            report.reconstructed = std::move(rebuilt);
        } catch (const std::exception&) {
            report.reconstruction_ok = false;
        }
    }
    return report;
}

}  // namespace palwabp
