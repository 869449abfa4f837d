// Acceptance checks for the solver library and CLI. Each numbered criterion
// prints one PASS or FAIL line; tracked soft targets print INFO lines. The
// process exits nonzero when any hard criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "palwabp/brkga.hpp"
#include "palwabp/exact.hpp"
#include "palwabp/instance.hpp"
#include "palwabp/instance_io.hpp"
#include "palwabp/objective.hpp"
#include "palwabp/preprocess.hpp"
#include "palwabp/rng.hpp"
#include "palwabp/solution_io.hpp"
#include "palwabp/tabu.hpp"

namespace {

using namespace palwabp;
namespace fs = std::filesystem;

int g_failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    if (!ok) ++g_failures;
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

void info(int id, const std::string& text) {
    std::printf("INFO criterion %d: %s\n", id, text.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int digits = 3) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

Instance load_fixture(const std::string& name) {
    return load_instance(std::string(PALWABP_DATA_DIR) + "/" + name);
}

TaskMask mask_of(std::initializer_list<int> tasks_1based) {
    TaskMask m = 0;
    for (int t : tasks_1based) m |= TaskMask{1} << (t - 1);
    return m;
}

// ---------------------------------------------------------------- criterion 1

void criterion_1() {
    double ct = combined_cycle_time({135.0, 354.0});
    double fast = 3600.0 / 135.0;
    double slow = 3600.0 / 354.0;
    bool ok = std::abs(ct - 97.73) <= 0.05 && std::abs(fast - 26.67) <= 0.01 &&
              std::abs(slow - 10.17) <= 0.01;
    report(1, ok, "combined cycle time and throughput arithmetic",
           "CT(135,354)=" + fmt(ct) + " s, rates " + fmt(fast, 2) + "/" +
               fmt(slow, 2) + " per hour");
}

// ---------------------------------------------------------------- criterion 2

void criterion_2(const Instance& toy) {
    using Entry = std::pair<TaskMask, bool>;
    std::vector<std::vector<Entry>> expected = {
        {{mask_of({1, 3, 5}), true}, {mask_of({3, 4, 5}), false}},
        {{mask_of({1, 2, 4}), true}, {mask_of({2, 4, 5}), false}},
        {{mask_of({1, 2, 3, 4, 5}), true}},
    };
    bool ok = true;
    std::string detail;
    for (int w = 0; w < 3; ++w) {
        std::vector<TaskSet> sets = task_sets(toy, w);
        std::set<Entry> got;
        for (const TaskSet& s : sets) got.insert({s.tasks, s.starts_line});
        std::set<Entry> want(expected[w].begin(), expected[w].end());
        if (got != want) {
            ok = false;
            detail = "worker " + toy.worker_name(w) + " produced " +
                     std::to_string(sets.size()) + " sets";
        }
    }
    report(2, ok, "per-worker executable task sets on the 5-task example", detail);
}

// ---------------------------------------------------------------- criterion 3

void criterion_3(const Instance& toy) {
    WorkerSetCatalog catalog = worker_sets(toy);

    using Combo = std::vector<std::pair<int, TaskMask>>;
    std::set<Combo> got;
    for (const WorkerSetEntry& e : catalog.entries) {
        Combo combo;
        for (auto [w, idx] : e.choices)
            combo.emplace_back(w, catalog.sets_per_worker[w][idx].tasks);
        got.insert(combo);
    }

    const TaskMask a1 = mask_of({1, 3, 5});
    const TaskMask a2 = mask_of({3, 4, 5});
    const TaskMask b1 = mask_of({1, 2, 4});
    const TaskMask b2 = mask_of({2, 4, 5});
    const TaskMask c1 = mask_of({1, 2, 3, 4, 5});
    std::set<Combo> want = {
        {{0, a1}, {1, b1}, {2, c1}},
        {{0, a1}, {1, b1}},
        {{0, a1}, {1, b2}, {2, c1}},
        {{0, a1}, {1, b2}},
        {{0, a1}, {2, c1}},
        {{0, a2}, {1, b1}, {2, c1}},
        {{0, a2}, {1, b1}},
        {{0, a2}, {1, b2}, {2, c1}},
        {{0, a2}, {2, c1}},
        {{1, b1}, {2, c1}},
        {{1, b2}, {2, c1}},
        {{2, c1}},
    };

    bool ok = !catalog.overflowed && got == want;
    report(3, ok, "covering worker-set catalog on the 5-task example",
           std::to_string(catalog.entries.size()) + " combinations");
}

// ---------------------------------------------------------------- criterion 4

void criterion_4() {
    Instance hes = load_fixture("heskia_64.alwabp");
    TabuParams params;  // stock parameters, two lines
    auto t0 = std::chrono::steady_clock::now();
    TabuResult res = tabu_search(hes, params);
    std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;

    double ct = res.best.combined_cycle_time;
    bool valid = validate_solution(hes, res.best).ok;
    bool ok = valid && wall.count() <= 120.0 && ct < 126.0 && ct <= 113.0;
    report(4, ok, "two-line tabu search on the 28-task benchmark",
           "combined " + fmt(ct) + " s in " + fmt(wall.count(), 1) + " s, serial " +
               std::to_string(res.serial_cycle_time) + " s" +
               (valid ? "" : ", INVALID SOLUTION"));
    info(4, "tracked reference 97.7 s, gap " +
                fmt((ct - 97.7) / 97.7 * 100.0, 2) + "%");
}

// ------------------------------------------------------- criteria 5, 6 and 9

struct SuiteOutcome {
    int attempts = 0;
    int usable = 0;
    int infeasible_consistent = 0;
    int infeasible_broken = 0;
    int invalid_outputs = 0;
    int oracle_beaten = 0;
    int unit_cases = 0;
    int unit_mismatches = 0;
    int tabu_matches = 0;
    int qualifying = 0;
    int reps_total = 0;
    int reps_better = 0;
    int milp_failures = 0;
    int corrupted_checked = 0;
    int corrupted_failures = 0;
};

SuiteOutcome run_tiny_suite() {
    SuiteOutcome out;
    const double eps = 1e-9;

    for (std::uint64_t s = 0; s < 200 && out.usable < 100; ++s) {
        ++out.attempts;
        Rng shape(9000 + s);
        int n = 4 + static_cast<int>((s * 7 + 3) % 5);  // 4..8 tasks
        int m = 2 + static_cast<int>((s * 5 + 1) % 3);  // 2..4 workers
        bool unit = (s % 5 == 4);

        SalbpBase base;
        base.times.resize(n);
        for (int i = 0; i < n; ++i)
            base.times[i] = unit ? 1 : static_cast<int>(shape.uniform_int(1, 9));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (shape.uniform01() < 0.2) base.precedence.emplace_back(i, j);

        GeneratorConfig cfg;
        cfg.worker_count = m;
        cfg.variability_factor = unit ? 1.0 : 2.0;
        cfg.infeasible_rate = unit ? 0.0 : 0.15;
        cfg.seed = 7000 + s;
        Instance inst = generate_instance(base, cfg);

        auto oracle = exhaustive_oracle(inst, 2);
        if (!oracle) {
            // Every solver must agree that nothing covers the tasks.
            bool all_throw = true;
            try {
                TabuParams tp;
                tp.seed = s;
                tabu_search(inst, tp);
                all_throw = false;
            } catch (const std::runtime_error&) {
            }
            try {
                BrkgaParams bp;
                bp.seed = s;
                bp.max_generations = 5;
                brkga_solve(inst, bp);
                all_throw = false;
            } catch (const std::runtime_error&) {
            }
            try {
                enumerate_solve(inst, worker_sets(inst), 2);
                all_throw = false;
            } catch (const std::runtime_error&) {
            }
            if (all_throw)
                ++out.infeasible_consistent;
            else
                ++out.infeasible_broken;
            continue;
        }

        ++out.usable;
        double opt = oracle->combined_cycle_time;

        TabuParams tp;
        tp.k_max = 2;
        tp.seed = s;
        TabuResult tabu = tabu_search(inst, tp);

        BrkgaParams bp;
        bp.k_max = 2;
        bp.seed = s;
        bp.max_generations = 60;
        BrkgaResult brkga = brkga_solve(inst, bp);

        ParallelSolution en = enumerate_solve(inst, worker_sets(inst), 2);

        for (const ParallelSolution* sol :
             {&tabu.best, &brkga.best, &en, &*oracle}) {
            if (!validate_solution(inst, *sol).ok) ++out.invalid_outputs;
            if (sol->combined_cycle_time < opt - eps) ++out.oracle_beaten;
        }
        if (unit) {
            ++out.unit_cases;
            if (std::abs(en.combined_cycle_time - opt) > eps) ++out.unit_mismatches;
        }
        if (std::abs(tabu.best.combined_cycle_time - opt) <= eps) ++out.tabu_matches;

        // Criterion 6: when the catalog enumeration proves a two-line win,
        // repeated tabu runs must also beat the serial baseline.
        double serial_ct = static_cast<double>(tabu.serial_cycle_time);
        if (en.lines.size() >= 2 && en.combined_cycle_time < serial_ct - eps) {
            ++out.qualifying;
            for (int r = 0; r < 5; ++r) {
                TabuParams rp;
                rp.k_max = 2;
                rp.seed = 777 + 13 * s + static_cast<std::uint64_t>(r);
                TabuResult rep = tabu_search(inst, rp);
                ++out.reps_total;
                if (rep.best.combined_cycle_time <
                    static_cast<double>(rep.serial_cycle_time) - eps)
                    ++out.reps_better;
            }
        }

        // Criterion 9: MILP round-trip of the oracle optimum.
        std::map<std::string, double> vars = solution_to_variable_map(inst, *oracle);
        MilpVerification ver = verify_milp_solution(inst, 2, vars);
        double rate = 0.0;
        for (const LineSolution& line : oracle->lines)
            rate += 1.0 / static_cast<double>(line.cycle_time);
        if (!ver.feasible || std::abs(ver.objective - rate) > 1e-6 ||
            !ver.reconstruction_ok)
            ++out.milp_failures;

        if (out.usable % 10 == 1) {
            ++out.corrupted_checked;
            MilpVerification empty = verify_milp_solution(inst, 2, {});
            bool empty_ok = !empty.feasible && !empty.violated_rows.empty() &&
                            std::all_of(empty.violated_rows.begin(),
                                        empty.violated_rows.end(),
                                        [](const std::string& r) {
                                            return r.rfind("eq3_", 0) == 0;
                                        });

            std::map<std::string, double> broken = vars;
            auto it = broken.lower_bound("x_");
            bool drop_ok = false;
            if (it != broken.end() && it->first.rfind("x_", 0) == 0) {
                std::string x_key = it->first;
                broken.erase(x_key);
                broken.erase("v" + x_key.substr(1));
                MilpVerification dropped = verify_milp_solution(inst, 2, broken);
                drop_ok = !dropped.feasible &&
                          std::any_of(dropped.violated_rows.begin(),
                                      dropped.violated_rows.end(),
                                      [](const std::string& r) {
                                          return r.rfind("eq2_", 0) == 0;
                                      });
            }
            if (!empty_ok || !drop_ok) ++out.corrupted_failures;
        }
    }
    return out;
}

void criterion_5(const SuiteOutcome& suite) {
    bool ok = suite.usable >= 100 && suite.invalid_outputs == 0 &&
              suite.oracle_beaten == 0 && suite.unit_mismatches == 0 &&
              suite.infeasible_broken == 0;
    report(5, ok, "solver agreement with the exhaustive optimum on 100 seeded instances",
           std::to_string(suite.usable) + " solvable cases, " +
               std::to_string(suite.infeasible_consistent) +
               " consistently infeasible, " + std::to_string(suite.invalid_outputs) +
               " invalid outputs, " + std::to_string(suite.oracle_beaten) +
               " oracle beats, " + std::to_string(suite.unit_mismatches) + "/" +
               std::to_string(suite.unit_cases) + " unit-time enumeration mismatches");
    double match_pct =
        suite.usable > 0 ? 100.0 * suite.tabu_matches / suite.usable : 0.0;
    info(5, "tracked: tabu matched the optimum on " +
                std::to_string(suite.tabu_matches) + "/" +
                std::to_string(suite.usable) + " instances (" + fmt(match_pct, 1) +
                "%, target 70%)");
}

void criterion_6(const SuiteOutcome& suite) {
    double share = suite.reps_total > 0
                       ? static_cast<double>(suite.reps_better) / suite.reps_total
                       : 1.0;
    bool ok = suite.qualifying > 0 && share >= 0.90;
    report(6, ok, "tabu beats the serial baseline wherever a two-line win exists",
           std::to_string(suite.reps_better) + "/" + std::to_string(suite.reps_total) +
               " repetitions better than serial over " +
               std::to_string(suite.qualifying) + " qualifying instances (" +
               fmt(share * 100.0, 1) + "%)");
}

void criterion_9(const SuiteOutcome& suite) {
    bool ok = suite.milp_failures == 0 && suite.corrupted_checked > 0 &&
              suite.corrupted_failures == 0;
    report(9, ok, "linear model round-trip of every tiny-suite optimum",
           std::to_string(suite.usable) + " assignments verified, " +
               std::to_string(suite.milp_failures) + " failures, " +
               std::to_string(suite.corrupted_checked) +
               " corrupted maps rejected with their defining rows");
}

// ---------------------------------------------------------------- criterion 7

void criterion_7(const Instance& toy) {
    int monotonicity_violations = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        BrkgaParams params;
        params.k_max = 2;
        params.seed = seed;
        params.max_generations = 1000;
        BrkgaResult res = brkga_solve(toy, params);
        for (std::size_t i = 1; i < res.log.size(); ++i)
            if (res.log[i].best_fitness < res.log[i - 1].best_fitness)
                ++monotonicity_violations;
    }

    BrkgaParams params;
    params.population = 100;
    params.elite = 20;
    params.mutants = 10;
    params.elite_inherit_prob = 0.70;
    const std::size_t len = 50;
    std::vector<Chromosome> pop;
    for (int i = 0; i < 20; ++i) pop.push_back(Chromosome(len, 0.25));
    for (int i = 20; i < 100; ++i) pop.push_back(Chromosome(len, 0.75));
    long long genes = 0;
    long long inherited = 0;
    for (std::uint64_t g = 0; g < 30; ++g) {
        std::vector<Chromosome> next = evolve(pop, params, Rng(5000 + g));
        for (int i = 30; i < 100; ++i)
            for (double gene : next[i]) {
                ++genes;
                if (gene == 0.25) ++inherited;
            }
    }
    double share = static_cast<double>(inherited) / static_cast<double>(genes);

    int decode_mismatches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Chromosome c(chromosome_length(toy, 2));
        Rng rng(seed);
        for (double& gene : c) gene = rng.uniform01();
        DecodeResult a = decode(c, toy, 2);
        DecodeResult b = decode(c, toy, 2);
        bool same = a.fitness == b.fitness && a.line_teams == b.line_teams &&
                    a.infeasible_teams == b.infeasible_teams &&
                    a.lines.size() == b.lines.size();
        for (std::size_t i = 0; same && i < a.lines.size(); ++i) {
            same = a.lines[i].cycle_time == b.lines[i].cycle_time &&
                   a.lines[i].stations.size() == b.lines[i].stations.size();
            for (std::size_t st = 0; same && st < a.lines[i].stations.size(); ++st)
                same = a.lines[i].stations[st].worker == b.lines[i].stations[st].worker &&
                       a.lines[i].stations[st].tasks == b.lines[i].stations[st].tasks;
        }
        if (!same) ++decode_mismatches;
    }

    bool ok = monotonicity_violations == 0 && genes >= 100000 &&
              std::abs(share - 0.70) <= 0.01 && decode_mismatches == 0;
    report(7, ok, "evolution mechanics: elitism, inheritance bias, decode purity",
           std::to_string(monotonicity_violations) +
               " monotonicity violations over 10x1000 generations, elite share " +
               fmt(share, 4) + " of " + std::to_string(genes) + " genes, " +
               std::to_string(decode_mismatches) + " decode mismatches");
}

// ---------------------------------------------------------------- criterion 8

void criterion_8() {
    SalbpBase base;
    base.times.assign(5, 40);  // every draw lies in [40, 80]: 41 values

    GeneratorConfig cfg;
    cfg.worker_count = 2500;
    cfg.variability_factor = 2.0;
    cfg.infeasible_rate = 0.10;
    cfg.seed = 123;
    Instance inst = generate_instance(base, cfg);

    const int cells = inst.task_count() * inst.worker_count();
    int infeasible = 0;
    int out_of_band = 0;
    std::vector<int> hist(41, 0);
    for (int w = 0; w < inst.worker_count(); ++w)
        for (int i = 0; i < inst.task_count(); ++i) {
            if (!inst.can_do(w, i)) {
                ++infeasible;
                continue;
            }
            int v = static_cast<int>(inst.time(w, i));
            if (v < 40 || v > 80) {
                ++out_of_band;
                continue;
            }
            ++hist[v - 40];
        }

    int feasible = cells - infeasible;
    double rate = static_cast<double>(infeasible) / cells;
    double expected = static_cast<double>(feasible) / 41.0;
    double chi2 = 0.0;
    for (int c : hist) {
        double d = c - expected;
        chi2 += d * d / expected;
    }

    int uncoverable = 0;
    for (int i = 0; i < inst.task_count(); ++i) {
        bool covered = false;
        for (int w = 0; w < inst.worker_count() && !covered; ++w)
            covered = inst.can_do(w, i);
        if (!covered) ++uncoverable;
    }

    bool ok = cells >= 10000 && out_of_band == 0 && std::abs(rate - 0.10) <= 0.01 &&
              chi2 < 63.69 && uncoverable == 0;  // chi-square(40) at p = 0.01
    report(8, ok, "generator cell statistics over " + std::to_string(cells) + " cells",
           "infeasible rate " + fmt(rate, 4) + ", chi-square " + fmt(chi2, 1) +
               " (limit 63.69), " + std::to_string(out_of_band) + " out of band, " +
               std::to_string(uncoverable) + " uncoverable tasks");
}

// --------------------------------------------------------------- criterion 10

struct CliRun {
    int code = -1;
    std::string file_bytes;
};

CliRun run_solve(const fs::path& dir, const std::string& method, int run_id) {
    fs::path out = dir / (method + "-" + std::to_string(run_id) + ".sol");
    fs::path sink = dir / "cli-output.txt";
    std::string cmd = std::string("\"") + PALWABP_CLI_PATH + "\" solve \"" +
                      std::string(PALWABP_DATA_DIR) + "/toy5.alwabp\" --method " +
                      method + " --kmax 2 --seed 11 --out \"" + out.string() +
                      "\" > \"" + sink.string() + "\" 2>&1";
    int status = std::system(cmd.c_str());
    CliRun run;
    if (status != -1 && WIFEXITED(status)) run.code = WEXITSTATUS(status);
    std::ifstream in(out);
    std::ostringstream os;
    os << in.rdbuf();
    run.file_bytes = os.str();
    return run;
}

void criterion_10() {
    fs::path dir =
        fs::temp_directory_path() / ("palwabp-accept-" + std::to_string(::getpid()));
    fs::create_directories(dir);

    bool ok = true;
    std::string detail;
    for (const std::string method : {"tabu", "brkga"}) {
        CliRun first = run_solve(dir, method, 1);
        CliRun second = run_solve(dir, method, 2);
        bool same = first.code == 0 && second.code == 0 &&
                    !first.file_bytes.empty() && first.file_bytes == second.file_bytes;
        if (!same) {
            ok = false;
            detail = method + " runs differ or failed (exit " +
                     std::to_string(first.code) + "/" + std::to_string(second.code) +
                     ")";
        }
    }
    report(10, ok, "repeated CLI solves produce byte-identical solution files",
           detail.empty() ? "tabu and brkga at fixed seed" : detail);
}

}  // namespace

int main() {
    Instance toy = load_fixture("toy5.alwabp");

    criterion_1();
    criterion_2(toy);
    criterion_3(toy);
    criterion_4();

    auto t0 = std::chrono::steady_clock::now();
    SuiteOutcome suite = run_tiny_suite();
    std::chrono::duration<double> suite_wall = std::chrono::steady_clock::now() - t0;
    criterion_5(suite);
    criterion_6(suite);

    criterion_7(toy);
    criterion_8();
    criterion_9(suite);
    criterion_10();

    info(0, "tiny-suite wall time " + fmt(suite_wall.count(), 1) + " s over " +
                std::to_string(suite.attempts) + " generated instances");

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
