#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "palwabp/brkga.hpp"
#include "palwabp/exact.hpp"
#include "palwabp/instance_io.hpp"
#include "palwabp/objective.hpp"
#include "palwabp/preprocess.hpp"
#include "palwabp/solution_io.hpp"
#include "palwabp/tabu.hpp"

namespace {

using namespace palwabp;

int failure_code(const std::exception& e) {
    std::string msg = e.what();
    if (msg.rfind("oracle size guard", 0) == 0) return 3;
    if (msg.rfind("enumeration infeasible", 0) == 0) return 3;
    return 1;
}

struct GenerateOpts {
    std::string base;
    std::string out;
    int workers = 0;
    double factor = 2.0;
    double rate = 0.10;
    std::uint64_t seed = 0;
};

int run_generate(const GenerateOpts& opts) {
    if (opts.rate < 0.0 || opts.rate >= 1.0) {
        std::cerr << "usage error: --rate must lie in [0, 1)\n";
        return 2;
    }
    if (opts.workers < 1) {
        std::cerr << "usage error: --workers must be at least 1\n";
        return 2;
    }
    if (opts.factor < 1.0) {
        std::cerr << "usage error: --factor must be at least 1\n";
        return 2;
    }
    try {
        SalbpBase base = load_salbp_base(opts.base);
        GeneratorConfig cfg;
        cfg.worker_count = opts.workers;
        cfg.variability_factor = opts.factor;
        cfg.infeasible_rate = opts.rate;
        cfg.seed = opts.seed;
        Instance inst = generate_instance(base, cfg);
        save_instance(opts.out, inst);
        int infeasible = 0;
        for (int w = 0; w < inst.worker_count(); ++w)
            infeasible += static_cast<int>(inst.incompatible(w).size());
        std::cout << "tasks " << inst.task_count() << ", workers " << inst.worker_count()
                  << ", infeasible cells " << infeasible << ", written to " << opts.out
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

struct SolveOpts {
    std::string instance;
    std::string method = "tabu";
    int kmax = 2;
    std::uint64_t seed = 0;
    double time_limit = 0.0;
    std::string out;
    std::string log;
    std::string dump_catalog_path;
    std::size_t catalog_limit = kDefaultCatalogLimit;
};

struct SolveOutcome {
    ParallelSolution solution;
    long long iterations = 0;  // tabu iterations or brkga generations
    std::string log_text;
};

SolveOutcome run_method(const Instance& inst, const std::string& method, int kmax,
                        std::uint64_t seed, double time_limit,
                        std::size_t catalog_limit) {
    SolveOutcome outcome;
    if (method == "tabu") {
        TabuParams params;
        params.k_max = kmax;
        params.seed = seed;
        params.time_limit_seconds = time_limit;
        params.catalog_limit = catalog_limit;
        TabuResult result = tabu_search(inst, params);
        outcome.solution = std::move(result.best);
        outcome.iterations = result.iterations;
        std::ostringstream log;
        log << "iteration,event,combined_ct,incumbent_ct\n";
        for (const auto& row : result.log)
            log << row.iteration << ',' << row.event << ',' << std::fixed
                << std::setprecision(3) << row.combined_ct << ',' << row.incumbent_ct
                << "\n";
        outcome.log_text = log.str();
    } else if (method == "brkga") {
        BrkgaParams params;
        params.k_max = kmax;
        params.seed = seed;
        params.time_limit_seconds = time_limit;
        BrkgaResult result = brkga_solve(inst, params);
        outcome.solution = std::move(result.best);
        outcome.iterations = result.generations;
        std::ostringstream log;
        log << "generation,best_fitness,best_combined_ct,mean_fitness\n";
        for (const auto& row : result.log)
            log << row.generation << ',' << std::setprecision(9) << row.best_fitness
                << ',' << std::fixed << std::setprecision(3) << row.best_combined_ct
                << ',' << std::setprecision(9) << row.mean_fitness << "\n";
        log.unsetf(std::ios::floatfield);
        outcome.log_text = log.str();
    } else if (method == "enum") {
        WorkerSetCatalog catalog = worker_sets(inst, catalog_limit);
        outcome.solution = enumerate_solve(inst, catalog, kmax);
    } else if (method == "oracle") {
        auto best = exhaustive_oracle(inst, kmax);
        if (!best) throw std::runtime_error("no solution exists: instance is infeasible");
        outcome.solution = std::move(*best);
    } else {
        throw std::runtime_error("unknown method: " + method);
    }
    return outcome;
}

int run_solve(const SolveOpts& opts) {
    try {
        Instance inst = load_instance(opts.instance);
        if (!opts.dump_catalog_path.empty()) {
            WorkerSetCatalog catalog = worker_sets(inst, opts.catalog_limit);
            std::ofstream dump(opts.dump_catalog_path);
            if (!dump)
                throw std::runtime_error("cannot open for writing: " +
                                         opts.dump_catalog_path);
            dump_catalog(dump, inst, catalog);
        }
        SolveOutcome outcome = run_method(inst, opts.method, opts.kmax, opts.seed,
                                          opts.time_limit, opts.catalog_limit);
        if (!opts.log.empty()) {
            std::ofstream log(opts.log);
            if (!log) throw std::runtime_error("cannot open for writing: " + opts.log);
            log << outcome.log_text;
        }
        const ParallelSolution& sol = outcome.solution;
        if (opts.out.empty()) {
            write_solution(std::cout, inst, sol);
        } else {
            save_solution(opts.out, inst, sol);
            ThroughputReport report = throughput_report(sol);
            std::cout << "method " << opts.method << ", lines " << sol.lines.size()
                      << ", combined cycle time " << std::fixed << std::setprecision(3)
                      << sol.combined_cycle_time << " s, throughput "
                      << std::setprecision(2) << report.combined_throughput
                      << " products/h\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure_code(e);
    }
}

struct VerifyOpts {
    std::string instance;
    std::string solution;
};

const char* kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Structure: return "structure";
        case ViolationKind::TaskCoverage: return "task coverage";
        case ViolationKind::WorkerUniqueness: return "worker uniqueness";
        case ViolationKind::Precedence: return "precedence";
        case ViolationKind::Incompatibility: return "incompatibility";
        case ViolationKind::LineCount: return "line count";
    }
    return "unknown";
}

int run_verify(const VerifyOpts& opts) {
    try {
        Instance inst = load_instance(opts.instance);
        ParsedSolution parsed = load_solution(opts.solution, inst);
        ValidationReport report = validate_solution(inst, parsed.solution);
        if (!report.ok) {
            for (const auto& v : report.violations)
                std::cerr << kind_name(v.kind) << ": " << v.message << "\n";
            return 1;
        }
        bool mismatch = false;
        std::vector<double> cycles;
        for (std::size_t li = 0; li < parsed.solution.lines.size(); ++li) {
            const LineSolution& line = parsed.solution.lines[li];
            LineEvaluation eval = evaluate_line(inst, line);
            cycles.push_back(static_cast<double>(eval.cycle_time));
            if (eval.cycle_time != line.cycle_time) {
                std::cerr << "objective mismatch: line " << li + 1 << " claims cycle "
                          << line.cycle_time << ", recomputed " << eval.cycle_time
                          << "\n";
                mismatch = true;
            }
        }
        double combined = combined_cycle_time(cycles);
        if (std::abs(combined - parsed.claimed_combined) > 0.01) {
            std::cerr << "objective mismatch: combined claims " << std::fixed
                      << std::setprecision(3) << parsed.claimed_combined
                      << ", recomputed " << combined << "\n";
            mismatch = true;
        }
        if (mismatch) return 1;
        std::cout << "ok: combined cycle time " << std::fixed << std::setprecision(3)
                  << combined << " s\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

struct BenchmarkOpts {
    std::string dir;
    std::string methods = "tabu,brkga";
    int reps = 5;
    int kmax = 2;
    std::uint64_t seed = 1;
    double time_limit = 0.0;
    std::string out;
    std::size_t catalog_limit = kDefaultCatalogLimit;
};

struct DetailRow {
    std::uint64_t seed = 0;
    double best_ct = 0.0;
    double serial_ct = 0.0;
    double wall_s = 0.0;
    bool parallel_found = false;
    long long iters = 0;
};

struct GroupResult {
    std::string instance;
    std::string method;
    bool parallel_possible = false;
    double serial_ct = 0.0;
    std::vector<DetailRow> reps;
    std::string warning;
};

// True when the catalog admits two complementary teams; the catalog family
// is closed under adding workers, so this is exactly the condition for a
// two-line split of the full crew to exist.
bool catalog_splits(const Instance& inst, const WorkerSetCatalog& catalog) {
    std::vector<int> all(inst.worker_count());
    for (int w = 0; w < inst.worker_count(); ++w) all[w] = w;
    WorkerMask full = workers_to_mask(all);
    for (const auto& entry : catalog.entries) {
        WorkerMask rest = full & ~entry.workers;
        if (rest != 0 && catalog.contains_team(rest)) return true;
    }
    return false;
}

GroupResult run_group(const std::string& path, const std::string& method,
                      const BenchmarkOpts& opts) {
    GroupResult group;
    group.instance = std::filesystem::path(path).filename().string();
    group.method = method;
    Instance inst = load_instance(path);
    if (opts.kmax > 1) {
        WorkerSetCatalog catalog = worker_sets(inst, opts.catalog_limit);
        group.parallel_possible = !catalog.overflowed && catalog_splits(inst, catalog);
    }

    SolveOutcome serial = run_method(inst, method, 1, opts.seed, opts.time_limit,
                                     opts.catalog_limit);
    group.serial_ct = serial.solution.combined_cycle_time;

    for (int r = 0; r < opts.reps; ++r) {
        DetailRow row;
        row.seed = opts.seed + static_cast<std::uint64_t>(r);
        auto t0 = std::chrono::steady_clock::now();
        SolveOutcome outcome = run_method(inst, method, opts.kmax, row.seed,
                                          opts.time_limit, opts.catalog_limit);
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        row.wall_s = dt.count();
        row.best_ct = outcome.solution.combined_cycle_time;
        row.serial_ct = group.serial_ct;
        row.parallel_found = outcome.solution.lines.size() >= 2;
        row.iters = outcome.iterations;
        group.reps.push_back(row);
    }
    return group;
}

std::string csv_double(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

void write_group_rows(std::ostream& out, const GroupResult& g, int kmax) {
    double sum_c = 0.0, sum_t = 0.0, sum_iters = 0.0;
    double best_ct = 0.0;
    int parallel_hits = 0;
    for (std::size_t i = 0; i < g.reps.size(); ++i) {
        const DetailRow& r = g.reps[i];
        double c_pct = (r.best_ct - r.serial_ct) / r.serial_ct * 100.0;
        sum_c += c_pct;
        sum_t += r.wall_s;
        sum_iters += static_cast<double>(r.iters);
        if (i == 0 || r.best_ct < best_ct) best_ct = r.best_ct;
        if (r.parallel_found) ++parallel_hits;
        out << "detail," << g.instance << ',' << g.method << ',' << r.seed << ','
            << kmax << ',' << csv_double(r.best_ct) << ',' << csv_double(r.serial_ct)
            << ',' << csv_double(c_pct) << ',' << csv_double(r.wall_s) << ",,,,"
            << (r.parallel_found ? 1 : 0) << ',' << (g.parallel_possible ? 1 : 0)
            << ',' << r.iters << ",1\n";
    }
    const double n = static_cast<double>(g.reps.size());
    double mean_c = sum_c / n;
    double var = 0.0;
    for (const DetailRow& r : g.reps) {
        double c_pct = (r.best_ct - r.serial_ct) / r.serial_ct * 100.0;
        var += (c_pct - mean_c) * (c_pct - mean_c);
    }
    double sd = std::sqrt(var / n);
    double best_pct = (best_ct - g.serial_ct) / g.serial_ct * 100.0;
    double p_pct = 100.0 * parallel_hits / n;
    out << "aggregate," << g.instance << ',' << g.method << ',' << 0 << ',' << kmax
        << ',' << csv_double(best_ct) << ',' << csv_double(g.serial_ct) << ','
        << csv_double(mean_c) << ',' << csv_double(sum_t / n) << ','
        << csv_double(p_pct) << ',' << csv_double(best_pct) << ',' << csv_double(sd)
        << ',' << (parallel_hits > 0 ? 1 : 0) << ',' << (g.parallel_possible ? 1 : 0)
        << ',' << static_cast<long long>(sum_iters / n) << ','
        << g.reps.size() << "\n";
}

int pool_width() {
    const char* env = std::getenv("PALWABP_THREADS");
    if (!env) return 1;
    int width = std::atoi(env);
    if (width < 1) return 1;
    if (width > 64) return 64;
    return width;
}

int run_benchmark(const BenchmarkOpts& opts) {
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(opts.dir, ec)) {
        if (entry.is_regular_file()) files.push_back(entry.path().string());
    }
    if (ec) {
        std::cerr << "usage error: cannot read directory " << opts.dir << "\n";
        return 2;
    }
    std::sort(files.begin(), files.end());

    std::vector<std::string> methods;
    std::stringstream ms(opts.methods);
    std::string token;
    while (std::getline(ms, token, ','))
        if (!token.empty()) methods.push_back(token);
    if (methods.empty() || opts.reps < 1) {
        std::cerr << "usage error: need at least one method and one repetition\n";
        return 2;
    }

    struct Job {
        std::string path;
        std::string method;
    };
    std::vector<Job> jobs;
    for (const auto& path : files)
        for (const auto& method : methods) jobs.push_back({path, method});
    if (jobs.empty()) {
        std::cerr << "usage error: no instances in " << opts.dir << "\n";
        return 2;
    }

    std::vector<std::optional<GroupResult>> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t at = next.fetch_add(1);
            if (at >= jobs.size()) return;
            GroupResult group;
            try {
                group = run_group(jobs[at].path, jobs[at].method, opts);
            } catch (const std::exception& e) {
                group.instance = std::filesystem::path(jobs[at].path).filename().string();
                group.method = jobs[at].method;
                group.warning = e.what();
            }
            results[at] = std::move(group);
        }
    };
    int width = std::min<int>(pool_width(), static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < width; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ofstream file_out;
    if (!opts.out.empty()) {
        file_out.open(opts.out);
        if (!file_out) {
            std::cerr << "error: cannot open for writing: " << opts.out << "\n";
            return 1;
        }
    }
    std::ostream& out = opts.out.empty() ? std::cout : file_out;

    out << "# serial baseline: the same method run once at kmax=1 with the base seed\n";
    out << "# C_pct = (best_ct - serial_ct) / serial_ct * 100 per repetition;"
           " aggregate row carries the mean\n";
    out << "# P_pct = share of repetitions whose best solution uses two or more"
           " lines; Best_pct = C_pct of the best repetition; SD = standard"
           " deviation of C_pct\n";
    out << "type,instance,method,seed,kmax,best_ct,serial_ct,C_pct,T_s,P_pct,"
           "Best_pct,SD,parallel_found,parallel_possible,iters,reps\n";
    int usable = 0;
    for (const auto& slot : results) {
        const GroupResult& g = *slot;
        if (!g.warning.empty()) {
            std::cerr << "warning: skipping " << g.instance << " (" << g.method
                      << "): " << g.warning << "\n";
            continue;
        }
        write_group_rows(out, g, opts.kmax);
        ++usable;
    }
    if (usable == 0) {
        std::cerr << "usage error: no usable instances in " << opts.dir << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel assembly line worker assignment and balancing"};
    app.require_subcommand(1);

    GenerateOpts gen;
    CLI::App* cmd_gen = app.add_subcommand(
        "generate", "Derive a heterogeneous-worker instance from a base line");
    cmd_gen->add_option("--base", gen.base, "Base instance file (single worker)")
        ->required();
    cmd_gen->add_option("--workers", gen.workers, "Number of workers")->required();
    cmd_gen->add_option("--factor", gen.factor, "Time variability factor (>= 1)");
    cmd_gen->add_option("--rate", gen.rate, "Infeasible-cell probability in [0, 1)");
    cmd_gen->add_option("--seed", gen.seed, "Generator seed");
    cmd_gen->add_option("--out", gen.out, "Output instance path")->required();

    SolveOpts solve;
    CLI::App* cmd_solve = app.add_subcommand("solve", "Solve an instance");
    cmd_solve->add_option("instance", solve.instance, "Instance file")->required();
    cmd_solve
        ->add_option("--method", solve.method, "Solver: tabu, brkga, enum or oracle")
        ->check(CLI::IsMember({"tabu", "brkga", "enum", "oracle"}));
    cmd_solve->add_option("--kmax", solve.kmax, "Maximum number of lines")
        ->check(CLI::Range(1, 64));
    cmd_solve->add_option("--seed", solve.seed, "Solver seed");
    cmd_solve->add_option("--time-limit", solve.time_limit, "Wall-clock limit (s)");
    cmd_solve->add_option("--out", solve.out, "Solution file (default: stdout)");
    cmd_solve->add_option("--log", solve.log, "Search log CSV path");
    cmd_solve->add_option("--dump-catalog", solve.dump_catalog_path,
                          "Write the worker-set catalog to this path");
    cmd_solve->add_option("--catalog-limit", solve.catalog_limit,
                          "Worker-set catalog entry cap");

    BenchmarkOpts bench;
    CLI::App* cmd_bench =
        app.add_subcommand("benchmark", "Run methods over an instance directory");
    cmd_bench->add_option("dir", bench.dir, "Instance directory")->required();
    cmd_bench->add_option("--methods", bench.methods, "Comma-separated method list");
    cmd_bench->add_option("--reps", bench.reps, "Repetitions per instance and method");
    cmd_bench->add_option("--kmax", bench.kmax, "Maximum number of lines")
        ->check(CLI::Range(1, 64));
    cmd_bench->add_option("--seed", bench.seed, "Base seed (repetition r adds r)");
    cmd_bench->add_option("--time-limit", bench.time_limit, "Per-run limit (s)");
    cmd_bench->add_option("--out", bench.out, "CSV output path (default: stdout)");
    cmd_bench->add_option("--catalog-limit", bench.catalog_limit,
                          "Worker-set catalog entry cap");

    VerifyOpts verify;
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "Check a solution file against its instance");
    cmd_verify->add_option("instance", verify.instance, "Instance file")->required();
    cmd_verify->add_option("solution", verify.solution, "Solution file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.got_subcommand(cmd_gen)) return run_generate(gen);
    if (app.got_subcommand(cmd_solve)) return run_solve(solve);
    if (app.got_subcommand(cmd_bench)) return run_benchmark(bench);
    if (app.got_subcommand(cmd_verify)) return run_verify(verify);
    return 2;
}
