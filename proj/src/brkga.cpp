#include "palwabp/brkga.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "palwabp/constructive.hpp"
#include "palwabp/objective.hpp"
#include "palwabp/rng.hpp"

namespace palwabp {

std::size_t chromosome_length(const Instance& inst, int k_max) {
    return 2 * static_cast<std::size_t>(inst.worker_count()) +
           static_cast<std::size_t>(inst.task_count()) * static_cast<std::size_t>(k_max);
}

DecodeResult decode(const Chromosome& c, const Instance& inst, int k_max) {
    const int m = inst.worker_count();
    const int n = inst.task_count();
    if (c.size() != chromosome_length(inst, k_max))
        throw std::runtime_error("decode: chromosome length mismatch");

    std::vector<std::vector<int>> teams(k_max);
    for (int w = 0; w < m; ++w) {
        int line = static_cast<int>(c[w] * k_max);
        line = std::min(line, k_max - 1);
        teams[line].push_back(w);
    }

    DecodeResult res;
    for (int k = 0; k < k_max; ++k) {
        if (teams[k].empty()) continue;
        PriorityRules rules;
        rules.worker_rule = WorkerRule::External;
        rules.task_rule = TaskRule::External;
        rules.worker_priority.assign(c.begin() + m, c.begin() + 2 * m);
        rules.task_priority.assign(c.begin() + 2 * m + static_cast<std::size_t>(k) * n,
                                   c.begin() + 2 * m + static_cast<std::size_t>(k + 1) * n);
        auto line = solve_serial(inst, teams[k], rules);
        if (line) {
            res.fitness += 1.0 / static_cast<double>(line->cycle_time);
            res.line_teams.push_back(teams[k]);
            res.lines.push_back(std::move(*line));
        } else {
            res.infeasible_teams.push_back(teams[k]);
        }
    }
    return res;
}

std::vector<Chromosome> evolve(const std::vector<Chromosome>& population,
                               const BrkgaParams& params, const Rng& rng) {
    const int pop = params.population;
    if (static_cast<int>(population.size()) != pop)
        throw std::runtime_error("evolve: population size mismatch");
    if (params.elite + params.mutants >= pop || params.elite < 1)
        throw std::runtime_error("evolve: invalid elite/mutant split");
    const std::size_t len = population.front().size();

    std::vector<Chromosome> next(pop);
    for (int i = 0; i < params.elite; ++i) next[i] = population[i];
    for (int i = params.elite; i < pop; ++i) {
        Rng slot = rng.substream(static_cast<std::uint64_t>(i) + 1);
        next[i].resize(len);
        if (i < params.elite + params.mutants) {
            for (std::size_t g = 0; g < len; ++g) next[i][g] = slot.uniform01();
        } else {
            std::size_t ep = slot.uniform_index(static_cast<std::size_t>(params.elite));
            std::size_t np = params.elite +
                             slot.uniform_index(static_cast<std::size_t>(pop - params.elite));
            for (std::size_t g = 0; g < len; ++g) {
                bool from_elite = slot.uniform01() < params.elite_inherit_prob;
                next[i][g] = from_elite ? population[ep][g] : population[np][g];
            }
        }
    }
    return next;
}

namespace {

struct Ranked {
    double fitness;
    int index;
};

void sort_population(std::vector<Chromosome>& pop, std::vector<double>& fit) {
    std::vector<Ranked> order(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i)
        order[i] = {fit[i], static_cast<int>(i)};
    std::stable_sort(order.begin(), order.end(), [](const Ranked& a, const Ranked& b) {
        return a.fitness > b.fitness;
    });
    std::vector<Chromosome> p2(pop.size());
    std::vector<double> f2(pop.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        p2[i] = std::move(pop[order[i].index]);
        f2[i] = order[i].fitness;
    }
    pop = std::move(p2);
    fit = std::move(f2);
}

}  // namespace

BrkgaResult brkga_solve(const Instance& inst, const BrkgaParams& params) {
    if (params.k_max < 1) throw std::runtime_error("k_max must be at least 1");
    auto t0 = std::chrono::steady_clock::now();
    auto out_of_time = [&]() {
        if (params.time_limit_seconds <= 0.0) return false;
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        return dt.count() >= params.time_limit_seconds;
    };

    Rng root(params.seed);
    const std::size_t len = chromosome_length(inst, params.k_max);

    std::vector<Chromosome> pop(params.population);
    std::vector<double> fit(params.population);
    for (int i = 0; i < params.population; ++i) {
        Rng slot = root.substream(0, static_cast<std::uint64_t>(i) + 1);
        pop[i].resize(len);
        for (std::size_t g = 0; g < len; ++g) pop[i][g] = slot.uniform01();
        fit[i] = decode(pop[i], inst, params.k_max).fitness;
    }
    sort_population(pop, fit);

    BrkgaResult result;
    Chromosome best = pop.front();
    double best_fit = fit.front();

    auto log_generation = [&](int gen) {
        double mean = std::accumulate(fit.begin(), fit.end(), 0.0) /
                      static_cast<double>(fit.size());
        result.log.push_back(
            {gen, best_fit, best_fit > 0.0 ? 1.0 / best_fit : 0.0, mean});
    };
    log_generation(0);

    int gen = 0;
    while (gen < params.max_generations && !out_of_time()) {
        ++gen;
        Rng gen_rng = root.substream(static_cast<std::uint64_t>(gen));
        pop = evolve(pop, params, gen_rng);
        for (int i = 0; i < params.population; ++i)
            fit[i] = decode(pop[i], inst, params.k_max).fitness;
        sort_population(pop, fit);
        if (fit.front() > best_fit) {
            best_fit = fit.front();
            best = pop.front();
        }
        log_generation(gen);
    }
    result.generations = gen;
    result.best_fitness = best_fit;

    // Repair: fold the workers of infeasible (zero-fitness) lines into the
    // best feasible line so the final solution covers every worker.
    DecodeResult dec = decode(best, inst, params.k_max);
    std::vector<LineSolution> lines;
    if (!dec.lines.empty() && dec.infeasible_teams.empty()) {
        lines = dec.lines;
    } else if (!dec.lines.empty()) {
        std::size_t target = 0;
        for (std::size_t i = 1; i < dec.lines.size(); ++i)
            if (dec.lines[i].cycle_time < dec.lines[target].cycle_time) target = i;
        std::vector<int> merged = dec.line_teams[target];
        for (const auto& team : dec.infeasible_teams)
            merged.insert(merged.end(), team.begin(), team.end());
        std::sort(merged.begin(), merged.end());
        PriorityRules rules;  // static defaults for the repair solve
        auto solved = solve_serial_portfolio(inst, merged, rules);
        if (solved) {
            for (std::size_t i = 0; i < dec.lines.size(); ++i)
                if (i != target) lines.push_back(dec.lines[i]);
            lines.push_back(std::move(*solved));
        }
    }
    if (lines.empty()) {
        // Nothing feasible decoded: fall back to the serial full team.
        std::vector<int> full(inst.worker_count());
        for (int w = 0; w < inst.worker_count(); ++w) full[w] = w;
        PriorityRules rules;
        auto solved = solve_serial_portfolio(inst, full, rules);
        if (!solved)
            throw std::runtime_error(
                "no solution exists: full team has no feasible serial line");
        lines.push_back(std::move(*solved));
    }
    result.best = make_parallel_solution(inst, std::move(lines), params.k_max);
    return result;
}

}  // namespace palwabp
