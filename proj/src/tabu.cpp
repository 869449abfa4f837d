#include "palwabp/tabu.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "palwabp/objective.hpp"

namespace palwabp {

namespace {

constexpr std::uint64_t kFingerprintSalt = 0x5ca1ab1e0ddba11ULL;

std::uint64_t endpoint_hash(int worker, WorkerMask team) {
    return mix_seed(kFingerprintSalt, static_cast<std::uint64_t>(worker) + 1, team);
}

}  // namespace

std::vector<WorkerMask> initial_solution(const Instance& inst,
                                         const WorkerSetCatalog& catalog, int k_max,
                                         Rng& rng,
                                         std::optional<std::size_t> pinned_entry) {
    if (catalog.entries.empty())
        throw std::runtime_error("no solution exists: worker-set catalog is empty");
    if (k_max < 1) throw std::runtime_error("k_max must be at least 1");

    std::size_t pinned = pinned_entry ? *pinned_entry
                                      : rng.uniform_index(catalog.entries.size());
    std::vector<std::size_t> chosen{pinned};
    WorkerMask used = catalog.entries[pinned].workers;

    // First-fit with backtracking over the remaining entries; accepts the
    // deepest list found if k_max disjoint entries do not exist. The node
    // budget keeps degenerate catalogs from blowing up; the scan order is
    // fixed, so results stay deterministic.
    std::vector<std::size_t> best = chosen;
    long long budget = 2'000'000;
    auto dfs = [&](auto&& self, std::size_t start) -> bool {
        if (static_cast<int>(chosen.size()) == k_max) return true;
        if (chosen.size() > best.size()) best = chosen;
        for (std::size_t idx = start; idx < catalog.entries.size(); ++idx) {
            if (--budget < 0) return false;
            if (idx == pinned) continue;
            if (catalog.entries[idx].workers & used) continue;
            chosen.push_back(idx);
            used |= catalog.entries[idx].workers;
            if (self(self, idx + 1)) return true;
            used &= ~catalog.entries[idx].workers;
            chosen.pop_back();
        }
        return false;
    };
    if (!dfs(dfs, 0)) chosen = best;

    std::vector<WorkerMask> teams;
    teams.reserve(chosen.size());
    WorkerMask seeded = 0;
    for (std::size_t idx : chosen) {
        teams.push_back(catalog.entries[idx].workers);
        seeded |= catalog.entries[idx].workers;
    }
    for (int w = 0; w < inst.worker_count(); ++w) {
        if (seeded & (WorkerMask{1} << w)) continue;
        std::size_t t = rng.uniform_index(teams.size());
        teams[t] |= WorkerMask{1} << w;
    }
    return teams;
}

std::vector<Move> neighborhood(const std::vector<WorkerMask>& teams,
                               const WorkerSetCatalog& catalog) {
    std::vector<Move> moves;
    std::unordered_set<std::uint64_t> seen;
    auto push_unique = [&](const Move& m) {
        std::uint64_t key = mix_seed(static_cast<std::uint64_t>(m.kind) + 1,
                                     mix_seed(m.workers ^ m.lack, m.excess,
                                              static_cast<std::uint64_t>(m.line_a) + 1),
                                     static_cast<std::uint64_t>(m.line_b) + 1);
        if (seen.insert(key).second) moves.push_back(m);
    };

    for (int a = 0; a < static_cast<int>(teams.size()); ++a) {
        WorkerMask team_a = teams[a];
        for (const auto& entry : catalog.entries) {
            if ((entry.workers & team_a) == 0) continue;
            WorkerMask excess = team_a & ~entry.workers;
            WorkerMask lack = entry.workers & ~team_a;
            if (excess == 0) continue;
            if (lack == 0) {
                // The line stays covering without `excess`: move each spare
                // worker to every other line, as long as the shrunken source
                // team is still a catalog team.
                for (int w = 0; w < 64; ++w) {
                    WorkerMask bit = WorkerMask{1} << w;
                    if (!(excess & bit)) continue;
                    if (!catalog.contains_team(team_a & ~bit)) continue;
                    for (int b = 0; b < static_cast<int>(teams.size()); ++b) {
                        if (b == a) continue;
                        Move m;
                        m.kind = MoveKind::Transfer;
                        m.workers = bit;
                        m.line_a = a;
                        m.line_b = b;
                        push_unique(m);
                    }
                }
            } else {
                for (int b = 0; b < static_cast<int>(teams.size()); ++b) {
                    if (b == a) continue;
                    if ((lack & teams[b]) != lack) continue;  // lack not inside line b
                    WorkerMask new_b = (teams[b] & ~lack) | excess;
                    if (!catalog.contains_team(new_b)) continue;
                    Move m;
                    m.kind = MoveKind::Exchange;
                    m.lack = lack;
                    m.excess = excess;
                    m.line_a = a;
                    m.line_b = b;
                    push_unique(m);
                }
            }
        }
    }
    return moves;
}

void apply_move(std::vector<WorkerMask>& teams, const Move& m) {
    if (m.kind == MoveKind::Transfer) {
        teams[m.line_a] &= ~m.workers;
        teams[m.line_b] |= m.workers;
    } else {
        teams[m.line_a] = (teams[m.line_a] & ~m.excess) | m.lack;
        teams[m.line_b] = (teams[m.line_b] & ~m.lack) | m.excess;
    }
    teams.erase(std::remove(teams.begin(), teams.end(), WorkerMask{0}), teams.end());
}

std::uint64_t move_fingerprint(const std::vector<WorkerMask>& teams, const Move& m) {
    // Each moved worker contributes the hash of the team it leaves (before
    // the move) and the team it joins (after the move); the XOR of all
    // contributions is invariant under inverting the move.
    std::uint64_t fp = 0;
    if (m.kind == MoveKind::Transfer) {
        WorkerMask after_b = teams[m.line_b] | m.workers;
        for (int w = 0; w < 64; ++w) {
            if (!(m.workers & (WorkerMask{1} << w))) continue;
            fp ^= endpoint_hash(w, teams[m.line_a]);
            fp ^= endpoint_hash(w, after_b);
        }
    } else {
        WorkerMask new_a = (teams[m.line_a] & ~m.excess) | m.lack;
        WorkerMask new_b = (teams[m.line_b] & ~m.lack) | m.excess;
        for (int w = 0; w < 64; ++w) {
            WorkerMask bit = WorkerMask{1} << w;
            if (m.lack & bit) {
                fp ^= endpoint_hash(w, teams[m.line_b]);
                fp ^= endpoint_hash(w, new_a);
            } else if (m.excess & bit) {
                fp ^= endpoint_hash(w, teams[m.line_a]);
                fp ^= endpoint_hash(w, new_b);
            }
        }
    }
    return fp;
}

namespace {

class TeamCache {
public:
    TeamCache(const Instance& inst, const PriorityRules& rules)
        : inst_(inst), rules_(rules) {}

    const std::optional<LineSolution>& solve(WorkerMask team) {
        auto it = cache_.find(team);
        if (it != cache_.end()) return it->second;
        auto line = solve_serial_portfolio(inst_, mask_to_workers(team), rules_);
        return cache_.emplace(team, std::move(line)).first->second;
    }

private:
    const Instance& inst_;
    const PriorityRules& rules_;
    std::unordered_map<WorkerMask, std::optional<LineSolution>> cache_;
};

struct TabuList {
    std::vector<std::pair<std::uint64_t, long long>> items;  // (fingerprint, expiry)

    void purge(long long iter) {
        std::erase_if(items, [iter](const auto& p) { return p.second <= iter; });
    }
    bool forbidden(std::uint64_t fp) const {
        for (const auto& [f, _] : items)
            if (f == fp) return true;
        return false;
    }
    void push(std::uint64_t fp, long long expiry) { items.emplace_back(fp, expiry); }
};

double partition_rate(const std::vector<double>& cts) {
    double r = 0.0;
    for (double c : cts) r += 1.0 / c;
    return r;
}

}  // namespace

TabuResult tabu_search(const Instance& inst, const TabuParams& params) {
    if (params.k_max < 1) throw std::runtime_error("k_max must be at least 1");
    auto t0 = std::chrono::steady_clock::now();
    auto out_of_time = [&]() {
        if (params.time_limit_seconds <= 0.0) return false;
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        return dt.count() >= params.time_limit_seconds;
    };

    TabuResult result;
    TeamCache cache(inst, params.rules);

    std::vector<int> full(inst.worker_count());
    for (int w = 0; w < inst.worker_count(); ++w) full[w] = w;
    WorkerMask full_mask = workers_to_mask(full);

    // k = 1 fallback: the serial full-team line is always evaluated once and
    // bounds the incumbent from below.
    const auto& serial = cache.solve(full_mask);
    if (!serial)
        throw std::runtime_error("no solution exists: full team has no feasible serial line");
    result.serial_cycle_time = serial->cycle_time;

    std::vector<WorkerMask> best_teams{full_mask};
    double best_ct = static_cast<double>(serial->cycle_time);
    result.log.push_back({0, "serial", best_ct, best_ct});

    WorkerSetCatalog catalog = worker_sets(inst, params.catalog_limit);

    Rng rng(params.seed);
    long long iter = 0;

    if (params.k_max > 1 && !catalog.entries.empty()) {
        for (int start = 0; start <= params.max_restarts; ++start) {
            if (out_of_time()) break;
            if (start > 0) ++result.restarts_used;

            std::vector<WorkerMask> teams = initial_solution(inst, catalog, params.k_max, rng);
            std::vector<double> cts;
            bool ok = true;
            for (WorkerMask t : teams) {
                const auto& line = cache.solve(t);
                if (!line) {
                    ok = false;
                    break;
                }
                cts.push_back(static_cast<double>(line->cycle_time));
            }
            if (!ok) {
                result.log.push_back({iter, "restart-infeasible", 0.0, best_ct});
                continue;
            }
            double current_ct = 1.0 / partition_rate(cts);
            result.log.push_back({iter, "initial", current_ct, best_ct});
            if (current_ct < best_ct - 1e-9) {
                best_ct = current_ct;
                best_teams = teams;
            }

            TabuList tabu;
            int idle = 0;
            while (idle < params.max_idle_iterations && !out_of_time()) {
                ++iter;
                ++result.iterations;
                tabu.purge(iter);

                auto moves = neighborhood(teams, catalog);
                int chosen = -1;
                double chosen_ct = 0.0;
                std::uint64_t chosen_fp = 0;
                for (std::size_t mi = 0; mi < moves.size(); ++mi) {
                    const Move& m = moves[mi];
                    std::vector<WorkerMask> next = teams;
                    apply_move(next, m);
                    std::vector<double> next_cts;
                    bool feasible = true;
                    for (WorkerMask t : next) {
                        const auto& line = cache.solve(t);
                        if (!line) {
                            feasible = false;
                            break;
                        }
                        next_cts.push_back(static_cast<double>(line->cycle_time));
                    }
                    if (!feasible) continue;
                    double ct = 1.0 / partition_rate(next_cts);
                    std::uint64_t fp = move_fingerprint(teams, m);
                    bool aspirated = ct < best_ct - 1e-9;
                    if (tabu.forbidden(fp) && !aspirated) continue;
                    if (chosen == -1 || ct < chosen_ct - 1e-9) {
                        chosen = static_cast<int>(mi);
                        chosen_ct = ct;
                        chosen_fp = fp;
                    }
                }
                if (chosen == -1) break;  // neighborhood exhausted; restart

                apply_move(teams, moves[chosen]);
                tabu.push(chosen_fp, iter + params.tenure);
                current_ct = chosen_ct;
                result.log.push_back(
                    {iter,
                     moves[chosen].kind == MoveKind::Transfer ? "transfer" : "exchange",
                     current_ct, std::min(best_ct, current_ct)});
                if (current_ct < best_ct - 1e-9) {
                    best_ct = current_ct;
                    best_teams = teams;
                    idle = 0;
                } else {
                    ++idle;
                }
            }
            if (out_of_time()) break;
        }
    }

    std::vector<LineSolution> lines;
    for (WorkerMask t : best_teams) {
        const auto& line = cache.solve(t);
        lines.push_back(*line);
    }
    result.best = make_parallel_solution(inst, std::move(lines), params.k_max);
    return result;
}

}  // namespace palwabp
