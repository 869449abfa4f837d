#include <stdexcept>
#include <algorithm>
#include <set>
#include <vector>

#include <doctest.h>

#include "palwabp/objective.hpp"
#include "palwabp/preprocess.hpp"
#include "palwabp/rng.hpp"
#include "palwabp/solution_io.hpp"
#include "palwabp/tabu.hpp"

#include "test_util.hpp"

using namespace palwabp;

namespace {

/// Two independent tasks; a and c can only do the first, b and d only the
/// second. Covering teams are exactly those with one worker of each kind.
Instance two_pools() {
    return testutil::make_instance(
        2, {}, {"a", "b", "c", "d"},
        {{1, -1}, {-1, 1}, {1, -1}, {-1, 1}});
}

/// Chain 1 -> 2 -> 3 where only worker b can do the middle task and only a
/// the outer two: no serial station order works, the instance is infeasible.
Instance infeasible_chain() {
    return testutil::make_instance(3, {{0, 1}, {1, 2}}, {"a", "b"},
                                   {{1, -1, 1}, {-1, 1, -1}});
}

std::size_t find_entry(const WorkerSetCatalog& catalog,
                       const std::vector<std::pair<int, int>>& choices) {
    for (std::size_t i = 0; i < catalog.entries.size(); ++i)
        if (catalog.entries[i].choices == choices) return i;
    REQUIRE_MESSAGE(false, "catalog entry not found");
    return 0;
}

}  // namespace

TEST_CASE("pinned entry seeds the expected partition") {
    Instance inst = testutil::toy5();
    WorkerSetCatalog catalog = worker_sets(inst);
    std::size_t pin = find_entry(catalog, {{0, 0}, {1, 0}});  // team {w1, w2}

    Rng rng(1);
    auto teams = initial_solution(inst, catalog, 2, rng, pin);
    REQUIRE(teams.size() == 2);
    CHECK(teams[0] == workers_to_mask({0, 1}));
    CHECK(teams[1] == workers_to_mask({2}));

    Rng other(42);  // no leftovers here, so the seed cannot matter
    CHECK(initial_solution(inst, catalog, 2, other, pin) == teams);
}

TEST_CASE("random initial partitions always cover every worker") {
    Instance inst = testutil::toy5();
    WorkerSetCatalog catalog = worker_sets(inst);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        auto teams = initial_solution(inst, catalog, 2, rng);
        REQUIRE(!teams.empty());
        CHECK(teams.size() <= 2);
        WorkerMask seen = 0;
        for (WorkerMask t : teams) {
            CHECK((seen & t) == 0);
            seen |= t;
        }
        CHECK(seen == workers_to_mask({0, 1, 2}));
    }
}

TEST_CASE("an empty catalog means no covering team exists") {
    Instance inst = infeasible_chain();
    WorkerSetCatalog catalog = worker_sets(inst);
    CHECK(catalog.entries.empty());

    Rng rng(0);
    CHECK_THROWS_WITH_AS(initial_solution(inst, catalog, 2, rng),
                         doctest::Contains("catalog is empty"), std::runtime_error);
}

TEST_CASE("toy two-line partition has no catalog moves") {
    Instance inst = testutil::toy5();
    WorkerSetCatalog catalog = worker_sets(inst);

    std::vector<WorkerMask> teams{workers_to_mask({0, 1}), workers_to_mask({2})};
    CHECK(neighborhood(teams, catalog).empty());

    std::vector<WorkerMask> single{workers_to_mask({0, 1, 2})};
    CHECK(neighborhood(single, catalog).empty());
}

TEST_CASE("exchanges swap workers between covering teams") {
    Instance inst = two_pools();
    WorkerSetCatalog catalog = worker_sets(inst);
    REQUIRE(catalog.entries.size() == 9);

    std::vector<WorkerMask> teams{workers_to_mask({0, 1}), workers_to_mask({2, 3})};
    auto moves = neighborhood(teams, catalog);
    REQUIRE(moves.size() == 4);

    std::multiset<WorkerMask> swapped;
    for (const Move& m : moves) {
        CHECK(m.kind == MoveKind::Exchange);
        swapped.insert(m.lack | m.excess);

        auto next = teams;
        apply_move(next, m);
        for (WorkerMask t : next) CHECK(catalog.contains_team(t));
    }
    std::multiset<WorkerMask> want{
        workers_to_mask({1, 3}), workers_to_mask({1, 3}),  // b <-> d
        workers_to_mask({0, 2}), workers_to_mask({0, 2}),  // a <-> c
    };
    CHECK(swapped == want);
}

TEST_CASE("transfers move spare workers to other lines") {
    Instance inst = two_pools();
    WorkerSetCatalog catalog = worker_sets(inst);

    std::vector<WorkerMask> teams{workers_to_mask({0, 1, 2}), workers_to_mask({3})};
    auto moves = neighborhood(teams, catalog);
    REQUIRE(moves.size() == 4);

    int transfers = 0, exchanges = 0;
    std::set<WorkerMask> transferred;
    for (const Move& m : moves) {
        if (m.kind == MoveKind::Transfer) {
            ++transfers;
            transferred.insert(m.workers);
            CHECK(m.line_a == 0);
            CHECK(m.line_b == 1);
        } else {
            ++exchanges;
        }
    }
    CHECK(transfers == 2);  // a or c can leave, {b} alone cannot cover
    CHECK(exchanges == 2);
    CHECK(transferred == std::set<WorkerMask>{workers_to_mask({0}),
                                              workers_to_mask({2})});
}

TEST_CASE("apply_move rewrites teams and drops emptied lines") {
    std::vector<WorkerMask> teams{workers_to_mask({0, 1, 2}), workers_to_mask({3})};

    Move transfer;
    transfer.kind = MoveKind::Transfer;
    transfer.workers = workers_to_mask({2});
    transfer.line_a = 0;
    transfer.line_b = 1;
    apply_move(teams, transfer);
    CHECK(teams == std::vector<WorkerMask>{workers_to_mask({0, 1}),
                                           workers_to_mask({2, 3})});

    Move exchange;
    exchange.kind = MoveKind::Exchange;
    exchange.lack = workers_to_mask({3});
    exchange.excess = workers_to_mask({1});
    exchange.line_a = 0;
    exchange.line_b = 1;
    apply_move(teams, exchange);
    CHECK(teams == std::vector<WorkerMask>{workers_to_mask({0, 3}),
                                           workers_to_mask({1, 2})});

    std::vector<WorkerMask> tiny{workers_to_mask({0}), workers_to_mask({1})};
    Move drain;
    drain.kind = MoveKind::Transfer;
    drain.workers = workers_to_mask({0});
    drain.line_a = 0;
    drain.line_b = 1;
    apply_move(tiny, drain);
    CHECK(tiny == std::vector<WorkerMask>{workers_to_mask({0, 1})});
}

TEST_CASE("move fingerprints are invariant under inversion") {
    std::vector<WorkerMask> before{workers_to_mask({0, 1, 2}), workers_to_mask({3})};
    Move transfer;
    transfer.kind = MoveKind::Transfer;
    transfer.workers = workers_to_mask({2});
    transfer.line_a = 0;
    transfer.line_b = 1;
    std::uint64_t fp = move_fingerprint(before, transfer);

    auto after = before;
    apply_move(after, transfer);
    Move back = transfer;
    back.line_a = 1;
    back.line_b = 0;
    CHECK(move_fingerprint(after, back) == fp);

    std::vector<WorkerMask> left{workers_to_mask({0, 1}), workers_to_mask({2, 3})};
    Move swap;
    swap.kind = MoveKind::Exchange;
    swap.lack = workers_to_mask({3});
    swap.excess = workers_to_mask({1});
    swap.line_a = 0;
    swap.line_b = 1;
    std::uint64_t fp2 = move_fingerprint(left, swap);

    Move mirrored;  // the same swap described from the other line
    mirrored.kind = MoveKind::Exchange;
    mirrored.lack = workers_to_mask({1});
    mirrored.excess = workers_to_mask({3});
    mirrored.line_a = 1;
    mirrored.line_b = 0;
    CHECK(move_fingerprint(left, mirrored) == fp2);

    auto flipped = left;
    apply_move(flipped, swap);
    Move undo;
    undo.kind = MoveKind::Exchange;
    undo.lack = workers_to_mask({1});
    undo.excess = workers_to_mask({3});
    undo.line_a = 0;
    undo.line_b = 1;
    CHECK(move_fingerprint(flipped, undo) == fp2);
}

TEST_CASE("tabu search splits the toy instance") {
    Instance inst = testutil::toy5();
    TabuParams params;
    params.k_max = 2;
    params.seed = 0;

    TabuResult res = tabu_search(inst, params);
    CHECK(res.serial_cycle_time == 2);
    CHECK(res.best.combined_cycle_time == doctest::Approx(1.875));
    CHECK(res.best.lines.size() == 2);
    CHECK(validate_solution(inst, res.best).ok);

    REQUIRE(!res.log.empty());
    CHECK(res.log[0].iteration == 0);
    CHECK(res.log[0].event == "serial");
    CHECK(res.log[0].combined_ct == doctest::Approx(2.0));
    for (const auto& row : res.log) {
        bool known = row.event == "serial" || row.event == "initial" ||
                     row.event == "restart-infeasible" || row.event == "transfer" ||
                     row.event == "exchange";
        CHECK(known);
    }

    TabuResult again = tabu_search(inst, params);
    CHECK(solution_to_string(inst, again.best) == solution_to_string(inst, res.best));
}

TEST_CASE("k_max of one degenerates to the serial solve") {
    Instance inst = testutil::toy5();
    TabuParams params;
    params.k_max = 1;

    TabuResult res = tabu_search(inst, params);
    CHECK(res.best.lines.size() == 1);
    CHECK(res.best.combined_cycle_time == doctest::Approx(2.0));
    CHECK(res.iterations == 0);
    CHECK(res.restarts_used == 0);
    CHECK(res.log.size() == 1);
}

TEST_CASE("tabu search reports truly infeasible instances") {
    Instance inst = infeasible_chain();
    TabuParams params;
    params.k_max = 2;
    CHECK_THROWS_WITH_AS(tabu_search(inst, params),
                         doctest::Contains("no solution exists"), std::runtime_error);
}

TEST_CASE("a tiny time limit still yields the serial incumbent") {
    Instance inst = testutil::toy5();
    TabuParams params;
    params.k_max = 2;
    params.time_limit_seconds = 1e-9;

    TabuResult res = tabu_search(inst, params);
    CHECK(res.best.lines.size() == 1);
    CHECK(res.best.combined_cycle_time == doctest::Approx(2.0));
}
