#include <stdexcept>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "palwabp/preprocess.hpp"

#include "test_util.hpp"

using namespace palwabp;

namespace {

TaskMask mask1(std::initializer_list<int> tasks_1based) {
    TaskMask m = 0;
    for (int t : tasks_1based) m |= TaskMask{1} << (t - 1);
    return m;
}

}  // namespace

TEST_CASE("worker mask helpers") {
    std::vector<int> ws{0, 2, 5};
    WorkerMask m = workers_to_mask(ws);
    CHECK(m == 0b100101);
    CHECK(mask_to_workers(m) == ws);
    CHECK(workers_to_mask({}) == 0);
}

TEST_CASE("task sets of the toy workers") {
    Instance inst = testutil::toy5();

    auto w1 = task_sets(inst, 0);
    REQUIRE(w1.size() == 2);
    CHECK(w1[0].tasks == mask1({1, 3, 5}));
    CHECK(w1[0].starts_line);
    CHECK(w1[1].tasks == mask1({3, 4, 5}));
    CHECK_FALSE(w1[1].starts_line);

    auto w2 = task_sets(inst, 1);
    REQUIRE(w2.size() == 2);
    CHECK(w2[0].tasks == mask1({1, 2, 4}));
    CHECK(w2[0].starts_line);
    CHECK(w2[1].tasks == mask1({2, 4, 5}));
    CHECK_FALSE(w2[1].starts_line);

    auto w3 = task_sets(inst, 2);
    REQUIRE(w3.size() == 1);
    CHECK(w3[0].tasks == mask1({1, 2, 3, 4, 5}));
    CHECK(w3[0].starts_line);
}

TEST_CASE("a worker without incompatible tasks has one full task set") {
    Instance inst = testutil::heskia();
    auto sets = task_sets(inst, 0);  // W1 executes everything
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].tasks == (TaskMask{1} << 28) - 1);
    CHECK(sets[0].starts_line);
}

TEST_CASE("toy worker-set catalog holds exactly the covering combinations") {
    Instance inst = testutil::toy5();
    WorkerSetCatalog catalog = worker_sets(inst);

    CHECK_FALSE(catalog.overflowed);
    REQUIRE(catalog.entries.size() == 12);

    using Choices = std::vector<std::pair<int, int>>;
    std::set<Choices> got;
    for (const auto& e : catalog.entries) got.insert(e.choices);

    std::set<Choices> want{
        {{0, 0}, {1, 0}, {2, 0}}, {{0, 0}, {1, 0}},
        {{0, 0}, {1, 1}, {2, 0}}, {{0, 0}, {1, 1}},
        {{0, 0}, {2, 0}},
        {{0, 1}, {1, 0}, {2, 0}}, {{0, 1}, {1, 0}},
        {{0, 1}, {1, 1}, {2, 0}},
        {{0, 1}, {2, 0}},
        {{1, 0}, {2, 0}}, {{1, 1}, {2, 0}},
        {{2, 0}},
    };
    CHECK(got == want);

    for (const auto& e : catalog.entries) {
        TaskMask covered = 0;
        WorkerMask team = 0;
        for (auto [w, s] : e.choices) {
            covered |= catalog.sets_per_worker[w][s].tasks;
            team |= WorkerMask{1} << w;
        }
        CHECK(covered == mask1({1, 2, 3, 4, 5}));
        CHECK(team == e.workers);
    }
}

TEST_CASE("team membership answers coverage queries") {
    Instance inst = testutil::toy5();
    WorkerSetCatalog catalog = worker_sets(inst);

    CHECK(catalog.contains_team(workers_to_mask({0, 1})));
    CHECK(catalog.contains_team(workers_to_mask({2})));
    CHECK(catalog.contains_team(workers_to_mask({0, 2})));
    CHECK(catalog.contains_team(workers_to_mask({1, 2})));
    CHECK(catalog.contains_team(workers_to_mask({0, 1, 2})));
    CHECK_FALSE(catalog.contains_team(workers_to_mask({0})));
    CHECK_FALSE(catalog.contains_team(workers_to_mask({1})));
    CHECK_FALSE(catalog.contains_team(0));
}

TEST_CASE("catalog entry cap marks overflow only when entries are lost") {
    Instance inst = testutil::toy5();

    WorkerSetCatalog cut = worker_sets(inst, 5);
    CHECK(cut.entries.size() == 5);
    CHECK(cut.overflowed);

    WorkerSetCatalog tight = worker_sets(inst, 12);
    CHECK(tight.entries.size() == 12);
    CHECK_FALSE(tight.overflowed);

    WorkerSetCatalog short_one = worker_sets(inst, 11);
    CHECK(short_one.entries.size() == 11);
    CHECK(short_one.overflowed);
}

TEST_CASE("benchmark catalog includes the published line teams") {
    Instance inst = testutil::heskia();
    WorkerSetCatalog catalog = worker_sets(inst);

    CHECK_FALSE(catalog.overflowed);
    CHECK(catalog.entries.size() > 0);

    const int W1 = 0, W2 = 1, W3 = 2, W4 = 3, W5 = 4, W6 = 5, W7 = 6;
    WorkerMask light = workers_to_mask({W1, W4, W5, W7});
    WorkerMask dark = workers_to_mask({W2, W3, W6});
    CHECK(catalog.contains_team(light));
    CHECK(catalog.contains_team(dark));

    // The two teams partition the workers, so a two-line split exists.
    WorkerMask full = workers_to_mask({0, 1, 2, 3, 4, 5, 6});
    CHECK(catalog.contains_team(full & ~light));

    std::size_t bad = 0;
    for (const auto& e : catalog.entries) {
        TaskMask covered = 0;
        int last_worker = -1;
        bool ok = true;
        for (auto [w, s] : e.choices) {
            ok = ok && w > last_worker;  // ascending, one choice per worker
            last_worker = w;
            ok = ok && s >= 0 && s < static_cast<int>(catalog.sets_per_worker[w].size());
            if (!ok) break;
            covered |= catalog.sets_per_worker[w][s].tasks;
        }
        if (!ok || covered != (TaskMask{1} << 28) - 1) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("catalog dump format") {
    Instance inst = testutil::toy5();
    WorkerSetCatalog catalog = worker_sets(inst);

    std::ostringstream out;
    dump_catalog(out, inst, catalog);
    std::string text = out.str();

    CHECK(text.rfind("workers: w1,w2,w3 | sets: {1,3,5};{1,2,4};{1,2,3,4,5}\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == 12);

    WorkerSetCatalog cut = worker_sets(inst, 3);
    std::ostringstream out2;
    dump_catalog(out2, inst, cut);
    CHECK(out2.str().find("# catalog truncated at 3 entries") != std::string::npos);
}

TEST_CASE("mask preprocessing is limited to 64 tasks") {
    Instance big = testutil::make_instance(65, {}, {"a"},
                                           {std::vector<int>(65, 1)});
    CHECK_THROWS_WITH_AS(task_sets(big, 0), doctest::Contains("at most 64"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(worker_sets(big), doctest::Contains("at most 64"),
                         std::runtime_error);
}
