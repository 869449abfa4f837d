#include "palwabp/preprocess.hpp"

#include <ostream>
#include <stdexcept>

namespace palwabp {

namespace {

void check_dims(const Instance& inst) {
    if (inst.task_count() > 64 || inst.worker_count() > 64)
        throw std::runtime_error("preprocessing supports at most 64 tasks and 64 workers");
}

}  // namespace

std::vector<TaskSet> task_sets(const Instance& inst, int worker) {
    check_dims(inst);
    const int n = inst.task_count();

    TaskMask infeasible = 0;
    for (int i : inst.incompatible(worker)) infeasible |= TaskMask{1} << i;

    // Closure masks: pred_of[i] = tasks that must precede i, succ_of[i] = the
    // tasks i must precede.
    std::vector<TaskMask> pred_of(n, 0), succ_of(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (inst.precedes(i, j)) {
                succ_of[i] |= TaskMask{1} << j;
                pred_of[j] |= TaskMask{1} << i;
            }

    std::vector<TaskSet> result;
    TaskMask executed_before = 0;  // infeasible tasks assumed done at earlier stations

    for (int iter = 0; iter <= n; ++iter) {
        if (iter == n)
            throw std::logic_error("task set generation exceeded its iteration cap");

        // Executable now: feasible tasks that do not precede an
        // already-executed task and do not succeed a pending infeasible one.
        TaskMask pending = infeasible & ~executed_before;
        TaskMask s = 0;
        for (int i = 0; i < n; ++i) {
            TaskMask bit = TaskMask{1} << i;
            if (infeasible & bit) continue;
            if (succ_of[i] & executed_before) continue;
            if (pred_of[i] & pending) continue;
            s |= bit;
        }
        result.push_back({s, executed_before == 0});

        // Advance the frontier: infeasible tasks whose turn has come (their
        // immediate predecessor was emitted or already skipped) join the
        // executed-before set, which grows monotonically until it settles.
        TaskMask next = executed_before;
        for (int i = 0; i < n; ++i) {
            TaskMask bit = TaskMask{1} << i;
            if (!((s | executed_before) & bit)) continue;
            for (int j : inst.immediate_successors(i))
                if (infeasible & (TaskMask{1} << j)) next |= TaskMask{1} << j;
        }
        if (next == executed_before) break;
        executed_before = next;
    }

    // Keep the list duplicate-free (distinct sets per worker).
    std::vector<TaskSet> unique;
    for (const auto& ts : result) {
        bool dup = false;
        for (const auto& u : unique)
            dup = dup || (u.tasks == ts.tasks && u.starts_line == ts.starts_line);
        if (!dup) unique.push_back(ts);
    }
    return unique;
}

namespace {

struct Enumerator {
    const Instance& inst;
    WorkerSetCatalog& catalog;
    TaskMask all_tasks;
    // union of every set of workers >= w, used to prune branches that can no
    // longer complete coverage
    std::vector<TaskMask> tail_union;
    std::vector<std::pair<int, int>> choices;

    void record() {
        if (catalog.entries.size() >= catalog.limit) {
            catalog.overflowed = true;  // another covering exists beyond the cap
            return;
        }
        WorkerSetEntry e;
        e.choices = choices;
        for (auto [w, _] : choices) e.workers |= WorkerMask{1} << w;
        if (e.workers == 0) return;  // nothing chosen can cover a nonempty task set
        catalog.team_index.insert(e.workers);
        catalog.entries.push_back(std::move(e));
    }

    void walk(int w, TaskMask covered) {
        if (catalog.overflowed) return;
        if (w == inst.worker_count()) {
            if (covered == all_tasks) record();
            return;
        }
        if ((covered | tail_union[w]) != all_tasks) return;  // cannot complete
        for (std::size_t s = 0; s < catalog.sets_per_worker[w].size(); ++s) {
            choices.emplace_back(w, static_cast<int>(s));
            walk(w + 1, covered | catalog.sets_per_worker[w][s].tasks);
            choices.pop_back();
            if (catalog.overflowed) return;
        }
        walk(w + 1, covered);  // worker unused
    }
};

}  // namespace

WorkerSetCatalog worker_sets(const Instance& inst, std::size_t limit) {
    check_dims(inst);
    WorkerSetCatalog catalog;
    catalog.limit = limit;
    catalog.sets_per_worker.reserve(inst.worker_count());
    for (int w = 0; w < inst.worker_count(); ++w)
        catalog.sets_per_worker.push_back(task_sets(inst, w));

    TaskMask all = inst.task_count() == 64 ? ~TaskMask{0}
                                           : (TaskMask{1} << inst.task_count()) - 1;
    Enumerator en{inst, catalog, all, {}, {}};
    en.tail_union.assign(inst.worker_count() + 1, 0);
    for (int w = inst.worker_count() - 1; w >= 0; --w) {
        TaskMask u = en.tail_union[w + 1];
        for (const auto& ts : catalog.sets_per_worker[w]) u |= ts.tasks;
        en.tail_union[w] = u;
    }
    en.walk(0, 0);
    return catalog;
}

void dump_catalog(std::ostream& out, const Instance& inst, const WorkerSetCatalog& catalog) {
    for (const auto& entry : catalog.entries) {
        out << "workers: ";
        bool first = true;
        for (auto [w, _] : entry.choices) {
            if (!first) out << ",";
            out << inst.worker_name(w);
            first = false;
        }
        out << " | sets: ";
        first = true;
        for (auto [w, s] : entry.choices) {
            if (!first) out << ";";
            out << "{";
            TaskMask tasks = catalog.sets_per_worker[w][s].tasks;
            bool ft = true;
            for (int i = 0; i < inst.task_count(); ++i) {
                if (!(tasks & (TaskMask{1} << i))) continue;
                if (!ft) out << ",";
                out << (i + 1);
                ft = false;
            }
            out << "}";
            first = false;
        }
        out << "\n";
    }
    if (catalog.overflowed) out << "# catalog truncated at " << catalog.limit << " entries\n";
}

}  // namespace palwabp
