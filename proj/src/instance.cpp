#include "palwabp/instance.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace palwabp {

int Instance::worker_index(const std::string& name) const {
    for (int w = 0; w < worker_count(); ++w) {
        if (workers_[w] == name) return w;
    }
    return -1;
}

Instance Instance::create(int task_count,
                          std::vector<std::pair<int, int>> precedence,
                          std::vector<std::string> workers,
                          std::vector<std::vector<int>> times) {
    if (task_count <= 0) throw std::runtime_error("instance must have at least one task");
    if (workers.empty()) throw std::runtime_error("instance must have at least one worker");
    if (times.size() != workers.size())
        throw std::runtime_error("time matrix row count does not match worker count");
    for (std::size_t w = 0; w < times.size(); ++w) {
        if (static_cast<int>(times[w].size()) != task_count)
            throw std::runtime_error("time matrix row for worker " + workers[w] +
                                     " does not match task count");
        for (int i = 0; i < task_count; ++i) {
            int p = times[w][i];
            if (p != kInfeasible && p <= 0)
                throw std::runtime_error("task times must be positive integers (worker " +
                                         workers[w] + ", task " + std::to_string(i + 1) + ")");
        }
    }
    for (std::size_t w = 0; w < workers.size(); ++w) {
        for (std::size_t v = w + 1; v < workers.size(); ++v) {
            if (workers[w] == workers[v])
                throw std::runtime_error("duplicate time entry for worker " + workers[w]);
        }
    }

    Instance inst;
    inst.task_count_ = task_count;
    inst.workers_ = std::move(workers);
    inst.times_ = std::move(times);
    inst.incompatible_.assign(inst.workers_.size(), {});
    for (std::size_t w = 0; w < inst.workers_.size(); ++w)
        for (int i = 0; i < task_count; ++i)
            if (inst.times_[w][i] == kInfeasible) inst.incompatible_[w].push_back(i);

    const int n = task_count;
    std::set<std::pair<int, int>> edge_set;
    for (auto [i, j] : precedence) {
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::runtime_error("precedence edge references unknown task");
        if (i == j) throw std::runtime_error("precedence cycle: task depends on itself");
        edge_set.insert({i, j});
    }

    std::vector<std::vector<int>> adj(n);
    std::vector<int> indeg(n, 0);
    for (auto [i, j] : edge_set) {
        adj[i].push_back(j);
        ++indeg[j];
    }

    // Canonical topological order: repeatedly take the lowest-index ready task.
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push(i);
    std::vector<int> indeg_work = indeg;
    inst.topo_.reserve(n);
    while (!ready.empty()) {
        int i = ready.top();
        ready.pop();
        inst.topo_.push_back(i);
        for (int j : adj[i])
            if (--indeg_work[j] == 0) ready.push(j);
    }
    if (static_cast<int>(inst.topo_.size()) != n)
        throw std::runtime_error("precedence cycle detected");
    inst.topo_rank_.assign(n, 0);
    for (int r = 0; r < n; ++r) inst.topo_rank_[inst.topo_[r]] = r;

    // Transitive closure, processed in reverse topological order.
    inst.closure_.assign(static_cast<std::size_t>(n) * n, 0);
    auto closed = [&](int i, int j) -> std::uint8_t& {
        return inst.closure_[static_cast<std::size_t>(i) * n + j];
    };
    for (int r = n - 1; r >= 0; --r) {
        int i = inst.topo_[r];
        for (int j : adj[i]) {
            closed(i, j) = 1;
            for (int k = 0; k < n; ++k)
                if (closed(j, k)) closed(i, k) = 1;
        }
    }

    // Transitive reduction: drop (i,j) if some other successor of i reaches j.
    inst.succ_.assign(n, {});
    inst.pred_.assign(n, {});
    for (auto [i, j] : edge_set) {
        bool redundant = false;
        for (int k : adj[i]) {
            if (k != j && closed(k, j)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) inst.reduced_.emplace_back(i, j);
    }
    std::sort(inst.reduced_.begin(), inst.reduced_.end());
    for (auto [i, j] : inst.reduced_) {
        inst.succ_[i].push_back(j);
        inst.pred_[j].push_back(i);
    }

    inst.succ_count_.assign(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (closed(i, j)) ++inst.succ_count_[i];

    inst.min_time_.assign(n, 0);
    inst.min_time_overall_ = 0;
    inst.max_time_sum_ = 0;
    Duration overall = 0;
    bool any = false;
    for (int i = 0; i < n; ++i) {
        int mn = 0, mx = 0;
        bool covered = false;
        for (int w = 0; w < inst.worker_count(); ++w) {
            int p = inst.times_[w][i];
            if (p == kInfeasible) continue;
            if (!covered || p < mn) mn = p;
            if (!covered || p > mx) mx = p;
            covered = true;
        }
        if (!covered)
            throw std::runtime_error("uncoverable task " + std::to_string(i + 1) +
                                     ": no worker can execute it");
        inst.min_time_[i] = mn;
        inst.max_time_sum_ += mx;
        if (!any || mn < overall) overall = mn;
        any = true;
    }
    inst.min_time_overall_ = overall;
    return inst;
}

}  // namespace palwabp
