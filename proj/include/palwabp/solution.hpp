#pragma once

#include <string>
#include <vector>

#include "palwabp/instance.hpp"

namespace palwabp {

/// One station: a single worker and the ordered tasks it executes.
struct Station {
    int worker = -1;
    std::vector<int> tasks;
};

/// One serial line executing the full task set, stations ordered left to
/// right. A station may hold zero tasks (idle worker). cycle_time is the
/// maximum station load.
struct LineSolution {
    std::vector<Station> stations;
    Duration cycle_time = 0;

    std::vector<int> team() const {
        std::vector<int> ws;
        ws.reserve(stations.size());
        for (const auto& s : stations) ws.push_back(s.worker);
        return ws;
    }
};

/// A full solution: up to k_max parallel lines partitioning the workers,
/// each line executing every task.
struct ParallelSolution {
    std::vector<LineSolution> lines;
    int k_max = 1;
    double combined_cycle_time = 0.0;
    double combined_throughput = 0.0;  // products per hour
};

/// Per-line and combined production rates.
struct ThroughputReport {
    std::vector<double> line_throughput;  // products per hour
    double combined_throughput = 0.0;
    double combined_cycle_time = 0.0;
};

}  // namespace palwabp
