#include "palwabp/solution_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace palwabp {

void write_solution(std::ostream& out, const Instance& inst, const ParallelSolution& sol) {
    for (std::size_t li = 0; li < sol.lines.size(); ++li) {
        const LineSolution& line = sol.lines[li];
        out << "line " << li + 1 << "\n";
        for (std::size_t si = 0; si < line.stations.size(); ++si) {
            const Station& st = line.stations[si];
            out << "station " << si + 1 << " worker " << inst.worker_name(st.worker) << ":";
            Duration load = 0;
            for (int task : st.tasks) {
                out << ' ' << task + 1;
                load += inst.time(st.worker, task);
            }
            out << " # load " << load << "\n";
        }
        out << "cycle " << line.cycle_time << "\n";
    }
    out << "combined " << std::fixed << std::setprecision(3)
        << sol.combined_cycle_time << "\n";
    out.unsetf(std::ios::floatfield);
}

std::string solution_to_string(const Instance& inst, const ParallelSolution& sol) {
    std::ostringstream os;
    write_solution(os, inst, sol);
    return os.str();
}

void save_solution(const std::string& path, const Instance& inst,
                   const ParallelSolution& sol) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_solution(out, inst, sol);
}

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    std::ostringstream os;
    os << "parse error at line " << line_no << ": " << what;
    throw std::runtime_error(os.str());
}

std::string strip(const std::string& raw) {
    std::string s = raw;
    auto hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    auto from = s.find_first_not_of(" \t\r\n");
    if (from == std::string::npos) return "";
    auto to = s.find_last_not_of(" \t\r\n");
    return s.substr(from, to - from + 1);
}

}  // namespace

ParsedSolution parse_solution(std::istream& in, const Instance& inst) {
    ParsedSolution result;
    std::vector<LineSolution>& lines = result.solution.lines;
    bool line_open = false;
    bool combined_seen = false;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string text = strip(raw);
        if (text.empty()) continue;
        std::istringstream row(text);
        std::string keyword;
        row >> keyword;

        if (keyword == "line") {
            int k = 0;
            if (!(row >> k)) fail(line_no, "expected a line number");
            if (k != static_cast<int>(lines.size()) + 1)
                fail(line_no, "lines must be numbered sequentially");
            if (line_open) fail(line_no, "previous line is missing its cycle value");
            lines.emplace_back();
            line_open = true;
        } else if (keyword == "station") {
            if (!line_open) fail(line_no, "station outside a line section");
            int s = 0;
            std::string marker;
            if (!(row >> s >> marker) || marker != "worker")
                fail(line_no, "expected 'station <s> worker <name>: ...'");
            if (s != static_cast<int>(lines.back().stations.size()) + 1)
                fail(line_no, "stations must be numbered sequentially");
            auto colon = text.find(':');
            if (colon == std::string::npos) fail(line_no, "missing ':' after worker name");
            auto name_from = text.find("worker") + 6;
            std::string name = strip(text.substr(name_from, colon - name_from));
            int worker = inst.worker_index(name);
            if (worker < 0) fail(line_no, "unknown worker '" + name + "'");
            Station st;
            st.worker = worker;
            std::istringstream tasks(text.substr(colon + 1));
            int task = 0;
            while (tasks >> task) {
                if (task < 1 || task > inst.task_count())
                    fail(line_no, "task id out of range");
                st.tasks.push_back(task - 1);
            }
            if (!tasks.eof()) fail(line_no, "malformed task list");
            lines.back().stations.push_back(std::move(st));
        } else if (keyword == "cycle") {
            if (!line_open) fail(line_no, "cycle outside a line section");
            Duration ct = 0;
            if (!(row >> ct) || ct < 0) fail(line_no, "expected a nonnegative cycle time");
            lines.back().cycle_time = ct;
            line_open = false;
        } else if (keyword == "combined") {
            double value = 0.0;
            if (!(row >> value)) fail(line_no, "expected the combined cycle time");
            result.claimed_combined = value;
            combined_seen = true;
        } else {
            fail(line_no, "unknown keyword '" + keyword + "'");
        }
    }

    if (line_open) fail(line_no, "last line is missing its cycle value");
    if (lines.empty()) fail(line_no, "no lines in solution");
    if (!combined_seen) fail(line_no, "missing combined value");
    result.solution.k_max = static_cast<int>(lines.size());
    result.solution.combined_cycle_time = result.claimed_combined;
    return result;
}

ParsedSolution load_solution(const std::string& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return parse_solution(in, inst);
}

}  // namespace palwabp
