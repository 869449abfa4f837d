#include "palwabp/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "palwabp/rng.hpp"

namespace palwabp {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + what);
}

// Strips comments and surrounding whitespace; returns false for blank lines.
bool clean_line(std::string& line) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return false;
    auto last = line.find_last_not_of(" \t\r\n");
    line = line.substr(first, last - first + 1);
    return true;
}

struct Reader {
    std::istream& in;
    int line_no = 0;

    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++line_no;
            if (clean_line(line)) return true;
        }
        return false;
    }
};

struct RawInstance {
    int tasks = 0;
    std::vector<std::pair<int, int>> precedence;
    std::vector<std::string> workers;
    std::vector<std::vector<int>> times;
};

RawInstance parse_raw(std::istream& in) {
    Reader rd{in};
    RawInstance raw;
    std::string line;

    if (!rd.next(line)) fail(rd.line_no, "expected 'tasks <n>'");
    {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw >> raw.tasks) || kw != "tasks" || raw.tasks <= 0)
            fail(rd.line_no, "expected 'tasks <n>'");
    }

    if (!rd.next(line)) fail(rd.line_no, "expected 'workers <m>'");
    int worker_count = 0;
    {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw >> worker_count) || kw != "workers" || worker_count <= 0)
            fail(rd.line_no, "expected 'workers <m>'");
    }

    if (!rd.next(line) || line != "precedence")
        fail(rd.line_no, "expected 'precedence' section");
    while (true) {
        if (!rd.next(line)) fail(rd.line_no, "precedence section not closed with 'end'");
        if (line == "end") break;
        std::istringstream ls(line);
        int i = 0, j = 0;
        std::string extra;
        if (!(ls >> i >> j) || (ls >> extra))
            fail(rd.line_no, "expected precedence pair '<i> <j>'");
        if (i < 1 || i > raw.tasks || j < 1 || j > raw.tasks)
            fail(rd.line_no, "precedence pair references unknown task");
        raw.precedence.emplace_back(i - 1, j - 1);
    }

    if (!rd.next(line) || line != "times") fail(rd.line_no, "expected 'times' section");
    for (int w = 0; w < worker_count; ++w) {
        if (!rd.next(line)) fail(rd.line_no, "missing time row (expected one per worker)");
        auto colon = line.find(':');
        if (colon == std::string::npos) fail(rd.line_no, "expected '<worker>: <times...>'");
        std::string name = line.substr(0, colon);
        auto name_end = name.find_last_not_of(" \t");
        if (name_end == std::string::npos) fail(rd.line_no, "empty worker name");
        name = name.substr(0, name_end + 1);
        for (const auto& existing : raw.workers)
            if (existing == name) fail(rd.line_no, "duplicate time entry for worker " + name);

        std::istringstream ls(line.substr(colon + 1));
        std::vector<int> row;
        std::string tok;
        while (ls >> tok) {
            if (tok == "-") {
                row.push_back(kInfeasible);
            } else {
                try {
                    std::size_t used = 0;
                    int v = std::stoi(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument(tok);
                    if (v <= 0) fail(rd.line_no, "task times must be positive");
                    row.push_back(v);
                } catch (const std::logic_error&) {
                    fail(rd.line_no, "bad time value '" + tok + "'");
                }
            }
        }
        if (static_cast<int>(row.size()) != raw.tasks)
            fail(rd.line_no, "time row for worker " + name + " has " +
                                 std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(raw.tasks));
        raw.workers.push_back(std::move(name));
        raw.times.push_back(std::move(row));
    }
    if (rd.next(line)) fail(rd.line_no, "unexpected trailing content");
    return raw;
}

}  // namespace

Instance parse_instance(std::istream& in) {
    RawInstance raw = parse_raw(in);
    return Instance::create(raw.tasks, std::move(raw.precedence), std::move(raw.workers),
                            std::move(raw.times));
}

Instance parse_instance_string(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return parse_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
    out << "tasks " << inst.task_count() << "\n";
    out << "workers " << inst.worker_count() << "\n";
    out << "precedence\n";
    for (auto [i, j] : inst.precedence()) out << (i + 1) << " " << (j + 1) << "\n";
    out << "end\n";
    out << "times\n";
    for (int w = 0; w < inst.worker_count(); ++w) {
        out << inst.worker_name(w) << ":";
        for (int i = 0; i < inst.task_count(); ++i) {
            if (inst.can_do(w, i))
                out << " " << inst.time(w, i);
            else
                out << " -";
        }
        out << "\n";
    }
}

std::string instance_to_string(const Instance& inst) {
    std::ostringstream out;
    write_instance(out, inst);
    return out.str();
}

void save_instance(const std::string& path, const Instance& inst) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    write_instance(out, inst);
}

SalbpBase parse_salbp_base(std::istream& in) {
    RawInstance raw = parse_raw(in);
    if (raw.workers.size() != 1)
        throw std::runtime_error("a base file must contain exactly one time row");
    SalbpBase base;
    base.precedence = std::move(raw.precedence);
    base.times = std::move(raw.times[0]);
    for (int t : base.times)
        if (t == kInfeasible)
            throw std::runtime_error("base task times cannot be infeasible");
    return base;
}

SalbpBase load_salbp_base(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open base file: " + path);
    return parse_salbp_base(in);
}

Instance generate_instance(const SalbpBase& base, const GeneratorConfig& cfg) {
    if (cfg.worker_count <= 0)
        throw std::runtime_error("generator: worker count must be positive");
    if (cfg.variability_factor < 1.0)
        throw std::runtime_error("generator: variability factor must be >= 1");
    if (cfg.infeasible_rate < 0.0 || cfg.infeasible_rate >= 1.0)
        throw std::runtime_error("generator: infeasible rate must lie in [0, 1)");

    const int n = static_cast<int>(base.times.size());
    const int m = cfg.worker_count;
    Rng root(cfg.seed);

    std::vector<std::vector<int>> times(m, std::vector<int>(n, kInfeasible));
    for (int w = 0; w < m; ++w) {
        for (int i = 0; i < n; ++i) {
            Rng cell = root.substream(static_cast<std::uint64_t>(w) + 1,
                                      static_cast<std::uint64_t>(i) + 1);
            int lo = base.times[i];
            int hi = static_cast<int>(std::floor(cfg.variability_factor * lo));
            if (cell.uniform01() < cfg.infeasible_rate) continue;  // stays '-'
            times[w][i] = static_cast<int>(cell.uniform_int(lo, hi));
        }
    }
    // Repair: a task nobody can execute gets one worker re-drawn feasible.
    for (int i = 0; i < n; ++i) {
        bool covered = false;
        for (int w = 0; w < m; ++w) covered = covered || times[w][i] != kInfeasible;
        if (covered) continue;
        Rng repair = root.substream(0, static_cast<std::uint64_t>(i) + 1);
        int w = static_cast<int>(repair.uniform_index(static_cast<std::size_t>(m)));
        int lo = base.times[i];
        int hi = static_cast<int>(std::floor(cfg.variability_factor * lo));
        times[w][i] = static_cast<int>(repair.uniform_int(lo, hi));
    }

    std::vector<std::string> names;
    names.reserve(m);
    for (int w = 0; w < m; ++w) names.push_back("W" + std::to_string(w + 1));
    return Instance::create(n, base.precedence, std::move(names), std::move(times));
}

}  // namespace palwabp
