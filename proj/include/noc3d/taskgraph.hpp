#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace noc3d {

using CoreId = int;

// Raised by parse_graph; carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct Core {
    CoreId id = 0;
    std::string label;
};

// Directed communication arc. volume is in bits, bandwidth in bits/s.
struct Arc {
    CoreId src = 0;
    CoreId dst = 0;
    std::int64_t volume = 0;
    std::int64_t bandwidth = 0;

    friend bool operator==(const Arc&, const Arc&) = default;
};

// Application characterization graph: cores with ids 0..N-1 and at most one
// arc per ordered pair. Cycles are allowed.
class TaskGraph {
public:
    TaskGraph() = default;
    explicit TaskGraph(int core_count);

    // Throws std::invalid_argument on self-loops, duplicates, bad ids or
    // negative weights.
    void add_arc(CoreId src, CoreId dst, std::int64_t volume, std::int64_t bandwidth);
    void set_label(CoreId c, std::string label);

    int core_count() const noexcept { return static_cast<int>(cores_.size()); }
    std::span<const Core> cores() const noexcept { return cores_; }
    std::span<const Arc> arcs() const noexcept { return arcs_; }
    bool contains(CoreId c) const noexcept { return c >= 0 && c < core_count(); }

    // Volume of arc src->dst, 0 if absent.
    std::int64_t volume(CoreId src, CoreId dst) const;
    bool has_arc(CoreId src, CoreId dst) const;

    friend bool operator==(const TaskGraph& a, const TaskGraph& b);

private:
    std::vector<Core> cores_;
    std::vector<Arc> arcs_;
    std::map<std::pair<CoreId, CoreId>, std::size_t> index_;
};

struct PriorityList {
    std::vector<CoreId> order;
};

TaskGraph parse_graph(std::string_view text);
TaskGraph read_graph_file(const std::filesystem::path& path);
// Same line format parse_graph accepts; arcs sorted by (src, dst).
std::string serialize_graph(const TaskGraph& g);

int out_degree(const TaskGraph& g, CoreId c);
// Total volume sent to and received from every other core.
std::int64_t ranking(const TaskGraph& g, CoreId c);
// Out-degree descending, then ranking descending, then id ascending.
PriorityList priority_order(const TaskGraph& g);

// Symmetric N x N matrix of volume(i,j) + volume(j,i), row-major.
std::vector<std::int64_t> pair_volume_matrix(const TaskGraph& g);

// Subgraph on `keep` (new id i is keep[i]); only arcs with both ends kept.
TaskGraph induced_subgraph(const TaskGraph& g, std::span<const CoreId> keep);

struct RandomGraphSpec {
    int cores = 0;
    int arcs = 0;
    std::int64_t volume_min = 10;
    std::int64_t volume_max = 1000;
    std::int64_t bandwidth_min = 1;
    std::int64_t bandwidth_max = 100;
};

TaskGraph generate_random_graph(const RandomGraphSpec& spec, std::uint64_t seed);

} // namespace noc3d
