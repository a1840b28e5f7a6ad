#include "noc3d/taskgraph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>

namespace noc3d {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

TaskGraph::TaskGraph(int core_count) {
    if (core_count < 0)
        throw std::invalid_argument("negative core count");
    cores_.reserve(core_count);
    for (CoreId i = 0; i < core_count; ++i)
        cores_.push_back(Core{i, {}});
}

void TaskGraph::add_arc(CoreId src, CoreId dst, std::int64_t volume, std::int64_t bandwidth) {
    if (!contains(src) || !contains(dst))
        throw std::invalid_argument(fmt::format("arc {}->{} references a core outside 0..{}",
                                                src, dst, core_count() - 1));
    if (src == dst)
        throw std::invalid_argument(fmt::format("self-loop on core {}", src));
    if (volume < 0 || bandwidth < 0)
        throw std::invalid_argument(fmt::format("negative weight on arc {}->{}", src, dst));
    auto [it, inserted] = index_.emplace(std::pair{src, dst}, arcs_.size());
    if (!inserted)
        throw std::invalid_argument(fmt::format("duplicate arc {}->{}", src, dst));
    arcs_.push_back(Arc{src, dst, volume, bandwidth});
}

void TaskGraph::set_label(CoreId c, std::string label) {
    if (!contains(c))
        throw std::invalid_argument(fmt::format("no core {}", c));
    cores_[c].label = std::move(label);
}

std::int64_t TaskGraph::volume(CoreId src, CoreId dst) const {
    auto it = index_.find({src, dst});
    return it == index_.end() ? 0 : arcs_[it->second].volume;
}

bool TaskGraph::has_arc(CoreId src, CoreId dst) const {
    return index_.contains({src, dst});
}

bool operator==(const TaskGraph& a, const TaskGraph& b) {
    if (a.core_count() != b.core_count() || a.arcs_.size() != b.arcs_.size())
        return false;
    // index_ is ordered by (src, dst), so walking it gives a canonical arc order.
    auto ia = a.index_.begin();
    auto ib = b.index_.begin();
    for (; ia != a.index_.end(); ++ia, ++ib) {
        if (a.arcs_[ia->second] != b.arcs_[ib->second])
            return false;
    }
    return true;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::int64_t parse_int(std::string_view tok, std::size_t line, const char* what) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError(line, fmt::format("malformed {} '{}'", what, tok));
    return v;
}

} // namespace

TaskGraph parse_graph(std::string_view text) {
    TaskGraph g;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        auto tok = split_ws(line);
        if (!have_header) {
            if (tok.size() != 2 || tok[0] != "cores")
                throw ParseError(line_no, "expected 'cores <N>' header");
            auto n = parse_int(tok[1], line_no, "core count");
            if (n < 1)
                throw ParseError(line_no, "core count must be positive");
            g = TaskGraph(static_cast<int>(n));
            have_header = true;
            continue;
        }
        if (tok[0] != "edge" || tok.size() != 5)
            throw ParseError(line_no, "expected 'edge <src> <dst> <volume> <bandwidth>'");
        auto src = parse_int(tok[1], line_no, "source id");
        auto dst = parse_int(tok[2], line_no, "destination id");
        auto vol = parse_int(tok[3], line_no, "volume");
        auto bw = parse_int(tok[4], line_no, "bandwidth");
        if (src < 0 || src >= g.core_count() || dst < 0 || dst >= g.core_count())
            throw ParseError(line_no, fmt::format("core id out of range 0..{}", g.core_count() - 1));
        if (vol < 0 || bw < 0)
            throw ParseError(line_no, "negative weight");
        if (src == dst)
            throw ParseError(line_no, fmt::format("self-loop on core {}", src));
        if (g.has_arc(static_cast<CoreId>(src), static_cast<CoreId>(dst)))
            throw ParseError(line_no, fmt::format("duplicate arc {}->{}", src, dst));
        g.add_arc(static_cast<CoreId>(src), static_cast<CoreId>(dst), vol, bw);
    }
    if (!have_header)
        throw ParseError(line_no, "missing 'cores <N>' header");
    return g;
}

TaskGraph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error(fmt::format("cannot open graph file '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

std::string serialize_graph(const TaskGraph& g) {
    std::vector<Arc> arcs(g.arcs().begin(), g.arcs().end());
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
        return std::pair{a.src, a.dst} < std::pair{b.src, b.dst};
    });
    std::string out = fmt::format("cores {}\n", g.core_count());
    for (const auto& a : arcs)
        out += fmt::format("edge {} {} {} {}\n", a.src, a.dst, a.volume, a.bandwidth);
    return out;
}

static void require_core(const TaskGraph& g, CoreId c) {
    if (!g.contains(c))
        throw std::invalid_argument(fmt::format("invalid core id {}", c));
}

int out_degree(const TaskGraph& g, CoreId c) {
    require_core(g, c);
    return static_cast<int>(std::count_if(g.arcs().begin(), g.arcs().end(),
                                          [c](const Arc& a) { return a.src == c; }));
}

std::int64_t ranking(const TaskGraph& g, CoreId c) {
    require_core(g, c);
    std::int64_t sum = 0;
    for (const auto& a : g.arcs()) {
        if (a.src == c || a.dst == c)
            sum += a.volume;
    }
    return sum;
}

PriorityList priority_order(const TaskGraph& g) {
    const int n = g.core_count();
    if (n == 0)
        throw std::invalid_argument("priority_order: empty graph");
    std::vector<int> od(n, 0);
    std::vector<std::int64_t> rank(n, 0);
    for (const auto& a : g.arcs()) {
        ++od[a.src];
        rank[a.src] += a.volume;
        rank[a.dst] += a.volume;
    }
    PriorityList pl;
    pl.order.resize(n);
    std::iota(pl.order.begin(), pl.order.end(), 0);
    std::sort(pl.order.begin(), pl.order.end(), [&](CoreId a, CoreId b) {
        if (od[a] != od[b])
            return od[a] > od[b];
        if (rank[a] != rank[b])
            return rank[a] > rank[b];
        return a < b;
    });
    return pl;
}

std::vector<std::int64_t> pair_volume_matrix(const TaskGraph& g) {
    const auto n = static_cast<std::size_t>(g.core_count());
    std::vector<std::int64_t> m(n * n, 0);
    for (const auto& a : g.arcs()) {
        m[a.src * n + a.dst] += a.volume;
        m[a.dst * n + a.src] += a.volume;
    }
    return m;
}

TaskGraph induced_subgraph(const TaskGraph& g, std::span<const CoreId> keep) {
    std::vector<int> remap(g.core_count(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        require_core(g, keep[i]);
        if (remap[keep[i]] != -1)
            throw std::invalid_argument(fmt::format("core {} listed twice", keep[i]));
        remap[keep[i]] = static_cast<int>(i);
    }
    TaskGraph sub(static_cast<int>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        sub.set_label(static_cast<CoreId>(i), std::string(g.cores()[keep[i]].label));
    for (const auto& a : g.arcs()) {
        if (remap[a.src] >= 0 && remap[a.dst] >= 0)
            sub.add_arc(remap[a.src], remap[a.dst], a.volume, a.bandwidth);
    }
    return sub;
}

TaskGraph generate_random_graph(const RandomGraphSpec& spec, std::uint64_t seed) {
    if (spec.cores < 1)
        throw std::invalid_argument("random graph needs at least one core");
    const std::int64_t max_arcs = static_cast<std::int64_t>(spec.cores) * (spec.cores - 1);
    if (spec.arcs < 0 || spec.arcs > max_arcs)
        throw std::invalid_argument(
            fmt::format("{} arcs infeasible for {} cores (max {})", spec.arcs, spec.cores, max_arcs));
    if (spec.volume_min > spec.volume_max || spec.bandwidth_min > spec.bandwidth_max ||
        spec.volume_min < 0 || spec.bandwidth_min < 0)
        throw std::invalid_argument("empty or negative weight range");

    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates over all ordered pairs, indexed as src*(N-1)+k.
    std::vector<std::int64_t> pairs(static_cast<std::size_t>(max_arcs));
    std::iota(pairs.begin(), pairs.end(), 0);
    for (int i = 0; i < spec.arcs; ++i) {
        std::uniform_int_distribution<std::int64_t> pick(i, max_arcs - 1);
        std::swap(pairs[i], pairs[pick(rng)]);
    }
    std::vector<std::pair<CoreId, CoreId>> chosen;
    for (int i = 0; i < spec.arcs; ++i) {
        auto src = static_cast<CoreId>(pairs[i] / (spec.cores - 1));
        auto k = static_cast<CoreId>(pairs[i] % (spec.cores - 1));
        chosen.emplace_back(src, k >= src ? k + 1 : k);
    }
    std::sort(chosen.begin(), chosen.end());

    std::uniform_int_distribution<std::int64_t> vol(spec.volume_min, spec.volume_max);
    std::uniform_int_distribution<std::int64_t> bw(spec.bandwidth_min, spec.bandwidth_max);
    TaskGraph g(spec.cores);
    for (auto [s, d] : chosen) {
        auto v = vol(rng);
        g.add_arc(s, d, v, bw(rng));
    }
    return g;
}

} // namespace noc3d
