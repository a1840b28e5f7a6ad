#include "noc3d/harness.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace noc3d {

Mode parse_mode(std::string_view name) {
    if (name == "map") return Mode::map;
    if (name == "dynamic") return Mode::dynamic;
    if (name == "cluster") return Mode::cluster;
    if (name == "pso") return Mode::pso;
    if (name == "cluster-pso") return Mode::cluster_pso;
    throw std::invalid_argument(fmt::format("unknown mode '{}'", name));
}

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::map: return "map";
    case Mode::dynamic: return "dynamic";
    case Mode::cluster: return "cluster";
    case Mode::pso: return "pso";
    case Mode::cluster_pso: return "cluster-pso";
    }
    return "?";
}

static std::string algo_label(const RunConfig& cfg) {
    switch (cfg.mode) {
    case Mode::dynamic: return "ddmap";
    case Mode::pso: return "pso";
    default: return std::string(to_string(cfg.algo));
    }
}

static std::string benchmark_name(const RunConfig& cfg) {
    if (!cfg.benchmark.empty())
        return cfg.benchmark;
    return cfg.graph_path.stem().string();
}

RunResult run_pipeline(const TaskGraph& g, const RunConfig& cfg) {
    cfg.energy.validate();
    const Mesh3D mesh(cfg.mesh_n);
    PsoParams pso = cfg.pso;
    pso.seed = cfg.seed;

    const auto start = std::chrono::steady_clock::now();
    RunResult res;
    switch (cfg.mode) {
    case Mode::map:
        res.placement = map_cores(g, mesh, cfg.algo);
        break;
    case Mode::dynamic:
        res.placement = dynamic_schedule(g, mesh).placement();
        break;
    case Mode::cluster:
        res.placement = cluster_schedule(g, mesh, cfg.algo).schedule.placement();
        break;
    case Mode::pso: {
        std::optional<Mapping> seed;
        if (cfg.seed_mapping) {
            std::ifstream in(*cfg.seed_mapping);
            if (!in)
                throw std::runtime_error(
                    fmt::format("cannot open seed mapping '{}'", cfg.seed_mapping->string()));
            std::ostringstream ss;
            ss << in.rdbuf();
            seed = parse_artifact(ss.str());
        }
        auto r = pso_optimize(g, mesh, pso, cfg.objective, cfg.energy, seed);
        res.placement = std::move(r.mapping);
        res.trace = std::move(r.trace);
        break;
    }
    case Mode::cluster_pso: {
        auto cs = cluster_schedule(g, mesh, cfg.algo);
        auto r = pso_optimize(cs.cluster_level, mesh, pso, cfg.objective, cfg.energy,
                              cs.cluster_mapping);
        res.placement = expand_cluster_mapping(cs.clusters, mesh, r.mapping).placement();
        res.trace = std::move(r.trace);
        break;
    }
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;

    const auto eval = evaluate(g, mesh, res.placement, cfg.energy);
    res.row = ReportRow{benchmark_name(cfg),
                        algo_label(cfg),
                        std::string(to_string(cfg.mode)),
                        eval.total_energy,
                        eval.comm_cost,
                        eval.avg_latency,
                        eval.eta,
                        std::chrono::duration<double, std::milli>(elapsed).count(),
                        cfg.seed};
    res.artifact = format_artifact(cfg, res.row, res.placement);
    return res;
}

RunResult run_benchmark(const RunConfig& cfg, CsvWriter* csv) {
    const auto g = read_graph_file(cfg.graph_path);
    auto res = run_pipeline(g, cfg);
    if (cfg.out_dir) {
        std::filesystem::create_directories(*cfg.out_dir);
        const auto path = *cfg.out_dir / artifact_file_name(res.row);
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
        out << res.artifact;
    }
    if (csv)
        csv->append(res.row);
    return res;
}

std::vector<RunResult> run_batch(const std::vector<RunConfig>& configs, CsvWriter* csv,
                                 unsigned threads) {
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<RunResult> results(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                results[i] = run_benchmark(configs[i], nullptr);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, configs.size()); ++t)
            pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (errors[i])
            std::rethrow_exception(errors[i]);
        if (csv)
            csv->append(results[i].row);
    }
    return results;
}

std::string artifact_file_name(const ReportRow& row) {
    return fmt::format("{}.{}.{}.map", row.benchmark, row.mode, row.algo);
}

std::string format_artifact(const RunConfig& cfg, const ReportRow& row, const Mapping& placement) {
    std::string out = "# noc3d mapping\n";
    out += fmt::format("# benchmark {}\n", row.benchmark);
    out += fmt::format("# graph {}\n", cfg.graph_path.string());
    out += fmt::format("# mesh {}\n", cfg.mesh_n);
    out += fmt::format("# mode {}\n", row.mode);
    out += fmt::format("# algo {}\n", row.algo);
    out += fmt::format("# objective {}\n", to_string(cfg.objective));
    out += fmt::format("# seed {}\n", cfg.seed);
    out += fmt::format("# e-switch {} e-link {} rho {}\n", cfg.energy.e_switch_bit,
                       cfg.energy.e_link_bit, cfg.energy.rho);
    if (cfg.mode == Mode::pso || cfg.mode == Mode::cluster_pso)
        out += fmt::format("# pso c1 {} c2 {} w {} swarm {} simulations {} evals {}\n",
                           cfg.pso.c1, cfg.pso.c2, cfg.pso.w, cfg.pso.swarm_size,
                           cfg.pso.max_simulations, cfg.pso.max_evals);
    for (std::size_t c = 0; c < placement.size(); ++c)
        out += fmt::format("core {} -> tile {}\n", c, placement.tile_of(static_cast<CoreId>(c)));
    return out;
}

Mapping parse_artifact(std::string_view text) {
    std::map<int, TileId> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string kw_core, arrow, kw_tile, extra;
        long core = -1, tile = -1;
        if (!(ls >> kw_core))
            continue;
        if (kw_core != "core" || !(ls >> core >> arrow >> kw_tile >> tile) || arrow != "->" ||
            kw_tile != "tile" || (ls >> extra))
            throw ParseError(line_no, "expected 'core <id> -> tile <id>'");
        if (core < 0 || tile < 0)
            throw ParseError(line_no, "negative id");
        if (!entries.emplace(static_cast<int>(core), static_cast<TileId>(tile)).second)
            throw ParseError(line_no, fmt::format("core {} assigned twice", core));
    }
    std::vector<TileId> tiles;
    for (const auto& [core, tile] : entries) {
        if (core != static_cast<int>(tiles.size()))
            throw std::runtime_error(fmt::format("mapping artifact skips core {}", tiles.size()));
        tiles.push_back(tile);
    }
    return Mapping(std::move(tiles));
}

void audit_row(const TaskGraph& g, const RunConfig& cfg, std::string_view artifact,
               const ReportRow& row) {
    const auto placement = parse_artifact(artifact);
    const auto eval = evaluate(g, Mesh3D(cfg.mesh_n), placement, cfg.energy);
    if (eval.total_energy != row.total_energy)
        throw std::runtime_error(fmt::format("{}: energy {} != reported {}", row.benchmark,
                                             eval.total_energy, row.total_energy));
    if (eval.comm_cost != row.comm_cost)
        throw std::runtime_error(fmt::format("{}: cost {} != reported {}", row.benchmark,
                                             eval.comm_cost, row.comm_cost));
    if (eval.avg_latency != row.avg_latency)
        throw std::runtime_error(fmt::format("{}: latency mismatch", row.benchmark));
    if (eval.eta != row.eta)
        throw std::runtime_error(fmt::format("{}: eta {} != reported {}", row.benchmark, eval.eta,
                                             row.eta));
}

std::string csv_header() {
    return "benchmark,algo,mode,total_energy,comm_cost,avg_latency,eta,runtime_ms,seed";
}

static std::string latency_field(const std::optional<double>& v) {
    return v ? fmt::format("{}", *v) : std::string("NA");
}

std::string to_csv(const ReportRow& r) {
    return fmt::format("{},{},{},{},{},{},{},{:.3f},{}", r.benchmark, r.algo, r.mode,
                       r.total_energy, r.comm_cost, latency_field(r.avg_latency), r.eta,
                       r.runtime_ms, r.seed);
}

std::string to_csv_stable(const ReportRow& r) {
    return fmt::format("{},{},{},{},{},{},{},{}", r.benchmark, r.algo, r.mode, r.total_energy,
                       r.comm_cost, latency_field(r.avg_latency), r.eta, r.seed);
}

std::string format_trace_csv(const std::vector<TracePoint>& trace) {
    std::string out = "iteration,evals,gbest_fitness\n";
    for (const auto& t : trace)
        out += fmt::format("{},{},{}\n", t.iteration, t.evals, t.gbest_fitness);
    return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) {
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    out_.open(path, std::ios::app);
    if (!out_)
        throw std::runtime_error(fmt::format("cannot open CSV '{}'", path.string()));
    if (fresh)
        out_ << csv_header() << '\n';
}

void CsvWriter::append(const ReportRow& row) {
    std::lock_guard lock(mutex_);
    out_ << to_csv(row) << '\n';
    out_.flush();
}

OracleResult exhaustive_oracle(const TaskGraph& g, const Mesh3D& mesh, Objective objective,
                               const EnergyModel& model) {
    const int cores = g.core_count();
    const int tiles = mesh.tile_count();
    if (cores > tiles)
        throw std::invalid_argument("oracle: more cores than tiles");
    std::uint64_t count = 1;
    for (int i = 0; i < cores; ++i) {
        count *= static_cast<std::uint64_t>(tiles - i);
        if (count > kOracleLimit)
            throw std::invalid_argument(
                fmt::format("oracle: instance too large (> {} assignments)", kOracleLimit));
    }

    // Arcs grouped by their later endpoint, so each is charged once both ends are placed.
    struct Back {
        CoreId other;
        std::int64_t volume;
        std::int64_t bandwidth;
    };
    std::vector<std::vector<Back>> back(cores);
    for (const auto& a : g.arcs())
        back[std::max(a.src, a.dst)].push_back(Back{std::min(a.src, a.dst), a.volume, a.bandwidth});

    std::vector<int> hops(static_cast<std::size_t>(tiles) * tiles);
    for (TileId a = 0; a < tiles; ++a)
        for (TileId b = 0; b < tiles; ++b)
            hops[static_cast<std::size_t>(a) * tiles + b] = mesh.hops(a, b);

    OracleResult best;
    best.fitness = std::numeric_limits<double>::infinity();
    std::vector<TileId> assign(cores, -1);
    std::vector<char> used(tiles, 0);
    std::vector<TrafficTotals> acc(cores + 1);

    auto leaf_value = [&](const TrafficTotals& t) {
        return objective == Objective::energy ? energy_from_totals(t, model)
                                              : static_cast<double>(t.cost);
    };

    auto dfs = [&](auto&& self, int k) -> void {
        if (k == cores) {
            ++best.assignments;
            const double f = leaf_value(acc[k]);
            if (f < best.fitness) {
                best.fitness = f;
                best.mapping = Mapping(assign);
            }
            return;
        }
        for (TileId t = 0; t < tiles; ++t) {
            if (used[t])
                continue;
            TrafficTotals next = acc[k];
            for (const auto& b : back[k]) {
                const int links = hops[static_cast<std::size_t>(t) * tiles + assign[b.other]];
                if (links == 0)
                    continue;
                next.switch_bits += b.volume * (links + 1);
                next.link_bits += b.volume * links;
                next.cost += b.bandwidth * links;
            }
            acc[k + 1] = next;
            used[t] = 1;
            assign[k] = t;
            self(self, k + 1);
            used[t] = 0;
        }
        assign[k] = -1;
    };
    dfs(dfs, 0);
    return best;
}

std::string row_label(const ReportRow& row) { return row.mode + ":" + row.algo; }

double percent_reduction(double a, double b) {
    if (b == 0.0)
        return a == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    return 100.0 * (b - a) / b;
}

ComparisonSummary compare_report(const std::vector<ReportRow>& rows, std::string_view label_a,
                                 std::string_view label_b) {
    using Key = std::pair<std::string, std::uint64_t>;
    std::map<Key, const ReportRow*> as, bs;
    for (const auto& r : rows) {
        const auto label = row_label(r);
        if (label == label_a)
            as[{r.benchmark, r.seed}] = &r;
        else if (label == label_b)
            bs[{r.benchmark, r.seed}] = &r;
    }
    if (as.empty() || as.size() != bs.size() ||
        !std::equal(as.begin(), as.end(), bs.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first; }))
        throw std::invalid_argument(
            fmt::format("'{}' and '{}' do not cover the same benchmarks", label_a, label_b));

    ComparisonSummary s{std::string(label_a), std::string(label_b), {}, 0.0, 0.0, std::nullopt};
    double lat_sum = 0.0;
    int lat_n = 0, e_n = 0, c_n = 0;
    for (const auto& [key, a] : as) {
        const ReportRow* b = bs.at(key);
        Reduction red{key.first, percent_reduction(a->total_energy, b->total_energy),
                      percent_reduction(static_cast<double>(a->comm_cost),
                                        static_cast<double>(b->comm_cost)),
                      std::nullopt};
        if (a->avg_latency && b->avg_latency)
            red.latency_pct = percent_reduction(*a->avg_latency, *b->avg_latency);
        if (std::isfinite(red.energy_pct)) {
            s.mean_energy_pct += red.energy_pct;
            ++e_n;
        }
        if (std::isfinite(red.cost_pct)) {
            s.mean_cost_pct += red.cost_pct;
            ++c_n;
        }
        if (red.latency_pct && std::isfinite(*red.latency_pct)) {
            lat_sum += *red.latency_pct;
            ++lat_n;
        }
        s.per_benchmark.push_back(std::move(red));
    }
    if (e_n) s.mean_energy_pct /= e_n;
    if (c_n) s.mean_cost_pct /= c_n;
    if (lat_n) s.mean_latency_pct = lat_sum / lat_n;
    return s;
}

std::string format_summary(const ComparisonSummary& s) {
    auto pct = [](std::optional<double> v) {
        return v ? fmt::format("{:7.2f}%", *v) : std::string("      NA");
    };
    std::string out = fmt::format("reduction of {} relative to {}\n", s.label_a, s.label_b);
    out += fmt::format("{:<24} {:>8} {:>8} {:>8}\n", "benchmark", "energy", "cost", "latency");
    for (const auto& r : s.per_benchmark)
        out += fmt::format("{:<24} {} {} {}\n", r.benchmark, pct(r.energy_pct), pct(r.cost_pct),
                           pct(r.latency_pct));
    out += fmt::format("{:<24} {} {} {}\n", "mean", pct(s.mean_energy_pct), pct(s.mean_cost_pct),
                       pct(s.mean_latency_pct));
    return out;
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
    glob_t buf{};
    std::vector<std::filesystem::path> out;
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &buf);
    if (rc == 0) {
        for (std::size_t i = 0; i < buf.gl_pathc; ++i)
            out.emplace_back(buf.gl_pathv[i]);
    }
    ::globfree(&buf);
    if (rc != 0 && rc != GLOB_NOMATCH)
        throw std::runtime_error(fmt::format("glob '{}' failed", pattern));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace noc3d
