// noc3d: map, schedule and optimise task graphs on a 3D mesh NoC.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

#include "noc3d/harness.hpp"

using namespace noc3d;

namespace {

struct CommonOptions {
    std::string graph;
    int mesh = 3;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string csv;
    EnergyModel energy;
};

void add_energy_flags(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--e-switch", o.energy.e_switch_bit, "switch energy per bit (pJ)")
        ->capture_default_str();
    cmd->add_option("--e-link", o.energy.e_link_bit, "link energy per bit (pJ)")
        ->capture_default_str();
    cmd->add_option("--rho", o.energy.rho, "latency constant")->capture_default_str();
}

void add_common(CLI::App* cmd, CommonOptions& o, bool need_graph = true) {
    auto g = cmd->add_option("--graph", o.graph, "task graph file");
    if (need_graph)
        g->required()->check(CLI::ExistingFile);
    cmd->add_option("--mesh", o.mesh, "mesh side n (n x n x n)")->capture_default_str();
    cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
    cmd->add_option("--out", o.out_dir, "directory for mapping artifacts");
    cmd->add_option("--csv", o.csv, "append the report row to this CSV file");
    add_energy_flags(cmd, o);
}

void add_pso_flags(CLI::App* cmd, PsoParams& p) {
    cmd->add_option("--pso-c1", p.c1)->capture_default_str();
    cmd->add_option("--pso-c2", p.c2)->capture_default_str();
    cmd->add_option("--pso-w", p.w)->capture_default_str();
    cmd->add_option("--pso-swarm", p.swarm_size)->capture_default_str();
    cmd->add_option("--pso-simulations", p.max_simulations)->capture_default_str();
    cmd->add_option("--pso-evals", p.max_evals, "evaluations per simulation")
        ->capture_default_str();
    cmd->add_option("--pso-threads", p.threads)->capture_default_str();
}

RunConfig make_config(const CommonOptions& o) {
    RunConfig cfg;
    cfg.graph_path = o.graph;
    cfg.mesh_n = o.mesh;
    cfg.seed = o.seed;
    cfg.energy = o.energy;
    if (!o.out_dir.empty())
        cfg.out_dir = o.out_dir;
    return cfg;
}

void report(const RunResult& r, bool print_artifact) {
    if (print_artifact)
        std::cout << r.artifact;
    std::cout << csv_header() << '\n' << to_csv(r.row) << '\n';
}

int run_single(const CommonOptions& o, const RunConfig& cfg) {
    std::unique_ptr<CsvWriter> csv;
    if (!o.csv.empty())
        csv = std::make_unique<CsvWriter>(o.csv);
    auto r = run_benchmark(cfg, csv.get());
    report(r, !cfg.out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D mesh NoC task mapping, scheduling and PSO refinement"};
    app.require_subcommand(1);

    CommonOptions map_o;
    std::string map_algo = "ddmap";
    auto map_cmd = app.add_subcommand("map", "one core per tile with ddmap, spiral or crinkle");
    add_common(map_cmd, map_o);
    map_cmd->add_option("--algo", map_algo)
        ->check(CLI::IsMember({"ddmap", "spiral", "crinkle"}))
        ->capture_default_str();

    CommonOptions sch_o;
    std::string sch_mode = "dynamic", sch_mapper = "ddmap";
    auto sch_cmd = app.add_subcommand("schedule", "many tasks per tile: dynamic or cluster");
    add_common(sch_cmd, sch_o);
    sch_cmd->add_option("--mode", sch_mode)
        ->check(CLI::IsMember({"dynamic", "cluster"}))
        ->capture_default_str();
    sch_cmd->add_option("--cluster-mapper", sch_mapper)
        ->check(CLI::IsMember({"ddmap", "spiral", "crinkle"}))
        ->capture_default_str();

    CommonOptions opt_o;
    std::string opt_objective = "energy", opt_seed_mapping, opt_cluster_mapper, opt_trace;
    PsoParams pso;
    auto opt_cmd = app.add_subcommand("optimize", "PSO refinement of a mapping");
    add_common(opt_cmd, opt_o);
    opt_cmd->add_option("--objective", opt_objective)
        ->check(CLI::IsMember({"energy", "cost"}))
        ->capture_default_str();
    auto seed_opt = opt_cmd->add_option("--seed-mapping", opt_seed_mapping,
                                        "mapping artifact used as one initial particle")
                        ->check(CLI::ExistingFile);
    opt_cmd->add_option("--cluster-mapper", opt_cluster_mapper,
                        "optimise the cluster placement produced by this mapper")
        ->check(CLI::IsMember({"ddmap", "spiral", "crinkle"}))
        ->excludes(seed_opt);
    opt_cmd->add_option("--trace", opt_trace, "write the gbest trace CSV here");
    add_pso_flags(opt_cmd, pso);

    RandomGraphSpec gen_spec;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    auto gen_cmd = app.add_subcommand("gen", "generate a random task graph");
    gen_cmd->add_option("--cores", gen_spec.cores)->required();
    gen_cmd->add_option("--arcs", gen_spec.arcs)->required();
    gen_cmd->add_option("--seed", gen_seed)->capture_default_str();
    gen_cmd->add_option("--vol-min", gen_spec.volume_min)->capture_default_str();
    gen_cmd->add_option("--vol-max", gen_spec.volume_max)->capture_default_str();
    gen_cmd->add_option("--bw-min", gen_spec.bandwidth_min)->capture_default_str();
    gen_cmd->add_option("--bw-max", gen_spec.bandwidth_max)->capture_default_str();
    gen_cmd->add_option("--out", gen_out, "output file (stdout when omitted)");

    CommonOptions orc_o;
    std::string orc_objective = "energy";
    auto orc_cmd = app.add_subcommand("oracle", "exhaustive optimum for small instances");
    add_common(orc_cmd, orc_o);
    orc_cmd->add_option("--objective", orc_objective)
        ->check(CLI::IsMember({"energy", "cost"}))
        ->capture_default_str();

    CommonOptions bench_o;
    std::string bench_glob;
    std::vector<std::string> bench_modes;
    std::string bench_algo = "ddmap";
    bool all_algos = false, audit = false;
    unsigned bench_threads = 0;
    PsoParams bench_pso;
    auto bench_cmd = app.add_subcommand("bench", "batch runs over a set of graph files");
    add_common(bench_cmd, bench_o, false);
    bench_cmd->add_option("--glob", bench_glob, "graph files, e.g. 'dir/*.ctg'")->required();
    bench_cmd->add_option("--mode", bench_modes, "map|dynamic|cluster|pso|cluster-pso (repeatable)")
        ->check(CLI::IsMember({"map", "dynamic", "cluster", "pso", "cluster-pso"}));
    bench_cmd->add_option("--algo", bench_algo)
        ->check(CLI::IsMember({"ddmap", "spiral", "crinkle"}))
        ->capture_default_str();
    bench_cmd->add_flag("--all-algos", all_algos, "run ddmap, spiral and crinkle");
    bench_cmd->add_flag("--audit", audit, "re-evaluate every artifact against its row");
    bench_cmd->add_option("--threads", bench_threads, "parallel runs (0 = all cores)");
    add_pso_flags(bench_cmd, bench_pso);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*map_cmd) {
            auto cfg = make_config(map_o);
            cfg.mode = Mode::map;
            cfg.algo = parse_mapper_kind(map_algo);
            return run_single(map_o, cfg);
        }
        if (*sch_cmd) {
            auto cfg = make_config(sch_o);
            cfg.mode = parse_mode(sch_mode);
            cfg.algo = parse_mapper_kind(sch_mapper);
            return run_single(sch_o, cfg);
        }
        if (*opt_cmd) {
            auto cfg = make_config(opt_o);
            cfg.objective = parse_objective(opt_objective);
            cfg.pso = pso;
            if (!opt_cluster_mapper.empty()) {
                cfg.mode = Mode::cluster_pso;
                cfg.algo = parse_mapper_kind(opt_cluster_mapper);
            } else {
                cfg.mode = Mode::pso;
                if (!opt_seed_mapping.empty())
                    cfg.seed_mapping = opt_seed_mapping;
            }
            std::unique_ptr<CsvWriter> csv;
            if (!opt_o.csv.empty())
                csv = std::make_unique<CsvWriter>(opt_o.csv);
            auto r = run_benchmark(cfg, csv.get());
            if (!opt_trace.empty()) {
                std::ofstream(opt_trace) << format_trace_csv(r.trace);
            }
            report(r, !cfg.out_dir);
            return 0;
        }
        if (*gen_cmd) {
            const auto text = serialize_graph(generate_random_graph(gen_spec, gen_seed));
            if (gen_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(gen_out);
                if (!out)
                    throw std::runtime_error(fmt::format("cannot write '{}'", gen_out));
                out << text;
            }
            return 0;
        }
        if (*orc_cmd) {
            const auto g = read_graph_file(orc_o.graph);
            const Mesh3D mesh(orc_o.mesh);
            const auto r = exhaustive_oracle(g, mesh, parse_objective(orc_objective), orc_o.energy);
            std::cout << fmt::format("# optimum {} {} over {} assignments\n", orc_objective,
                                     r.fitness, r.assignments);
            for (std::size_t c = 0; c < r.mapping.size(); ++c)
                std::cout << fmt::format("core {} -> tile {}\n", c,
                                         r.mapping.tile_of(static_cast<CoreId>(c)));
            return 0;
        }
        if (*bench_cmd) {
            const auto files = expand_glob(bench_glob);
            if (files.empty())
                throw std::runtime_error(fmt::format("no graph matches '{}'", bench_glob));
            if (bench_modes.empty())
                bench_modes.push_back("map");
            std::vector<MapperKind> algos{parse_mapper_kind(bench_algo)};
            if (all_algos)
                algos = {MapperKind::ddmap, MapperKind::spiral, MapperKind::crinkle};

            std::vector<RunConfig> configs;
            for (const auto& f : files) {
                for (const auto& m : bench_modes) {
                    const auto mode = parse_mode(m);
                    const auto mode_algos =
                        mode == Mode::dynamic || mode == Mode::pso ? std::vector{MapperKind::ddmap}
                                                                   : algos;
                    for (auto algo : mode_algos) {
                        auto cfg = make_config(bench_o);
                        cfg.graph_path = f;
                        cfg.mode = mode;
                        cfg.algo = algo;
                        cfg.pso = bench_pso;
                        configs.push_back(cfg);
                    }
                }
            }
            std::unique_ptr<CsvWriter> csv;
            if (!bench_o.csv.empty())
                csv = std::make_unique<CsvWriter>(bench_o.csv);
            const auto results = run_batch(configs, csv.get(), bench_threads);

            std::vector<ReportRow> rows;
            std::cout << csv_header() << '\n';
            for (std::size_t i = 0; i < results.size(); ++i) {
                if (audit)
                    audit_row(read_graph_file(configs[i].graph_path), configs[i],
                              results[i].artifact, results[i].row);
                rows.push_back(results[i].row);
                std::cout << to_csv(results[i].row) << '\n';
            }
            if (audit)
                std::cout << fmt::format("# audit: {} rows re-derived from artifacts\n", rows.size());

            std::vector<std::string> labels;
            for (const auto& r : rows) {
                auto l = row_label(r);
                if (std::find(labels.begin(), labels.end(), l) == labels.end())
                    labels.push_back(l);
            }
            for (std::size_t i = 1; i < labels.size(); ++i)
                std::cout << '\n' << format_summary(compare_report(rows, labels[0], labels[i]));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
