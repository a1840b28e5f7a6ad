#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noc3d/mappers.hpp"
#include "noc3d/metrics.hpp"
#include "noc3d/pso.hpp"
#include "noc3d/scheduler.hpp"
#include "noc3d/taskgraph.hpp"

namespace noc3d {

// map:         one core per tile with `algo`
// dynamic:     round-based DDMap scheduling (algo is always ddmap)
// cluster:     chain clustering, clusters placed with `algo`
// pso:         PSO over core placements, optionally seeded from a file
// cluster-pso: PSO over the cluster placement produced by `algo`
enum class Mode { map, dynamic, cluster, pso, cluster_pso };

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode mode);

struct RunConfig {
    std::filesystem::path graph_path;
    std::string benchmark;  // defaults to the graph file stem
    int mesh_n = 3;
    MapperKind algo = MapperKind::ddmap;
    Mode mode = Mode::map;
    Objective objective = Objective::energy;
    EnergyModel energy;
    PsoParams pso;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> seed_mapping;
    std::optional<std::filesystem::path> out_dir;
};

struct ReportRow {
    std::string benchmark;
    std::string algo;
    std::string mode;
    double total_energy = 0.0;
    std::int64_t comm_cost = 0;
    std::optional<double> avg_latency;
    std::int64_t eta = 0;
    double runtime_ms = 0.0;
    std::uint64_t seed = 0;
};

struct RunResult {
    ReportRow row;
    Mapping placement;  // task -> tile
    std::string artifact;
    std::vector<TracePoint> trace;  // PSO modes only
};

// Runs the configured pipeline on an in-memory graph. Nothing touches disk.
RunResult run_pipeline(const TaskGraph& g, const RunConfig& cfg);

class CsvWriter;

// Reads cfg.graph_path, runs the pipeline, writes the mapping artifact into
// cfg.out_dir (when set) and appends the row to `csv` (when given).
RunResult run_benchmark(const RunConfig& cfg, CsvWriter* csv = nullptr);

// Independent runs in parallel; results come back in input order.
std::vector<RunResult> run_batch(const std::vector<RunConfig>& configs, CsvWriter* csv = nullptr,
                                 unsigned threads = 0);

std::string artifact_file_name(const ReportRow& row);
std::string format_artifact(const RunConfig& cfg, const ReportRow& row, const Mapping& placement);
Mapping parse_artifact(std::string_view text);

// Re-evaluates the artifact's placement and checks it reproduces `row`.
// Throws std::runtime_error describing the first mismatch.
void audit_row(const TaskGraph& g, const RunConfig& cfg, std::string_view artifact,
               const ReportRow& row);

std::string csv_header();
std::string to_csv(const ReportRow& row);
// The row without its runtime column, for determinism checks.
std::string to_csv_stable(const ReportRow& row);
std::string format_trace_csv(const std::vector<TracePoint>& trace);

// Serialises appends from concurrent runs; writes the header once for a new
// or empty file.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);
    void append(const ReportRow& row);

private:
    std::mutex mutex_;
    std::ofstream out_;
};

struct OracleResult {
    double fitness = 0.0;
    Mapping mapping;
    std::uint64_t assignments = 0;
};

inline constexpr std::uint64_t kOracleLimit = 10'000'000;

// Enumerates every injective core->tile assignment in lexicographic order and
// returns the minimum with its lexicographically smallest argmin. Throws
// std::invalid_argument if there are more than kOracleLimit assignments.
OracleResult exhaustive_oracle(const TaskGraph& g, const Mesh3D& mesh,
                               Objective objective = Objective::energy,
                               const EnergyModel& model = {});

// Reduction of A relative to B, 100 * (B - A) / B, per benchmark.
struct Reduction {
    std::string benchmark;
    double energy_pct = 0.0;
    double cost_pct = 0.0;
    std::optional<double> latency_pct;
};

struct ComparisonSummary {
    std::string label_a;
    std::string label_b;
    std::vector<Reduction> per_benchmark;
    double mean_energy_pct = 0.0;
    double mean_cost_pct = 0.0;
    std::optional<double> mean_latency_pct;
};

// Rows are labelled "<mode>:<algo>".
std::string row_label(const ReportRow& row);
double percent_reduction(double a, double b);

// Throws std::invalid_argument when the two labels do not cover the same
// benchmark/seed set.
ComparisonSummary compare_report(const std::vector<ReportRow>& rows, std::string_view label_a,
                                 std::string_view label_b);
std::string format_summary(const ComparisonSummary& s);

std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

} // namespace noc3d
