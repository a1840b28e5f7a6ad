#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "noc3d/taskgraph.hpp"
#include "noc3d/topology.hpp"

namespace noc3d {

// Per-bit energies in pJ and the latency constant.
struct EnergyModel {
    double e_switch_bit = 0.284;
    double e_link_bit = 0.449;
    double rho = 1.0;

    void validate() const;
};

// Core -> tile assignment. Injective for plain mappings; schedules may stack
// several cores on one tile.
class Mapping {
public:
    Mapping() = default;
    explicit Mapping(std::vector<TileId> tiles) : tiles_(std::move(tiles)) {}

    TileId tile_of(CoreId c) const { return tiles_.at(c); }
    std::size_t size() const noexcept { return tiles_.size(); }
    std::span<const TileId> tiles() const noexcept { return tiles_; }
    bool is_injective() const;

    friend bool operator==(const Mapping&, const Mapping&) = default;

private:
    std::vector<TileId> tiles_;
};

// Integer aggregates over all arcs. Energy and latency are derived from
// these, so two evaluations that see the same traffic agree bit for bit.
struct TrafficTotals {
    std::int64_t switch_bits = 0;  // sum of volume * routers on the path
    std::int64_t link_bits = 0;    // sum of volume * links on the path
    std::int64_t cost = 0;         // sum of bandwidth * links
    std::int64_t eta = 0;          // arcs with volume > 0
};

struct EvalReport {
    double total_energy = 0.0;            // pJ
    std::int64_t comm_cost = 0;           // bandwidth * hops
    std::optional<double> avg_latency;    // empty when eta == 0
    std::int64_t eta = 0;
};

// pJ to move one bit across `links` links: (links+1) switches and `links`
// links; zero for co-located endpoints.
double bit_energy(int links, const EnergyModel& m);

// Throws std::invalid_argument if a core is unmapped or a tile is off-mesh.
TrafficTotals traffic_totals(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map);

double energy_from_totals(const TrafficTotals& t, const EnergyModel& m);

double total_energy(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map,
                    const EnergyModel& m = {});
std::int64_t comm_cost(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map);
// Throws std::domain_error when no arc carries volume.
double avg_latency(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map,
                   const EnergyModel& m = {});

EvalReport evaluate(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map,
                    const EnergyModel& m = {});

} // namespace noc3d
