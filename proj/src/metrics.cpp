#include "noc3d/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace noc3d {

void EnergyModel::validate() const {
    if (!(e_switch_bit >= 0.0) || !(e_link_bit >= 0.0) || !(rho >= 0.0))
        throw std::invalid_argument("energy model fields must be non-negative");
}

bool Mapping::is_injective() const {
    std::vector<TileId> sorted(tiles_);
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

double bit_energy(int links, const EnergyModel& m) {
    if (links < 0)
        throw std::invalid_argument("negative hop count");
    if (links == 0)
        return 0.0;
    return (links + 1) * m.e_switch_bit + links * m.e_link_bit;
}

TrafficTotals traffic_totals(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map) {
    if (map.size() != static_cast<std::size_t>(g.core_count()))
        throw std::invalid_argument(fmt::format("mapping covers {} of {} cores", map.size(),
                                                g.core_count()));
    for (TileId t : map.tiles()) {
        if (!mesh.contains(t))
            throw std::invalid_argument(fmt::format("tile {} is not on the mesh", t));
    }
    TrafficTotals tot;
    for (const auto& a : g.arcs()) {
        const int links = mesh.hops(map.tile_of(a.src), map.tile_of(a.dst));
        if (a.volume > 0)
            ++tot.eta;
        if (links == 0)
            continue;
        tot.switch_bits += a.volume * (links + 1);
        tot.link_bits += a.volume * links;
        tot.cost += a.bandwidth * links;
    }
    return tot;
}

double energy_from_totals(const TrafficTotals& t, const EnergyModel& m) {
    return static_cast<double>(t.switch_bits) * m.e_switch_bit +
           static_cast<double>(t.link_bits) * m.e_link_bit;
}

double total_energy(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map,
                    const EnergyModel& m) {
    return energy_from_totals(traffic_totals(g, mesh, map), m);
}

std::int64_t comm_cost(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map) {
    return traffic_totals(g, mesh, map).cost;
}

static std::optional<double> latency_from_totals(const TrafficTotals& t, const EnergyModel& m) {
    if (t.eta == 0)
        return std::nullopt;
    return m.rho * static_cast<double>(t.link_bits) / static_cast<double>(t.eta);
}

double avg_latency(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map,
                   const EnergyModel& m) {
    auto lat = latency_from_totals(traffic_totals(g, mesh, map), m);
    if (!lat)
        throw std::domain_error("average latency undefined: no arc carries volume");
    return *lat;
}

EvalReport evaluate(const TaskGraph& g, const Mesh3D& mesh, const Mapping& map,
                    const EnergyModel& m) {
    auto t = traffic_totals(g, mesh, map);
    return EvalReport{energy_from_totals(t, m), t.cost, latency_from_totals(t, m), t.eta};
}

} // namespace noc3d
