#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "noc3d/metrics.hpp"
#include "noc3d/taskgraph.hpp"
#include "noc3d/topology.hpp"

namespace noc3d {

enum class MapperKind { ddmap, spiral, crinkle };

MapperKind parse_mapper_kind(std::string_view name);
std::string_view to_string(MapperKind kind);

// Dynamic diagonal mapping: priority cores seed the interior diagonal, the
// rest follow their heaviest mapped partner via the lozenge search.
// One core per tile; throws std::invalid_argument if cores > tiles.
Mapping ddmap(const TaskGraph& g, const Mesh3D& mesh);

// Layers ascending, rows ascending, columns serpentine per row.
std::vector<TileId> crinkle_order(const Mesh3D& mesh);
// Layers from the centre outwards; each layer unwinds clockwise from its
// centre tile in a rectangular spiral.
std::vector<TileId> spiral_order(const Mesh3D& mesh);

// i-th priority core goes to order[i].
Mapping sequence_map(const TaskGraph& g, const Mesh3D& mesh, std::span<const TileId> order);

Mapping map_cores(const TaskGraph& g, const Mesh3D& mesh, MapperKind kind);

} // namespace noc3d
