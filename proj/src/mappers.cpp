#include "noc3d/mappers.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace noc3d {

MapperKind parse_mapper_kind(std::string_view name) {
    if (name == "ddmap")
        return MapperKind::ddmap;
    if (name == "spiral")
        return MapperKind::spiral;
    if (name == "crinkle")
        return MapperKind::crinkle;
    throw std::invalid_argument(fmt::format("unknown mapper '{}'", name));
}

std::string_view to_string(MapperKind kind) {
    switch (kind) {
    case MapperKind::ddmap: return "ddmap";
    case MapperKind::spiral: return "spiral";
    case MapperKind::crinkle: return "crinkle";
    }
    return "?";
}

static void require_fits(const TaskGraph& g, const Mesh3D& mesh) {
    if (g.core_count() > mesh.tile_count())
        throw std::invalid_argument(fmt::format("{} cores do not fit one-per-tile on {} tiles",
                                                g.core_count(), mesh.tile_count()));
}

Mapping ddmap(const TaskGraph& g, const Mesh3D& mesh) {
    require_fits(g, mesh);
    const int n_cores = g.core_count();
    if (n_cores == 0)
        return Mapping{};

    const auto prio = priority_order(g).order;
    std::vector<int> rank_of(n_cores);
    for (int i = 0; i < n_cores; ++i)
        rank_of[prio[i]] = i;
    const auto pv = pair_volume_matrix(g);
    const auto at = [&](CoreId i, CoreId j) { return pv[static_cast<std::size_t>(i) * n_cores + j]; };

    std::vector<TileId> tile(n_cores, -1);
    std::vector<CoreId> mapped;
    std::vector<std::int64_t> pull(n_cores, 0);  // volume exchanged with mapped cores
    Occupancy occ(mesh);

    auto place = [&](CoreId c, TileId t) {
        occ.occupy(t);
        tile[c] = t;
        mapped.push_back(c);
        for (CoreId o = 0; o < n_cores; ++o)
            pull[o] += at(o, c);
    };

    auto seeds = diagonal_tiles(mesh.side());
    if (seeds.empty())
        seeds.push_back(0);  // 2x2x2 has no interior diagonal
    for (std::size_t i = 0; i < seeds.size() && i < prio.size(); ++i)
        place(prio[i], seeds[i]);

    while (static_cast<int>(mapped.size()) < n_cores) {
        CoreId next = -1;
        for (CoreId c = 0; c < n_cores; ++c) {
            if (tile[c] != -1)
                continue;
            if (next == -1 || pull[c] > pull[next] ||
                (pull[c] == pull[next] && rank_of[c] < rank_of[next]))
                next = c;
        }
        CoreId partner = mapped.front();
        for (CoreId m : mapped) {
            if (at(next, m) > at(next, partner))
                partner = m;
        }
        place(next, lozenge_next_empty(tile[partner], occ, mesh));
    }
    return Mapping(std::move(tile));
}

std::vector<TileId> crinkle_order(const Mesh3D& mesh) {
    const int n = mesh.side();
    std::vector<TileId> order;
    order.reserve(mesh.tile_count());
    for (int layer = 0; layer < n; ++layer) {
        for (int row = 0; row < n; ++row) {
            for (int k = 0; k < n; ++k) {
                int col = row % 2 == 0 ? k : n - 1 - k;
                order.push_back(mesh.index({layer, row, col}));
            }
        }
    }
    return order;
}

std::vector<TileId> spiral_order(const Mesh3D& mesh) {
    const int n = mesh.side();
    const int centre = (n + 1) / 2 - 1;

    std::vector<int> layers{centre};
    for (int step = 1; static_cast<int>(layers.size()) < n; ++step) {
        if (centre + step < n)
            layers.push_back(centre + step);
        if (centre - step >= 0)
            layers.push_back(centre - step);
    }

    // East, south, west, north with run lengths 1,1,2,2,3,3,...
    constexpr int dr[4] = {0, 1, 0, -1};
    constexpr int dc[4] = {1, 0, -1, 0};
    std::vector<TileId> order;
    order.reserve(mesh.tile_count());
    for (int layer : layers) {
        int row = centre, col = centre;
        int found = 0;
        order.push_back(mesh.index({layer, row, col}));
        ++found;
        for (int run = 1, dir = 0; found < n * n; ++run) {
            for (int leg = 0; leg < 2; ++leg, dir = (dir + 1) % 4) {
                for (int s = 0; s < run; ++s) {
                    row += dr[dir];
                    col += dc[dir];
                    if (mesh.contains(TileCoord{layer, row, col})) {
                        order.push_back(mesh.index({layer, row, col}));
                        ++found;
                    }
                }
            }
        }
    }
    return order;
}

Mapping sequence_map(const TaskGraph& g, const Mesh3D& mesh, std::span<const TileId> order) {
    require_fits(g, mesh);
    if (order.size() < static_cast<std::size_t>(g.core_count()))
        throw std::invalid_argument("tile sequence shorter than core count");
    if (g.core_count() == 0)
        return Mapping{};
    const auto prio = priority_order(g).order;
    std::vector<TileId> tile(g.core_count(), -1);
    for (std::size_t i = 0; i < prio.size(); ++i)
        tile[prio[i]] = order[i];
    return Mapping(std::move(tile));
}

Mapping map_cores(const TaskGraph& g, const Mesh3D& mesh, MapperKind kind) {
    switch (kind) {
    case MapperKind::ddmap:
        return ddmap(g, mesh);
    case MapperKind::spiral:
        return sequence_map(g, mesh, spiral_order(mesh));
    case MapperKind::crinkle:
        return sequence_map(g, mesh, crinkle_order(mesh));
    }
    throw std::invalid_argument("unknown mapper kind");
}

} // namespace noc3d
