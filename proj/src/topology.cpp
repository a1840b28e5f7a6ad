#include "noc3d/topology.hpp"

#include <cstdlib>
#include <stdexcept>

#include <fmt/format.h>

namespace noc3d {

Mesh3D::Mesh3D(int n) : n_(n) {
    if (n < 2)
        throw std::invalid_argument(fmt::format("mesh side must be >= 2, got {}", n));
}

bool Mesh3D::contains(const TileCoord& c) const noexcept {
    return c.layer >= 0 && c.layer < n_ && c.row >= 0 && c.row < n_ && c.col >= 0 && c.col < n_;
}

TileId Mesh3D::index(const TileCoord& c) const {
    if (!contains(c))
        throw std::out_of_range(
            fmt::format("coordinate ({},{},{}) outside {}^3 mesh", c.layer, c.row, c.col, n_));
    return c.layer * n_ * n_ + c.row * n_ + c.col;
}

TileCoord Mesh3D::coords(TileId t) const {
    if (!contains(t))
        throw std::out_of_range(fmt::format("tile {} outside {}^3 mesh", t, n_));
    return TileCoord{t / (n_ * n_), (t / n_) % n_, t % n_};
}

int Mesh3D::hops(TileId a, TileId b) const {
    auto ca = coords(a);
    auto cb = coords(b);
    return std::abs(ca.col - cb.col) + std::abs(ca.row - cb.row) + std::abs(ca.layer - cb.layer);
}

TileId tile_index(const TileCoord& c, int n) { return Mesh3D(n).index(c); }
TileCoord tile_coords(TileId t, int n) { return Mesh3D(n).coords(t); }
int xyz_hops(TileId a, TileId b, int n) { return Mesh3D(n).hops(a, b); }

std::vector<TileId> diagonal_tiles(int n) {
    Mesh3D mesh(n);
    std::vector<TileId> out;
    for (int i = 0; i <= n - 3; ++i)
        out.push_back((n * n + n + 1) * (i + 1));
    return out;
}

Occupancy::Occupancy(const Mesh3D& mesh) : taken_(mesh.tile_count(), false) {}

void Occupancy::occupy(TileId t) {
    if (taken_.at(t))
        throw std::logic_error(fmt::format("tile {} already occupied", t));
    taken_[t] = true;
    ++count_;
}

void Occupancy::release(TileId t) {
    if (!taken_.at(t))
        throw std::logic_error(fmt::format("tile {} is not occupied", t));
    taken_[t] = false;
    --count_;
}

void Occupancy::clear() {
    taken_.assign(taken_.size(), false);
    count_ = 0;
}

Rotation rotation_for(TileId anchor, const Mesh3D& mesh) {
    if (!mesh.contains(anchor))
        throw std::out_of_range(fmt::format("anchor tile {} outside mesh", anchor));
    return (anchor % mesh.side()) % 2 != 0 ? Rotation::alpha : Rotation::beta;
}

std::vector<TileCoord> lozenge_ring(const Mesh3D& mesh, int layer, int row, int col, int d,
                                    Rotation rot) {
    std::vector<TileCoord> out;
    auto push = [&](int r, int c) {
        TileCoord t{layer, r, c};
        if (mesh.contains(t))
            out.push_back(t);
    };
    if (d == 0) {
        push(row, col);
        return out;
    }
    // Row grows southwards, column grows eastwards.
    if (rot == Rotation::alpha) {
        for (int k = 0; k < d; ++k) push(row - d + k, col + k);  // N -> E
        for (int k = 0; k < d; ++k) push(row + k, col + d - k);  // E -> S
        for (int k = 0; k < d; ++k) push(row + d - k, col - k);  // S -> W
        for (int k = 0; k < d; ++k) push(row - k, col - d + k);  // W -> N
    } else {
        for (int k = 0; k < d; ++k) push(row - d + k, col - k);  // N -> W
        for (int k = 0; k < d; ++k) push(row + k, col - d + k);  // W -> S
        for (int k = 0; k < d; ++k) push(row + d - k, col + k);  // S -> E
        for (int k = 0; k < d; ++k) push(row - k, col + d - k);  // E -> N
    }
    return out;
}

std::vector<TileId> lozenge_search_order(TileId anchor, const Mesh3D& mesh) {
    const int n = mesh.side();
    const auto origin = mesh.coords(anchor);
    const auto rot = rotation_for(anchor, mesh);
    const int max_level = 2 * (n - 1);

    std::vector<TileId> order;
    order.reserve(mesh.tile_count());
    auto scan_layer = [&](int layer, int first_ring) {
        for (int d = first_ring; d <= max_level; ++d) {
            for (const auto& c : lozenge_ring(mesh, layer, origin.row, origin.col, d, rot))
                order.push_back(mesh.index(c));
        }
    };

    scan_layer(origin.layer, 1);
    order.push_back(anchor);
    for (int step = 1; step < n; ++step) {
        if (origin.layer + step < n)
            scan_layer(origin.layer + step, 0);
        if (origin.layer - step >= 0)
            scan_layer(origin.layer - step, 0);
    }
    return order;
}

TileId lozenge_next_empty(TileId anchor, const Occupancy& occ, const Mesh3D& mesh) {
    if (occ.free_count() == 0)
        throw std::logic_error("lozenge_next_empty: no free tile");
    for (TileId t : lozenge_search_order(anchor, mesh)) {
        if (occ.is_free(t))
            return t;
    }
    throw std::logic_error("lozenge_next_empty: search order missed a free tile");
}

} // namespace noc3d
