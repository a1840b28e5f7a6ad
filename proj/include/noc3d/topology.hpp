#pragma once

#include <compare>
#include <vector>

namespace noc3d {

using TileId = int;

struct TileCoord {
    int layer = 0;
    int row = 0;
    int col = 0;

    friend auto operator<=>(const TileCoord&, const TileCoord&) = default;
};

// n x n x n mesh. Tiles are numbered layer-major, then row-major:
// id = layer*n^2 + row*n + col.
class Mesh3D {
public:
    explicit Mesh3D(int n);

    int side() const noexcept { return n_; }
    int tile_count() const noexcept { return n_ * n_ * n_; }
    bool contains(TileId t) const noexcept { return t >= 0 && t < tile_count(); }
    bool contains(const TileCoord& c) const noexcept;

    TileId index(const TileCoord& c) const;
    TileCoord coords(TileId t) const;
    // Links traversed by the XYZ route from a to b.
    int hops(TileId a, TileId b) const;

private:
    int n_;
};

TileId tile_index(const TileCoord& c, int n);
TileCoord tile_coords(TileId t, int n);
int xyz_hops(TileId a, TileId b, int n);

// Interior tiles of the main cube diagonal, i.e. (n^2+n+1)*(i+1) for i = 0..n-3.
std::vector<TileId> diagonal_tiles(int n);

class Occupancy {
public:
    explicit Occupancy(const Mesh3D& mesh);

    bool is_free(TileId t) const { return !taken_.at(t); }
    void occupy(TileId t);
    void release(TileId t);
    void clear();

    int occupied_count() const noexcept { return count_; }
    int free_count() const noexcept { return static_cast<int>(taken_.size()) - count_; }

private:
    std::vector<bool> taken_;
    int count_ = 0;
};

enum class Rotation { alpha, beta };

// alpha (clockwise) on odd columns, beta (counter-clockwise) on even ones.
Rotation rotation_for(TileId anchor, const Mesh3D& mesh);

// In-layer diamond of Manhattan radius d around (row, col), starting at the
// north-most cell and turning in the given direction. Out-of-mesh cells are
// dropped.
std::vector<TileCoord> lozenge_ring(const Mesh3D& mesh, int layer, int row, int col, int d,
                                    Rotation rot);

// Full visiting order used by lozenge_next_empty. Covers every tile exactly once.
// Own layer: rings d = 1..2(n-1), then the anchor itself. Then other layers
// (+1, -1, +2, -2, ... skipping missing ones), each with rings d = 0..2(n-1)
// around the anchor's (row, col).
std::vector<TileId> lozenge_search_order(TileId anchor, const Mesh3D& mesh);

// First free tile in lozenge_search_order. Throws std::logic_error when the
// mesh is full.
TileId lozenge_next_empty(TileId anchor, const Occupancy& occ, const Mesh3D& mesh);

} // namespace noc3d
