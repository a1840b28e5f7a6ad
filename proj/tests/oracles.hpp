#pragma once

// Brute-force reference evaluators for the tests. Nothing here calls into the
// metrics, topology distance or ranking code it is used to check.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <vector>

#include "noc3d/metrics.hpp"
#include "noc3d/taskgraph.hpp"

namespace oracle {

// A->B 100/10, A->C 70/7, B->D 50/5, C->D 20/2 with A,B,C,D = 0,1,2,3.
inline noc3d::TaskGraph make_g1() {
    noc3d::TaskGraph g(4);
    g.add_arc(0, 1, 100, 10);
    g.add_arc(0, 2, 70, 7);
    g.add_arc(1, 3, 50, 5);
    g.add_arc(2, 3, 20, 2);
    return g;
}

struct Adjacency {
    int n = 0;
    std::vector<std::int64_t> vol;  // -1 = no arc
    std::vector<std::int64_t> bw;
};

inline Adjacency adjacency(const noc3d::TaskGraph& g) {
    Adjacency a;
    a.n = g.core_count();
    a.vol.assign(static_cast<std::size_t>(a.n) * a.n, -1);
    a.bw.assign(static_cast<std::size_t>(a.n) * a.n, 0);
    for (const auto& arc : g.arcs()) {
        a.vol[arc.src * a.n + arc.dst] = arc.volume;
        a.bw[arc.src * a.n + arc.dst] = arc.bandwidth;
    }
    return a;
}

inline std::int64_t ranking(const noc3d::TaskGraph& g, int c) {
    const auto a = adjacency(g);
    std::int64_t sum = 0;
    for (int j = 0; j < a.n; ++j) {
        if (j == c)
            continue;
        sum += std::max<std::int64_t>(0, a.vol[c * a.n + j]);
        sum += std::max<std::int64_t>(0, a.vol[j * a.n + c]);
    }
    return sum;
}

inline int out_degree(const noc3d::TaskGraph& g, int c) {
    const auto a = adjacency(g);
    int d = 0;
    for (int j = 0; j < a.n; ++j)
        d += a.vol[c * a.n + j] >= 0 ? 1 : 0;
    return d;
}

struct Walk {
    int routers = 0;
    int links = 0;
};

// Steps the XYZ route one link at a time: column first, then row, then layer.
inline Walk xyz_walk(int from, int to, int n) {
    int col = from % n, row = (from / n) % n, layer = from / (n * n);
    const int tc = to % n, tr = (to / n) % n, tl = to / (n * n);
    Walk w{1, 0};
    auto step = [&](int& v, int target) {
        while (v != target) {
            v += v < target ? 1 : -1;
            ++w.links;
            ++w.routers;
        }
    };
    step(col, tc);
    step(row, tr);
    step(layer, tl);
    return w;
}

struct Metrics {
    std::int64_t switch_bits = 0;
    std::int64_t link_bits = 0;
    std::int64_t cost = 0;
    std::int64_t eta = 0;
    double energy = 0.0;
    std::optional<double> latency;
};

inline Metrics evaluate(const noc3d::TaskGraph& g, int n, const std::vector<int>& tile_of,
                        const noc3d::EnergyModel& m = {}) {
    const auto a = adjacency(g);
    Metrics r;
    for (int i = 0; i < a.n; ++i) {
        for (int j = 0; j < a.n; ++j) {
            const auto v = a.vol[i * a.n + j];
            if (v < 0)
                continue;
            if (v > 0)
                ++r.eta;
            const auto w = xyz_walk(tile_of[i], tile_of[j], n);
            if (w.links == 0)
                continue;
            r.switch_bits += v * w.routers;
            r.link_bits += v * w.links;
            r.cost += a.bw[i * a.n + j] * w.links;
        }
    }
    r.energy = static_cast<double>(r.switch_bits) * m.e_switch_bit +
               static_cast<double>(r.link_bits) * m.e_link_bit;
    if (r.eta > 0)
        r.latency = m.rho * static_cast<double>(r.link_bits) / static_cast<double>(r.eta);
    return r;
}

// Plain recursive enumeration of injective assignments scored by evaluate().
inline double best_energy(const noc3d::TaskGraph& g, int n, const noc3d::EnergyModel& m = {}) {
    const int tiles = n * n * n;
    std::vector<int> assign(g.core_count());
    std::vector<bool> used(tiles, false);
    double best = std::numeric_limits<double>::infinity();
    auto rec = [&](auto&& self, int k) -> void {
        if (k == g.core_count()) {
            best = std::min(best, evaluate(g, n, assign, m).energy);
            return;
        }
        for (int t = 0; t < tiles; ++t) {
            if (used[t])
                continue;
            used[t] = true;
            assign[k] = t;
            self(self, k + 1);
            used[t] = false;
        }
    };
    rec(rec, 0);
    return best;
}

// The 48 symmetries of the cube as maps on (layer, row, col).
inline std::vector<std::vector<int>> cube_symmetries(int n) {
    std::vector<std::vector<int>> out;
    const std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (const auto& p : perms) {
        for (int flips = 0; flips < 8; ++flips) {
            std::vector<int> map(n * n * n);
            for (int t = 0; t < n * n * n; ++t) {
                const std::array<int, 3> c{t / (n * n), (t / n) % n, t % n};
                std::array<int, 3> d{};
                for (int k = 0; k < 3; ++k) {
                    d[k] = c[p[k]];
                    if (flips & (1 << k))
                        d[k] = n - 1 - d[k];
                }
                map[t] = d[0] * n * n + d[1] * n + d[2];
            }
            out.push_back(std::move(map));
        }
    }
    return out;
}

} // namespace oracle
