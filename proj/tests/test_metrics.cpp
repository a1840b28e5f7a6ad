#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "noc3d/metrics.hpp"
#include "oracles.hpp"

using namespace noc3d;

namespace {

std::vector<TileId> random_assignment(int cores, int tiles, bool injective, std::mt19937_64& rng) {
    std::vector<TileId> out(cores);
    if (injective) {
        std::vector<TileId> all(tiles);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        std::copy_n(all.begin(), cores, out.begin());
    } else {
        std::uniform_int_distribution<TileId> pick(0, tiles - 1);
        for (auto& t : out)
            t = pick(rng);
    }
    return out;
}

} // namespace

TEST_CASE("bit_energy with the reference constants") {
    const EnergyModel m;
    CHECK(m.e_link_bit == 0.449);
    CHECK(m.e_switch_bit == 0.284);
    CHECK(std::abs(bit_energy(6, m) - 4.682) <= 1e-12);
    CHECK(std::abs(bit_energy(1, m) - 1.017) <= 1e-12);
    CHECK(bit_energy(0, m) == 0.0);
    for (int links = 1; links < 20; ++links)
        CHECK(bit_energy(links + 1, m) > bit_energy(links, m));
    CHECK_THROWS_AS(bit_energy(-1, m), std::invalid_argument);
}

TEST_CASE("single-arc metric examples") {
    Mesh3D mesh(3);
    TaskGraph g(2);
    g.add_arc(0, 1, 100, 10);

    const Mapping one_link({13, 14});
    CHECK(std::abs(total_energy(g, mesh, one_link) - 101.7) <= 1e-9);

    const Mapping two_links({0, 2});
    CHECK(comm_cost(g, mesh, two_links) == 20);

    const Mapping three_links({0, 13});
    CHECK(avg_latency(g, mesh, three_links) == 300.0);

    const Mapping same({5, 5});
    CHECK(total_energy(g, mesh, same) == 0.0);
    CHECK(comm_cost(g, mesh, same) == 0);
    CHECK(avg_latency(g, mesh, same) == 0.0);
}

TEST_CASE("avg_latency of two arcs") {
    Mesh3D mesh(3);
    TaskGraph g(3);
    g.add_arc(0, 1, 10, 1);
    g.add_arc(1, 2, 30, 1);
    const Mapping m({0, 1, 3});  // 0-1: 1 hop, 1-3: 2 hops
    CHECK(avg_latency(g, mesh, m) == 35.0);
    EnergyModel slow;
    slow.rho = 2.0;
    CHECK(avg_latency(g, mesh, m, slow) == 70.0);
}

TEST_CASE("G1 on a hand-picked mapping") {
    Mesh3D mesh(3);
    const auto g = oracle::make_g1();
    const Mapping m({13, 10, 4, 12});
    // 100 and 70 travel one link, 50 and 20 travel two.
    const double expected = 170 * 1.017 + 70 * (3 * 0.284 + 2 * 0.449);
    CHECK(std::abs(total_energy(g, mesh, m) - expected) <= 1e-9);
    CHECK(comm_cost(g, mesh, m) == 31);
    CHECK(avg_latency(g, mesh, m) == 77.5);

    const auto ref = oracle::evaluate(g, 3, {13, 10, 4, 12});
    CHECK(total_energy(g, mesh, m) == ref.energy);
}

TEST_CASE("latency undefined without volume") {
    Mesh3D mesh(2);
    TaskGraph g(2);
    g.add_arc(0, 1, 0, 5);
    const Mapping m({0, 7});
    CHECK_THROWS_AS(avg_latency(g, mesh, m), std::domain_error);
    const auto r = evaluate(g, mesh, m);
    CHECK_FALSE(r.avg_latency.has_value());
    CHECK(r.eta == 0);
    CHECK(r.comm_cost == 15);
    CHECK(r.total_energy == 0.0);
}

TEST_CASE("metric argument checks") {
    Mesh3D mesh(2);
    const auto g = oracle::make_g1();
    CHECK_THROWS_AS(total_energy(g, mesh, Mapping({0, 1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(comm_cost(g, mesh, Mapping({0, 1, 2, 8})), std::invalid_argument);
    EnergyModel bad;
    bad.e_link_bit = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("metrics match the brute-force evaluator") {
    Mesh3D mesh(3);
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int cores = 2 + static_cast<int>(seed % 26);
        const int arcs = std::min(cores * (cores - 1), cores + static_cast<int>(seed % 17));
        const auto g = generate_random_graph({cores, arcs}, seed);
        const auto tiles = random_assignment(cores, 27, seed % 3 != 0, rng);
        const Mapping m(tiles);
        const auto ref = oracle::evaluate(g, 3, tiles);
        const auto got = evaluate(g, mesh, m);
        CHECK(got.total_energy == ref.energy);
        CHECK(got.comm_cost == ref.cost);
        CHECK(got.eta == ref.eta);
        CHECK(got.avg_latency == ref.latency);
    }
}

TEST_CASE("energy is invariant under cube symmetries") {
    Mesh3D mesh(3);
    const auto syms = oracle::cube_symmetries(3);
    REQUIRE(syms.size() == 48);
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = generate_random_graph({12, 25}, seed);
        const auto tiles = random_assignment(12, 27, true, rng);
        const double base = total_energy(g, mesh, Mapping(tiles));
        for (const auto& s : syms) {
            std::vector<TileId> moved(tiles.size());
            for (std::size_t i = 0; i < tiles.size(); ++i)
                moved[i] = s[tiles[i]];
            REQUIRE(total_energy(g, mesh, Mapping(moved)) == base);
        }
    }
}

TEST_CASE("metrics are non-negative and vanish when everything is co-located") {
    Mesh3D mesh(3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = generate_random_graph({10, 20}, seed);
        const auto r = evaluate(g, mesh, Mapping(std::vector<TileId>(10, 7)));
        CHECK(r.total_energy == 0.0);
        CHECK(r.comm_cost == 0);
        CHECK(r.avg_latency == 0.0);
    }
}

TEST_CASE("deleting an arc never raises energy or cost") {
    Mesh3D mesh(3);
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto g = generate_random_graph({9, 18}, seed);
        const Mapping m(random_assignment(9, 27, true, rng));
        const auto full = evaluate(g, mesh, m);
        for (std::size_t drop = 0; drop < g.arcs().size(); ++drop) {
            TaskGraph h(g.core_count());
            for (std::size_t i = 0; i < g.arcs().size(); ++i)
                if (i != drop)
                    h.add_arc(g.arcs()[i].src, g.arcs()[i].dst, g.arcs()[i].volume,
                              g.arcs()[i].bandwidth);
            const auto less = evaluate(h, mesh, m);
            CHECK(less.total_energy <= full.total_energy);
            CHECK(less.comm_cost <= full.comm_cost);
        }
    }
}

TEST_CASE("average latency can rise when a short arc is removed") {
    // The mean is taken per transfer, so it is not monotone under deletion.
    Mesh3D mesh(3);
    TaskGraph g(3);
    g.add_arc(0, 1, 10, 1);
    g.add_arc(1, 2, 30, 1);
    TaskGraph h(3);
    h.add_arc(1, 2, 30, 1);
    const Mapping m({0, 1, 3});
    CHECK(avg_latency(h, mesh, m) > avg_latency(g, mesh, m));
}
