#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <tuple>

#include "noc3d/taskgraph.hpp"
#include "oracles.hpp"

using namespace noc3d;

TEST_CASE("parse_graph reads the line format") {
    auto g = parse_graph("cores 2\nedge 0 1 100 10\n");
    CHECK(g.core_count() == 2);
    REQUIRE(g.arcs().size() == 1);
    CHECK(g.arcs()[0] == Arc{0, 1, 100, 10});

    auto single = parse_graph("cores 1");
    CHECK(single.core_count() == 1);
    CHECK(single.arcs().empty());

    auto commented = parse_graph("# header\n\ncores 3   # three\nedge 2 0 5 1\n\n");
    CHECK(commented.core_count() == 3);
    CHECK(commented.volume(2, 0) == 5);
}

TEST_CASE("parse_graph reports errors with line numbers") {
    auto line_of = [](const char* text) -> std::size_t {
        try {
            parse_graph(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("cores 2\nedge 0 0 5 1") == 2);          // self-loop
    CHECK(line_of("cores 2\nedge 0 2 5 1") == 2);          // out of range
    CHECK(line_of("cores 2\nedge 0 1 5 1\nedge 0 1 6 1") == 3);  // duplicate
    CHECK(line_of("cores 2\n\nedge 0 1 -5 1") == 3);       // negative
    CHECK(line_of("cores 2\nedge 0 1 5") == 2);            // short line
    CHECK(line_of("cores two") == 1);
    CHECK(line_of("edge 0 1 5 1") == 1);                   // no header
    CHECK(line_of("cores 2\nedge 0 1 5x 1") == 2);
    CHECK_THROWS_AS(parse_graph(""), ParseError);
}

TEST_CASE("out_degree and ranking on G1") {
    const auto g = oracle::make_g1();
    CHECK(out_degree(g, 0) == 2);
    CHECK(out_degree(g, 3) == 0);
    CHECK(out_degree(g, 1) == 1);
    CHECK(ranking(g, 0) == 170);
    CHECK(ranking(g, 3) == 70);
    CHECK(ranking(TaskGraph(3), 1) == 0);
    CHECK_THROWS_AS(out_degree(g, 4), std::invalid_argument);
    CHECK_THROWS_AS(ranking(g, -1), std::invalid_argument);
}

TEST_CASE("priority_order examples") {
    CHECK(priority_order(oracle::make_g1()).order == std::vector<CoreId>{0, 1, 2, 3});
    CHECK(priority_order(TaskGraph(3)).order == std::vector<CoreId>{0, 1, 2});
    TaskGraph two(2);
    two.add_arc(0, 1, 1, 1);
    CHECK(priority_order(two).order == std::vector<CoreId>{0, 1});
    TaskGraph reversed(2);
    reversed.add_arc(1, 0, 1, 1);
    CHECK(priority_order(reversed).order == std::vector<CoreId>{1, 0});
    CHECK_THROWS_AS(priority_order(TaskGraph(0)), std::invalid_argument);
}

TEST_CASE("ranking and out_degree agree with the adjacency-matrix sums") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int cores = 2 + static_cast<int>(seed % 15);
        const int arcs = static_cast<int>((seed * 7) % (cores * (cores - 1) + 1));
        const auto g = generate_random_graph({cores, arcs, 0, 500, 0, 50}, seed);
        for (CoreId c = 0; c < cores; ++c) {
            CHECK(ranking(g, c) == oracle::ranking(g, c));
            CHECK(out_degree(g, c) == oracle::out_degree(g, c));
        }
    }
}

TEST_CASE("priority_order is a permutation with non-increasing keys") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int cores = 1 + static_cast<int>(seed % 20);
        const int arcs = static_cast<int>((seed * 13) % (cores * (cores - 1) + 1));
        // Narrow weight ranges force plenty of ties.
        const auto g = generate_random_graph({cores, arcs, 1, 3, 1, 1}, seed);
        const auto order = priority_order(g).order;

        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<CoreId> ids(cores);
        std::iota(ids.begin(), ids.end(), 0);
        REQUIRE(sorted == ids);

        for (std::size_t i = 1; i < order.size(); ++i) {
            auto key = [&](CoreId c) {
                return std::tuple{oracle::out_degree(g, c), oracle::ranking(g, c), -c};
            };
            CHECK(key(order[i - 1]) > key(order[i]));
        }
    }
}

TEST_CASE("serialize_graph round-trips through parse_graph") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int cores = 1 + static_cast<int>(seed % 12);
        const auto g = generate_random_graph({cores, cores * (cores - 1) / 2}, seed);
        const auto text = serialize_graph(g);
        const auto back = parse_graph(text);
        CHECK(back == g);
        CHECK(serialize_graph(back) == text);
    }
}

TEST_CASE("generate_random_graph") {
    const auto empty = generate_random_graph({4, 0}, 7);
    CHECK(empty.core_count() == 4);
    CHECK(empty.arcs().empty());

    const RandomGraphSpec spec{27, 40, 10, 1000, 1, 100};
    const auto a = generate_random_graph(spec, 42);
    CHECK(a == generate_random_graph(spec, 42));
    CHECK_FALSE(a == generate_random_graph(spec, 43));
    CHECK(a.core_count() == 27);
    CHECK(a.arcs().size() == 40);
    for (const auto& arc : a.arcs()) {
        CHECK(arc.src != arc.dst);
        CHECK(arc.volume >= 10);
        CHECK(arc.volume <= 1000);
        CHECK(arc.bandwidth >= 1);
        CHECK(arc.bandwidth <= 100);
    }

    const auto full = generate_random_graph({5, 20}, 1);
    CHECK(full.arcs().size() == 20);
    CHECK_THROWS_AS(generate_random_graph({5, 21}, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_random_graph({3, 1, 5, 4, 1, 1}, 1), std::invalid_argument);
}

TEST_CASE("TaskGraph rejects invalid arcs") {
    TaskGraph g(3);
    CHECK_THROWS_AS(g.add_arc(0, 0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_arc(0, 3, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_arc(0, 1, -1, 1), std::invalid_argument);
    g.add_arc(0, 1, 1, 1);
    CHECK_THROWS_AS(g.add_arc(0, 1, 2, 2), std::invalid_argument);
    g.add_arc(1, 0, 2, 2);  // reverse direction is a distinct arc
    CHECK(g.arcs().size() == 2);
}

TEST_CASE("induced_subgraph keeps only internal arcs") {
    const auto g = oracle::make_g1();
    const std::vector<CoreId> keep{3, 1};
    const auto sub = induced_subgraph(g, keep);
    CHECK(sub.core_count() == 2);
    REQUIRE(sub.arcs().size() == 1);
    CHECK(sub.arcs()[0] == Arc{1, 0, 50, 5});
}
