#include "doctest.h"

#include <set>

#include "coevnet/graph.hpp"
#include "coevnet/oracle.hpp"
#include "support.hpp"

using namespace coevnet;
using testing::complete_graph;
using testing::graph_of;
using testing::path_graph;

namespace {

GenSpec spec_of(GeneratorKind kind, std::size_t n, double sat, std::uint64_t seed = 1) {
    GenSpec s;
    s.kind = kind;
    s.n = n;
    s.saturation = sat;
    s.seed = seed;
    return s;
}

SocialGraph star(std::size_t leaves) {
    SocialGraph g(leaves + 1);
    for (NodeId l = 1; l <= leaves; ++l) g.add_edge(0, l);
    return g;
}

}  // namespace

TEST_CASE("random generator, two nodes at saturation 1 gives the single edge") {
    const auto g = generate(spec_of(GeneratorKind::random, 2, 1.0));
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(0, 1));
}

TEST_CASE("small-world lattice degree") {
    // 0.15 * 74 / 2 = 5.55 rounds to 6, so k = 12.
    CHECK(small_world_degree(75, 0.15) == 12);
    // 0.05 * 74 / 2 = 1.85 -> 2 -> k = 4.
    CHECK(small_world_degree(75, 0.05) == 4);
    CHECK(small_world_degree(75, 0.0) == 2);
    CHECK(small_world_degree(10, 1.0) == 10);

    // Rewiring moves edges but keeps the count.
    const auto g = generate(spec_of(GeneratorKind::small_world, 75, 0.15));
    CHECK(g.edge_count() == 75 * 12 / 2);

    GenSpec fixed = spec_of(GeneratorKind::small_world, 20, 0.0);
    fixed.lattice_degree = 4;
    const auto ring = generate(fixed);
    for (NodeId i = 0; i < 20; ++i) {
        CHECK(ring.degree(i) == 4);
        CHECK(ring.has_edge(i, (i + 1) % 20));
        CHECK(ring.has_edge(i, (i + 2) % 20));
    }
}

TEST_CASE("random generator density over 50 seeds") {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto g = generate(spec_of(GeneratorKind::random, 100, 0.1, seed));
        total += 2.0 * static_cast<double>(g.edge_count()) / (100.0 * 99.0);
    }
    const double mean = total / 50.0;
    CHECK(mean >= 0.08);
    CHECK(mean <= 0.12);
}

TEST_CASE("random generator extremes") {
    CHECK(generate(spec_of(GeneratorKind::random, 12, 0.0)).edge_count() == 0);
    CHECK(generate(spec_of(GeneratorKind::random, 12, 1.0)).edge_count() == 66);
}

TEST_CASE("scale-free generator") {
    CHECK(scale_free_attachments(75, 0.15) == 6);
    const auto g = generate(spec_of(GeneratorKind::scale_free, 75, 0.15));
    // Star seed on m+1 nodes, then m edges for every later node.
    CHECK(g.edge_count() == 6 + (75 - 7) * 6);
    for (NodeId i = 0; i < 75; ++i) CHECK(g.degree(i) >= 1);
}

TEST_CASE("generate is reproducible and seed-sensitive") {
    for (auto kind : {GeneratorKind::random, GeneratorKind::small_world, GeneratorKind::scale_free}) {
        CAPTURE(to_string(kind));
        const auto a = generate(spec_of(kind, 40, 0.2, 9));
        const auto b = generate(spec_of(kind, 40, 0.2, 9));
        const auto c = generate(spec_of(kind, 40, 0.2, 10));
        CHECK(a == b);
        CHECK(a.edges() != c.edges());
    }
}

TEST_CASE("generated weights follow WeightInit") {
    GenSpec s = spec_of(GeneratorKind::random, 30, 0.3);
    s.weights = WeightInit::constant(0.4);
    const auto g = generate(s);
    for (auto [i, j] : g.edges()) {
        CHECK(g.weight(i, j) == 0.4);
        CHECK(g.weight(j, i) == 0.4);
    }
    s.weights = WeightInit::uniform_random();
    const auto r = generate(s);
    std::set<double> seen;
    for (auto [i, j] : r.edges()) {
        for (double w : {r.weight(i, j), r.weight(j, i)}) {
            CHECK(w >= 0.0);
            CHECK(w <= 1.0);
            seen.insert(w);
        }
    }
    CHECK(seen.size() > 1);
}

TEST_CASE("GenSpec validation") {
    CHECK_THROWS_AS(generate(spec_of(GeneratorKind::random, 1, 0.1)), ConfigError);
    CHECK_THROWS_AS(generate(spec_of(GeneratorKind::random, 10, 1.5)), ConfigError);
    CHECK_THROWS_AS(generate(spec_of(GeneratorKind::random, 10, -0.1)), ConfigError);
    GenSpec odd = spec_of(GeneratorKind::small_world, 10, 0.1);
    odd.lattice_degree = 3;
    CHECK_THROWS_AS(generate(odd), ConfigError);
    CHECK(generator_from_string("scale_free") == GeneratorKind::scale_free);
    CHECK_FALSE(generator_from_string("lattice").has_value());
}

TEST_CASE("add_edge") {
    SocialGraph g(2);
    CHECK(g.add_edge(0, 1));
    CHECK(g.edge_count() == 1);
    CHECK_FALSE(g.add_edge(0, 1));
    CHECK_FALSE(g.add_edge(1, 0));
    CHECK(g.edge_count() == 1);
    CHECK_THROWS_AS(g.add_edge(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 5), std::out_of_range);
}

TEST_CASE("add_edge stores both weight orientations") {
    SocialGraph g(3);
    g.add_edge(0, 2, 0.25, 0.75);
    CHECK(g.weight(0, 2) == 0.25);
    CHECK(g.weight(2, 0) == 0.75);
    g.set_weight(2, 0, 0.5);
    CHECK(g.weight(2, 0) == 0.5);
    CHECK_THROWS(g.set_weight(0, 1, 0.5));
}

TEST_CASE("remove_edge") {
    auto g = path_graph(3);
    CHECK(g.remove_edge(0, 1));
    CHECK(g.edge_count() == 1);
    CHECK(g.neighbors(0).empty());
    CHECK_FALSE(g.has_edge(1, 0));
    CHECK_THROWS(g.weight(0, 1));
    CHECK_THROWS(g.weight(1, 0));

    auto h = path_graph(3);
    const auto before = h;
    CHECK_FALSE(h.remove_edge(0, 2));
    CHECK(h == before);
}

TEST_CASE("neighbors") {
    CHECK(path_graph(3).neighbors(1) == std::vector<NodeId>{0, 2});
    CHECK(SocialGraph(4).neighbors(2).empty());
    const auto k4 = complete_graph(4);
    for (NodeId i = 0; i < 4; ++i) CHECK(k4.neighbors(i).size() == 3);
}

TEST_CASE("triadic candidates examples") {
    using Pairs = std::vector<std::pair<NodeId, NodeId>>;
    CHECK(triadic_candidates(path_graph(3)) == Pairs{{0, 2}});
    CHECK(triadic_candidates(complete_graph(3)).empty());
    const auto s = triadic_candidates(star(4));
    CHECK(s.size() == 6);
    CHECK(s == oracle::triadic_by_pair_scan(star(4)));
    for (auto [i, j] : s) {
        CHECK(i >= 1);
        CHECK(j > i);
    }
}

TEST_CASE("triadic candidates across a 64-bit word boundary") {
    SocialGraph g(130);
    g.add_edge(0, 65);
    g.add_edge(65, 129);
    g.add_edge(63, 64);
    g.add_edge(64, 127);
    CHECK(triadic_candidates(g) == oracle::triadic_by_pair_scan(g));
}

TEST_CASE("grow examples") {
    Rng rng(3);
    auto g = path_graph(3);
    CHECK(grow(g, 0.0, rng).empty());
    CHECK(g.edge_count() == 2);

    const auto added = grow(g, 1.0, rng);
    CHECK(added == std::vector<std::pair<NodeId, NodeId>>{{0, 2}});
    CHECK(g.has_edge(0, 2));

    CHECK_THROWS_AS(grow(g, 1.5, rng), ConfigError);
}

TEST_CASE("grow on a five-node star adds 0.3 edges per call on average") {
    Rng rng(12345);
    std::size_t total = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        auto g = star(4);
        total += grow(g, 0.05, rng).size();
    }
    const double mean = static_cast<double>(total) / trials;
    CHECK(std::abs(mean - 0.3) <= 0.02);
}

TEST_CASE("grow only closes triads") {
    Rng rng(8);
    for (int c = 0; c < 200; ++c) {
        auto g = oracle::random_graph(12, 0.2, rng);
        const auto before = g;
        for (auto [i, j] : grow(g, 0.7, rng)) {
            const auto hops = hop_distance(before, i, j);
            REQUIRE(hops.has_value());
            CHECK(*hops == 2);
        }
    }
}

TEST_CASE("grow assigns weights from WeightInit") {
    Rng rng(2);
    auto g = path_graph(3);
    grow(g, 1.0, rng, WeightInit::constant(0.3));
    CHECK(g.weight(0, 2) == 0.3);
    CHECK(g.weight(2, 0) == 0.3);
}

TEST_CASE("adjacency stays symmetric under random edits") {
    Rng rng(99);
    SocialGraph g(15);
    std::uniform_int_distribution<NodeId> node(0, 14);
    for (int op = 0; op < 2000; ++op) {
        const NodeId i = node(rng), j = node(rng);
        if (i == j) continue;
        if (op % 3 == 0) g.remove_edge(i, j);
        else g.add_edge(i, j, 0.5, 0.5);
    }
    std::size_t half_edges = 0;
    for (NodeId i = 0; i < 15; ++i)
        for (NodeId j : g.neighbors(i)) {
            CHECK(g.has_edge(j, i));
            ++half_edges;
        }
    CHECK(half_edges == 2 * g.edge_count());
}
