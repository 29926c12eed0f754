#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "coevnet/engine.hpp"

namespace testing {

using namespace coevnet;

inline SocialGraph graph_of(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
    SocialGraph g(n);
    for (auto [i, j] : edges) g.add_edge(i, j);
    return g;
}

inline SocialGraph path_graph(std::size_t n) {
    SocialGraph g(n);
    for (NodeId i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

inline SocialGraph complete_graph(std::size_t n) {
    SocialGraph g(n);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

/// State over `g` with every opinion +1, masks opened and (optionally) fully
/// revealed, and one agent per entry of `types`.
inline SimState make_state(SocialGraph g, std::vector<Archetype> types, std::size_t topics,
                           bool reveal = true, std::uint64_t seed = 7) {
    SimState s;
    s.seed = seed;
    const std::size_t n = g.node_count();
    s.profile = OpinionProfile(n, topics);
    s.masks = MaskStore(n, topics);
    for (auto [i, j] : g.edges()) {
        s.masks.open(i, j);
        if (reveal) s.masks.reveal_all(i, j, s.profile);
    }
    s.graph = std::move(g);
    for (auto a : types) {
        AgentSpec spec;
        spec.archetype = a;
        s.agents.push_back(spec);
    }
    return s;
}

/// Sets b_i to `row` and re-syncs revealed entries.
inline void set_row(SimState& s, NodeId i, std::initializer_list<int> row) {
    std::size_t k = 0;
    for (int v : row) {
        s.profile.set(i, k, static_cast<Opinion>(v));
        s.masks.sync(i, k, s.profile);
        ++k;
    }
}

}  // namespace testing
