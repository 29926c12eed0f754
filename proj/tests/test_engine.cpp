#include "doctest.h"

#include <numeric>

#include "coevnet/engine.hpp"
#include "coevnet/rng.hpp"
#include "support.hpp"

using namespace coevnet;
using testing::complete_graph;
using testing::graph_of;
using testing::make_state;
using testing::path_graph;
using testing::set_row;

namespace {

SimConfig small_config(TypeDist dist, std::uint64_t seed = 3) {
    SimConfig c;
    c.nodes = 30;
    c.topics = 3;
    c.type_dist = dist;
    c.saturation = 0.2;
    c.steps = 20;
    c.seed = seed;
    return c;
}

std::size_t count_of(const SimState& s, Archetype a) {
    return static_cast<std::size_t>(std::count_if(s.agents.begin(), s.agents.end(),
                                                  [&](const AgentSpec& x) { return x.archetype == a; }));
}

}  // namespace

// --- rng --------------------------------------------------------------------

TEST_CASE("substream seeds are stable and distinct") {
    // Frozen values: changing them changes every published result.
    CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
    CHECK(substream_seed(1, Phase::choose, 0, 0) == substream_seed(1, Phase::choose, 0, 0));
    CHECK(substream_seed(1, Phase::choose, 0, 0) != substream_seed(1, Phase::choose, 0, 1));
    CHECK(substream_seed(1, Phase::choose, 0, 0) != substream_seed(1, Phase::update, 0, 0));
    CHECK(substream_seed(1, Phase::choose, 0, 0) != substream_seed(1, Phase::choose, 1, 0));
    CHECK(substream_seed(1, Phase::choose, 0, 0) != substream_seed(2, Phase::choose, 0, 0));
}

// --- config / init -----------------------------------------------------------

TEST_CASE("archetype counts use largest remainder") {
    using C = std::array<std::size_t, 3>;
    CHECK(archetype_counts({1, 0, 0}, 75) == C{75, 0, 0});
    CHECK(archetype_counts({0.7, 0.15, 0.15}, 75) == C{53, 11, 11});
    CHECK(archetype_counts({0.34, 0.33, 0.33}, 75) == C{25, 25, 25});
    CHECK(archetype_counts({0.5, 0.25, 0.25}, 75) == C{37, 19, 19});
    CHECK(archetype_counts({0.6, 0.2, 0.2}, 75) == C{45, 15, 15});
    CHECK(archetype_counts({0.5, 0.5, 0.0}, 75) == C{38, 37, 0});
    for (std::size_t n = 1; n < 60; ++n) {
        const auto c = archetype_counts({0.34, 0.33, 0.33}, n);
        CHECK(c[0] + c[1] + c[2] == n);
    }
}

TEST_CASE("init applies type_dist") {
    SimConfig c = small_config({1, 0, 0});
    c.nodes = 75;
    auto s = init(c);
    CHECK(count_of(s, Archetype::hom) == 75);

    c.type_dist = {0.7, 0.15, 0.15};
    s = init(c);
    CHECK(count_of(s, Archetype::hom) == 53);
    CHECK(count_of(s, Archetype::het) == 11);
    CHECK(count_of(s, Archetype::adv) == 11);
    // Shuffled, not blocked by type.
    CHECK_FALSE(std::all_of(s.agents.begin(), s.agents.begin() + 53,
                            [](const AgentSpec& a) { return a.archetype == Archetype::hom; }));
}

TEST_CASE("init is deterministic") {
    const auto c = small_config({0.34, 0.33, 0.33});
    CHECK(init(c).same_content(init(c)));
    auto d = c;
    d.seed = c.seed + 1;
    CHECK_FALSE(init(c).same_content(init(d)));
}

TEST_CASE("init mask modes") {
    auto c = small_config({1, 0, 0});
    auto s = init(c);
    for (auto [i, j] : s.graph.edges())
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(s.masks.at(i, j, k) == s.profile.at(i, k));
            CHECK(s.masks.at(j, i, k) == s.profile.at(j, k));
        }
    c.mask_init = MaskInit::all_hidden;
    s = init(c);
    for (auto [i, j] : s.graph.edges()) CHECK(*s.masks.find(i, j) == Mask(3, 0));
    CHECK_FALSE(check_invariants(s).has_value());
}

TEST_CASE("per-archetype overrides") {
    auto c = small_config({0.34, 0.33, 0.33});
    c.upd_thresh = 0.1;
    c.res_overrides[index_of(Archetype::het)] = 0.25;
    c.upd_prob_overrides[index_of(Archetype::adv)] = 1.0;
    CHECK(c.agent_spec(Archetype::hom).res == 0.1);
    CHECK(c.agent_spec(Archetype::het).res == 0.25);
    CHECK(c.agent_spec(Archetype::adv).upd_prob == 1.0);
    CHECK(c.agent_spec(Archetype::hom).upd_prob == 0.25);
}

TEST_CASE("SimConfig validation names every bad field") {
    SimConfig c;
    c.type_dist = {0.5, 0.3, 0.1};
    c.steps = -1;
    c.upd_prob = 2.0;
    c.nodes = 1;
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("type_dist") != std::string::npos);
        CHECK(msg.find("steps") != std::string::npos);
        CHECK(msg.find("upd_prob") != std::string::npos);
        CHECK(msg.find("nodes") != std::string::npos);
    }
    SimConfig r;
    r.res_overrides[1] = 0.75;
    CHECK_THROWS_AS(r.validate(), ConfigError);
}

// --- choose -----------------------------------------------------------------

TEST_CASE("phase_choose: isolate gets no actions") {
    auto s = make_state(graph_of(3, {{0, 1}}), std::vector<Archetype>(3, Archetype::hom), 2);
    const auto plan = phase_choose(s);
    CHECK(plan[2].empty());
    CHECK(plan[0].size() == 1);
}

TEST_CASE("phase_choose: nothing to reveal and no unfriending gives all NOP") {
    auto c = small_config({0.34, 0.33, 0.33});
    c.unf_prob = 0.0;
    auto s = init(c);
    for (const auto& list : phase_choose(s))
        for (const auto& a : list) CHECK(a.kind == Action::Kind::nop);
}

TEST_CASE("phase_choose: both endpoints may unfriend the same edge") {
    auto s = make_state(graph_of(2, {{0, 1}}), std::vector<Archetype>(2, Archetype::hom), 2);
    set_row(s, 1, {-1, -1});
    for (auto& a : s.agents) a.unf_prob = 1.0;
    const auto plan = phase_choose(s);
    CHECK(plan[0] == std::vector<Action>{Action::unfriend(0, 1)});
    CHECK(plan[1] == std::vector<Action>{Action::unfriend(1, 0)});
}

TEST_CASE("phase_choose is independent of evaluation order") {
    // Each agent's choice depends only on its own substream.
    auto s = init(small_config({0, 1, 0}));
    s.masks = MaskStore(30, 3);
    for (auto [i, j] : s.graph.edges()) s.masks.open(i, j);
    const auto plan = phase_choose(s);
    for (NodeId i = 0; i < 30; ++i) {
        Rng rng = substream(s.seed, Phase::choose, s.t, i);
        CHECK(plan[i] == default_policy(i, s.view(), rng));
    }
}

namespace {

struct AlwaysUnfriend final : Policy {
    std::vector<Action> choose(NodeId i, const ModelView& v, Rng&) const override {
        std::vector<Action> out;
        for (NodeId j : v.graph.neighbors(i)) out.push_back(Action::unfriend(i, j));
        return out;
    }
};

}  // namespace

TEST_CASE("custom policies plug in per archetype") {
    auto s = init(small_config({0.5, 0.5, 0}));
    s.policies[index_of(Archetype::het)] = std::make_shared<AlwaysUnfriend>();
    step(s);
    for (NodeId i = 0; i < 30; ++i)
        if (s.agents[i].archetype == Archetype::het) {
            // Only closure edges from this step can remain.
            for (NodeId j : s.graph.neighbors(i)) CHECK(s.masks.find(i, j)->at(0) == 0);
        }
}

// --- execute ----------------------------------------------------------------

TEST_CASE("execute: unfriend wins over a simultaneous reveal") {
    auto s = make_state(graph_of(2, {{0, 1}}), std::vector<Archetype>(2, Archetype::hom), 2, false);
    StepLog log;
    phase_execute(s, {{Action::unfriend(0, 1)}, {Action::reveal(1, 0, 0)}}, &log);
    CHECK_FALSE(s.graph.has_edge(0, 1));
    CHECK(s.masks.find(1, 0) == nullptr);
    CHECK(s.masks.at(1, 0, 0) == 0);
    CHECK(log.edges_removed.size() == 1);
    CHECK_FALSE(check_invariants(s).has_value());
}

TEST_CASE("execute: mutual unfriend removes the edge once") {
    auto s = make_state(graph_of(3, {{0, 1}, {1, 2}}), std::vector<Archetype>(3, Archetype::hom), 2);
    StepLog log;
    phase_execute(s, {{Action::unfriend(0, 1)}, {Action::unfriend(1, 0)}, {}}, &log);
    CHECK(s.graph.edge_count() == 1);
    CHECK(log.edges_removed == std::vector<std::pair<NodeId, NodeId>>{{0, 1}});
    CHECK(s.masks.at(0, 1, 0) == 0);
    CHECK(s.masks.at(1, 0, 0) == 0);
}

TEST_CASE("execute: reveal on an intact edge") {
    auto s = make_state(graph_of(2, {{0, 1}}), std::vector<Archetype>(2, Archetype::hom), 2, false);
    set_row(s, 0, {-1, 1});
    phase_execute(s, {{Action::reveal(0, 1, 0)}, {}});
    CHECK(s.masks.at(0, 1, 0) == -1);
    CHECK(s.masks.at(0, 1, 1) == 0);
}

TEST_CASE("execute: malformed actions are rejected") {
    auto s = make_state(graph_of(2, {{0, 1}}), std::vector<Archetype>(2, Archetype::hom), 2);
    CHECK_THROWS_AS(phase_execute(s, {{Action::reveal(0, 1, 9)}, {}}), std::logic_error);
    CHECK_THROWS_AS(phase_execute(s, {{Action::unfriend(0, 0)}, {}}), std::logic_error);
    CHECK_THROWS_AS(phase_execute(s, {{Action::unfriend(0, 7)}, {}}), std::logic_error);
}

// --- update -----------------------------------------------------------------

TEST_CASE("update: consensus produces no flips") {
    auto s = make_state(complete_graph(6), std::vector<Archetype>(6, Archetype::hom), 3);
    for (auto& a : s.agents) a.upd_prob = 1.0;
    StepLog log;
    phase_update(s, &log);
    CHECK(log.flips.empty());
}

TEST_CASE("update: HOM facing two opposed neighbors flips") {
    auto s = make_state(graph_of(3, {{0, 1}, {0, 2}}), std::vector<Archetype>(3, Archetype::hom), 1);
    set_row(s, 1, {-1});
    set_row(s, 2, {-1});
    s.agents[0].upd_prob = 1.0;
    s.agents[1].upd_prob = 0.0;
    s.agents[2].upd_prob = 0.0;
    StepLog log;
    phase_update(s, &log);
    CHECK(s.profile.at(0, 0) == -1);
    CHECK(log.flips == std::vector<OpinionFlip>{{0, 0, 1, -1}});
    // Revealed entries track the new opinion.
    CHECK(s.masks.at(0, 1, 0) == -1);
    CHECK_FALSE(check_invariants(s).has_value());
}

TEST_CASE("two ADV agents oscillate with period two") {
    auto s = make_state(graph_of(2, {{0, 1}}), std::vector<Archetype>(2, Archetype::adv), 3);
    for (auto& a : s.agents) {
        a.upd_prob = 1.0;
        a.res = 0.0;
    }
    const auto start = s.profile;
    for (int t = 1; t <= 6; ++t) {
        phase_update(s);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(s.profile.at(0, k) == s.profile.at(1, k));
            CHECK(s.profile.at(0, k) == (t % 2 ? -start.at(0, k) : start.at(0, k)));
        }
        CHECK_FALSE(check_invariants(s).has_value());
    }
}

TEST_CASE("two ADV agents oscillate through full steps") {
    auto s = make_state(graph_of(2, {{0, 1}}), std::vector<Archetype>(2, Archetype::adv), 2);
    for (auto& a : s.agents) {
        a.upd_prob = 1.0;
        a.unf_prob = 0.0;
    }
    std::vector<OpinionProfile> traj{s.profile};
    for (int t = 0; t < 12; ++t) {
        step(s);
        traj.push_back(s.profile);
    }
    CHECK(detect_oscillation(traj, 10));
    CHECK(s.graph.has_edge(0, 1));
}

// --- grow -------------------------------------------------------------------

TEST_CASE("grow phase") {
    SUBCASE("friend_prob 0 leaves topology alone") {
        auto s = make_state(path_graph(4), std::vector<Archetype>(4, Archetype::hom), 2);
        s.friend_prob = 0.0;
        const auto before = s.graph;
        phase_grow(s);
        CHECK(s.graph == before);
    }
    SUBCASE("path closes into a triangle with hidden masks") {
        auto s = make_state(path_graph(3), std::vector<Archetype>(3, Archetype::hom), 2);
        s.friend_prob = 1.0;
        StepLog log;
        phase_grow(s, &log);
        CHECK(s.graph.has_edge(0, 2));
        CHECK(*s.masks.find(0, 2) == Mask{0, 0});
        CHECK(*s.masks.find(2, 0) == Mask{0, 0});
        CHECK(log.edges_added == std::vector<std::pair<NodeId, NodeId>>{{0, 2}});
        CHECK_FALSE(check_invariants(s).has_value());
    }
    SUBCASE("complete graph has nothing to close") {
        auto s = make_state(complete_graph(5), std::vector<Archetype>(5, Archetype::hom), 2);
        s.friend_prob = 1.0;
        const auto before = s.graph;
        phase_grow(s);
        CHECK(s.graph == before);
    }
}

// --- step / run --------------------------------------------------------------

TEST_CASE("consensus complete HOM graph is a fixed point") {
    auto s = make_state(complete_graph(6), std::vector<Archetype>(6, Archetype::hom), 4);
    s.friend_prob = 0.05;
    const auto before = s;
    const auto log = step(s);
    CHECK(s.t == 1);
    CHECK(log.t == 1);
    auto expected = before;
    expected.t = 1;
    CHECK(s.same_content(expected));
    CHECK(log.flips.empty());
    CHECK(log.edges_added.empty());
    CHECK(log.edges_removed.empty());
    for (const auto& list : log.actions)
        for (const auto& a : list) CHECK(a.kind == Action::Kind::nop);
    CHECK(log.rewards == std::vector<double>(6, 1.0));
}

TEST_CASE("step is deterministic") {
    auto a = init(small_config({0.34, 0.33, 0.33}));
    auto b = init(small_config({0.34, 0.33, 0.33}));
    for (int t = 0; t < 10; ++t) CHECK(step(a) == step(b));
    CHECK(a.same_content(b));
}

TEST_CASE("full-size run completes") {
    SimConfig c;
    c.type_dist = {0.34, 0.33, 0.33};
    c.seed = 11;
    const auto r = run(c);
    CHECK(r.frames.size() == 101);
    CHECK(r.trajectory.size() == 101);
    CHECK(r.logs.size() == 100);
    CHECK(r.final_state.t == 100);
    CHECK(r.logs.back().t == 100);
    CHECK(r.frames.back().t == 100);
    CHECK_FALSE(check_invariants(r.final_state).has_value());
}

TEST_CASE("steps = 0 records only the initial frame") {
    auto c = small_config({1, 0, 0});
    c.steps = 0;
    const auto r = run(c);
    CHECK(r.frames.size() == 1);
    CHECK(r.trajectory.size() == 1);
    CHECK(r.logs.empty());
    CHECK(r.final_state.same_content(init(c)));
}

TEST_CASE("replicas with different seeds differ") {
    std::vector<SimResult> rs;
    for (std::uint64_t s = 40; s < 50; ++s) rs.push_back(run(small_config({0.34, 0.33, 0.33}, s)));
    for (std::size_t a = 0; a < rs.size(); ++a)
        for (std::size_t b = a + 1; b < rs.size(); ++b)
            CHECK_FALSE(rs[a].final_state.same_content(rs[b].final_state));
}

// --- invariants across phases -------------------------------------------------

TEST_CASE("invariants hold at every phase boundary") {
    const TypeDist dists[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.34, 0.33, 0.33}, {0.7, 0.15, 0.15}};
    std::uint64_t seed = 100;
    for (const auto& d : dists) {
        for (auto mask : {MaskInit::all_visible, MaskInit::all_hidden}) {
            auto c = small_config(d, ++seed);
            c.mask_init = mask;
            c.weight_init = WeightInit::uniform_random();
            c.friend_prob = 0.2;
            auto s = init(c);
            REQUIRE_FALSE(check_invariants(s).has_value());
            for (int t = 0; t < 15; ++t) {
                StepLog log;
                log.actions = phase_choose(s);
                phase_execute(s, log.actions, &log);
                auto v = check_invariants(s);
                CHECK_MESSAGE(!v.has_value(), v.value_or(""));
                for (auto [i, j] : log.edges_removed) {
                    CHECK(s.masks.at(i, j, 0) == 0);
                    CHECK(s.masks.at(j, i, 0) == 0);
                }
                phase_update(s, &log);
                v = check_invariants(s);
                CHECK_MESSAGE(!v.has_value(), v.value_or(""));
                phase_grow(s, &log);
                v = check_invariants(s);
                CHECK_MESSAGE(!v.has_value(), v.value_or(""));
                CHECK(s.graph.node_count() == 30);
                ++s.t;
            }
        }
    }
}

TEST_CASE("every unfriend in a run leaves zeroed masks") {
    auto r = run(small_config({0.34, 0.33, 0.33}, 5));
    // Replay and check right after each step.
    auto s = init(r.config);
    for (const auto& expected : r.logs) {
        const auto log = step(s);
        CHECK(log == expected);
        for (auto [i, j] : log.edges_removed) {
            if (s.graph.has_edge(i, j)) continue;  // re-added by closure in the same step
            CHECK(s.masks.find(i, j) == nullptr);
            CHECK(s.masks.find(j, i) == nullptr);
        }
    }
}
