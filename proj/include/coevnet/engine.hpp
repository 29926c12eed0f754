#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "coevnet/graph.hpp"
#include "coevnet/metrics.hpp"
#include "coevnet/opinion.hpp"

namespace coevnet {

enum class MaskInit { all_visible, all_hidden };

std::string to_string(MaskInit m);
std::optional<MaskInit> mask_init_from_string(const std::string& name);

/// Archetype proportions in (hom, het, adv) order.
using TypeDist = std::array<double, 3>;

struct SimConfig {
    std::int64_t nodes = 75;
    std::int64_t topics = 4;  // K
    TypeDist type_dist{1.0, 0.0, 0.0};
    double saturation = 0.15;
    double upd_thresh = 0.0;
    double upd_prob = 0.25;
    double unf_thresh = 0.5;
    double unf_prob = 0.9;
    double friend_prob = 0.05;
    std::int64_t steps = 100;
    std::uint64_t seed = 0;
    GeneratorKind generator = GeneratorKind::small_world;
    MaskInit mask_init = MaskInit::all_visible;
    WeightInit weight_init{};
    std::array<std::optional<double>, 3> res_overrides{};
    std::array<std::optional<double>, 3> upd_prob_overrides{};
    std::optional<std::int64_t> sw_degree{};

    /// Throws ConfigError naming every offending field.
    void validate() const;
    AgentSpec agent_spec(Archetype a) const;
    GenSpec gen_spec() const;

    bool operator==(const SimConfig&) const = default;
};

/// Largest-remainder apportionment of n agents over the three archetypes.
std::array<std::size_t, 3> archetype_counts(const TypeDist& dist, std::size_t n);

struct SimState {
    std::size_t t = 0;
    std::uint64_t seed = 0;
    SocialGraph graph;
    OpinionProfile profile;
    MaskStore masks;
    std::vector<AgentSpec> agents;
    WeightInit weight_init{};
    double friend_prob = 0.0;
    double self_weight = 1.0;
    /// Per-archetype policy override; null selects default_policy.
    std::array<std::shared_ptr<const Policy>, 3> policies{};

    ModelView view() const { return {graph, profile, masks, agents, self_weight}; }

    /// Equality over simulation content; installed policies are ignored.
    bool same_content(const SimState& other) const;
};

/// Actions chosen in one step, indexed by actor.
using ActionPlan = std::vector<std::vector<Action>>;

struct OpinionFlip {
    NodeId agent;
    std::size_t topic;
    Opinion from;
    Opinion to;
    bool operator==(const OpinionFlip&) const = default;
};

struct StepLog {
    std::size_t t = 0;  // step index after the transition
    ActionPlan actions;
    std::vector<OpinionFlip> flips;
    std::vector<std::pair<NodeId, NodeId>> edges_added;
    std::vector<std::pair<NodeId, NodeId>> edges_removed;
    std::vector<double> rewards;

    bool operator==(const StepLog&) const = default;
};

struct SimResult {
    SimConfig config;
    std::vector<MetricFrame> frames;          // t = 0..steps
    std::vector<OpinionProfile> trajectory;   // t = 0..steps
    std::vector<StepLog> logs;                // t = 1..steps
    SimState final_state;
};

SimState init(const SimConfig& config);

ActionPlan phase_choose(const SimState& state);
void phase_execute(SimState& state, const ActionPlan& actions, StepLog* log = nullptr);
void phase_update(SimState& state, StepLog* log = nullptr);
void phase_grow(SimState& state, StepLog* log = nullptr);

StepLog step(SimState& state);

/// Snapshot of metrics for the current state.
MetricFrame measure(const SimState& state);

SimResult run(const SimConfig& config);

/// Checks the cross-structure invariants (mask validity, weight ranges,
/// symmetric topology). Returns a description of the first violation.
std::optional<std::string> check_invariants(const SimState& state);

}  // namespace coevnet
