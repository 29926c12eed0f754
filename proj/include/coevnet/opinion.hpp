#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coevnet/graph.hpp"

namespace coevnet {

enum class Archetype : std::uint8_t { hom = 0, het = 1, adv = 2 };

inline constexpr std::array<Archetype, 3> kArchetypes{Archetype::hom, Archetype::het, Archetype::adv};

std::string_view to_string(Archetype a);
std::optional<Archetype> archetype_from_string(std::string_view name);
inline std::size_t index_of(Archetype a) { return static_cast<std::size_t>(a); }

using Opinion = std::int8_t;  // -1 or +1
using Mask = std::vector<std::int8_t>;

/// Private opinion vectors of all agents, stored row-major (node, topic).
class OpinionProfile {
public:
    OpinionProfile() = default;
    OpinionProfile(std::size_t n, std::size_t topics);

    /// Every entry i.i.d. uniform on {-1,+1}.
    static OpinionProfile random(std::size_t n, std::size_t topics, Rng& rng);

    std::size_t node_count() const { return n_; }
    std::size_t topics() const { return k_; }

    Opinion at(NodeId i, std::size_t k) const { return data_[i * k_ + k]; }
    void set(NodeId i, std::size_t k, Opinion value);
    std::span<const Opinion> row(NodeId i) const { return {data_.data() + i * k_, k_}; }

    bool operator==(const OpinionProfile&) const = default;

private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<Opinion> data_;
};

/// Revelation vectors m_ij, present only for current edges.
///
/// An absent entry reads as all-hidden, which is how the store represents
/// non-edges. Entries are created by `open` when an edge appears and erased by
/// `close` when it goes away.
class MaskStore {
public:
    MaskStore() = default;
    MaskStore(std::size_t n, std::size_t topics) : k_(topics), rows_(n) {}

    std::size_t topics() const { return k_; }
    std::size_t node_count() const { return rows_.size(); }

    /// Starts both directions of a new edge at 0^K.
    void open(NodeId i, NodeId j);
    /// Reveals every topic in both directions of an existing edge.
    void reveal_all(NodeId i, NodeId j, const OpinionProfile& profile);
    /// Zeroes both directions, keeping the pair tracked.
    void clear(NodeId i, NodeId j);
    /// Stops tracking both directions (the edge is gone).
    void close(NodeId i, NodeId j);

    bool tracks(NodeId i, NodeId j) const;
    std::int8_t at(NodeId i, NodeId j, std::size_t k) const;
    /// m_ij, or nullptr when (i,j) is not an edge.
    const Mask* find(NodeId i, NodeId j) const;

    /// Sets m_ijk = b_ik. Returns false (store unchanged) if (i,j) is not an edge.
    bool reveal(NodeId i, NodeId j, std::size_t k, const OpinionProfile& profile);

    /// Rewrites every revealed m_ijk to the current b_ik.
    void sync(NodeId i, std::size_t k, const OpinionProfile& profile);

    /// Masks i has shown to each neighbor, keyed by neighbor.
    const std::map<NodeId, Mask>& outgoing(NodeId i) const { return rows_.at(i); }

    bool operator==(const MaskStore&) const = default;

private:
    std::size_t k_ = 0;
    std::vector<std::map<NodeId, Mask>> rows_;
};

enum ActionBits : std::uint8_t { kReveal = 1, kUnfriend = 2, kNop = 4, kAllActions = 7 };

struct AgentSpec {
    Archetype archetype = Archetype::hom;
    double res = 0.0;
    double upd_prob = 0.25;
    double unf_prob = 0.9;
    double unf_thresh = 0.5;
    std::uint8_t actions = kAllActions;

    bool can(ActionBits a) const { return (actions & a) != 0; }
    void validate() const;
    bool operator==(const AgentSpec&) const = default;
};

struct PairDistance {
    std::optional<double> value;
    std::size_t revealed = 0;

    bool defined() const { return value.has_value(); }
};

struct Action {
    enum class Kind : std::uint8_t { nop, reveal, unfriend };
    Kind kind = Kind::nop;
    NodeId actor = 0;
    NodeId target = 0;
    std::size_t topic = 0;

    static Action nop(NodeId i, NodeId j) { return {Kind::nop, i, j, 0}; }
    static Action reveal(NodeId i, NodeId j, std::size_t k) { return {Kind::reveal, i, j, k}; }
    static Action unfriend(NodeId i, NodeId j) { return {Kind::unfriend, i, j, 0}; }

    bool operator==(const Action&) const = default;
};

std::string_view to_string(Action::Kind kind);

/// Read-only snapshot of everything the opinion rules look at.
struct ModelView {
    const SocialGraph& graph;
    const OpinionProfile& profile;
    const MaskStore& masks;
    std::span<const AgentSpec> agents;
    double self_weight = 1.0;
};

/// One element of agent i's view: what `source` has revealed to i, together
/// with the influence weight w_{source,i}. The observer itself appears with
/// its full private opinion.
struct ViewEntry {
    NodeId source;
    double weight;
    Mask revealed;
};

std::vector<ViewEntry> observe(NodeId i, const ModelView& view);

/// How far i perceives itself from j, judged on the topics j revealed to i.
PairDistance distance(NodeId i, NodeId j, const OpinionProfile& profile, const MaskStore& masks);

double pair_reward(Archetype a, double d);

/// Mean pairwise reward over neighbors with a defined distance, 0 if none.
double neighborhood_reward(NodeId i, const ModelView& view);

/// Influence-weighted mean of the closed-neighborhood view. Hidden entries
/// contribute zero while their holder's weight still normalizes.
std::vector<double> aggregate_opinion(NodeId i, const ModelView& view);

Opinion update_opinion(Archetype a, Opinion current, double aggregate, double res, double upd_prob,
                       Rng& rng);

/// Pluggable decision rule; `choose` sees the frozen snapshot and must return
/// at most one action per neighbor.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::vector<Action> choose(NodeId i, const ModelView& snapshot, Rng& rng) const = 0;
};

/// Unfriend-or-reveal template shared by every built-in archetype.
std::vector<Action> default_policy(NodeId i, const ModelView& snapshot, Rng& rng);

class DefaultPolicy final : public Policy {
public:
    std::vector<Action> choose(NodeId i, const ModelView& snapshot, Rng& rng) const override {
        return default_policy(i, snapshot, rng);
    }
};

inline bool reveal_mask(MaskStore& masks, NodeId i, NodeId j, std::size_t k,
                        const OpinionProfile& profile) {
    return masks.reveal(i, j, k, profile);
}

inline void clear_masks_on_unfriend(MaskStore& masks, NodeId i, NodeId j) { masks.clear(i, j); }

}  // namespace coevnet
