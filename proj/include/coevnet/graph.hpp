#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace coevnet {

using NodeId = std::size_t;
using Rng = std::mt19937_64;

/// Raised for invalid parameters of any configurable object.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class GeneratorKind { random, small_world, scale_free };

std::string to_string(GeneratorKind kind);
std::optional<GeneratorKind> generator_from_string(const std::string& name);

/// How fresh edges get their two directed influence weights.
struct WeightInit {
    enum class Kind { constant, uniform_random };
    Kind kind = Kind::constant;
    double value = 1.0;  // only meaningful for constant

    static WeightInit constant(double c) { return {Kind::constant, c}; }
    static WeightInit uniform_random() { return {Kind::uniform_random, 0.0}; }

    double draw(Rng& rng) const;
    bool operator==(const WeightInit&) const = default;
};

struct GenSpec {
    GeneratorKind kind = GeneratorKind::small_world;
    std::size_t n = 0;
    double saturation = 0.0;
    std::uint64_t seed = 0;
    WeightInit weights{};
    // Overrides the small-world lattice degree derived from saturation.
    std::optional<std::size_t> lattice_degree{};

    void validate() const;
};

/// Ring-lattice degree used by the small-world generator for this spec.
std::size_t small_world_degree(std::size_t n, double saturation);
/// Edges attached per new node by the scale-free generator.
std::size_t scale_free_attachments(std::size_t n, double saturation);

/// Undirected topology carrying a weight for each direction of every edge.
///
/// `weight(i, j)` is w_ij, the influence i exerts over j. Neighbor lists are
/// kept sorted so iteration order is stable and ascending.
class SocialGraph {
public:
    SocialGraph() = default;
    explicit SocialGraph(std::size_t n) : out_(n) {}

    std::size_t node_count() const { return out_.size(); }
    std::size_t edge_count() const { return edges_; }

    bool has_edge(NodeId i, NodeId j) const;

    /// Inserts {i,j}. Returns false (weights untouched) if already present.
    bool add_edge(NodeId i, NodeId j, double w_ij = 1.0, double w_ji = 1.0);
    /// Returns true if an edge was removed.
    bool remove_edge(NodeId i, NodeId j);

    std::vector<NodeId> neighbors(NodeId i) const;
    std::size_t degree(NodeId i) const;

    double weight(NodeId from, NodeId to) const;
    void set_weight(NodeId from, NodeId to, double w);

    /// Directed weights out of i, keyed by neighbor.
    const std::map<NodeId, double>& out_weights(NodeId i) const;

    /// Every edge once as (i, j) with i < j, in lexicographic order.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    bool operator==(const SocialGraph&) const = default;

private:
    void check_node(NodeId i) const;

    std::vector<std::map<NodeId, double>> out_;
    std::size_t edges_ = 0;
};

SocialGraph generate(const GenSpec& spec);

/// Unconnected pairs (i < j) sharing at least one neighbor, sorted.
std::vector<std::pair<NodeId, NodeId>> triadic_candidates(const SocialGraph& g);

/// One closure trial per candidate pair. Added edges get weights from `init`.
std::vector<std::pair<NodeId, NodeId>> grow(SocialGraph& g, double friend_prob, Rng& rng,
                                            const WeightInit& init = {});

/// Shortest hop distance between two nodes, or nullopt if disconnected.
std::optional<std::size_t> hop_distance(const SocialGraph& g, NodeId from, NodeId to);

}  // namespace coevnet
