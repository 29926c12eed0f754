#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "coevnet/graph.hpp"
#include "coevnet/opinion.hpp"

namespace coevnet {

/// Shortest-path betweenness on the unweighted topology, normalized by
/// (n-1)(n-2)/2 over the whole graph. Brandes accumulation, O(n m).
std::vector<double> betweenness(const SocialGraph& g);

/// Component label per node; labels are dense and ordered by smallest member.
std::vector<std::size_t> component_labels(const SocialGraph& g);

/// Connected component sizes, descending.
std::vector<std::size_t> components(const SocialGraph& g);

/// 2|E| / (n(n-1)); 0 when n < 2.
double graph_density(const SocialGraph& g);

/// Edge density of the subgraph induced by `members`; 0 for fewer than 2.
double induced_density(const SocialGraph& g, std::span<const NodeId> members);

struct Camp {
    std::vector<Opinion> opinion;
    std::size_t members = 0;
    double density = 0.0;
};

struct ComponentCamps {
    std::size_t size = 0;
    std::vector<NodeId> nodes;
    std::vector<Camp> camps;       // ordered by opinion vector
    std::optional<std::size_t> core;  // set only for two camps of unequal density

    bool consensus() const { return camps.size() == 1; }
};

/// Groups each component's members by exact opinion vector. Components are
/// returned largest first (ties by smallest member).
std::vector<ComponentCamps> camps(const SocialGraph& g, const OpinionProfile& profile);

/// True iff the trailing `window` profiles alternate with period two and are
/// not constant. Throws if window < 4 or the trajectory is shorter.
bool detect_oscillation(std::span<const OpinionProfile> trajectory, std::size_t window);

/// True iff max - min over the trailing `window` entries is at most eps.
bool detect_plateau(std::span<const double> series, std::size_t window, double eps);

struct SeriesStat {
    double mean = 0.0;
    double stddev = 0.0;  // population
    std::size_t count = 0;
    bool operator==(const SeriesStat&) const = default;
};

using PerType = std::array<std::optional<SeriesStat>, 3>;

/// Mean and population standard deviation per archetype; absent types are nullopt.
PerType per_type_series(std::span<const double> values, std::span<const AgentSpec> agents);

struct MetricFrame {
    std::size_t t = 0;
    double density = 0.0;
    std::vector<std::size_t> component_sizes;
    std::size_t isolate_count = 0;
    std::array<std::size_t, 3> isolates_by_type{};
    std::vector<double> betweenness;
    PerType per_type_betweenness{};
    std::vector<double> rewards;
    PerType per_type_reward{};
    std::size_t distinct_opinions = 0;
    std::vector<ComponentCamps> camps;
};

MetricFrame measure(std::size_t t, const ModelView& view);

struct PlateauParams {
    std::size_t window = 20;
    double eps = 0.01;
};

struct OutcomeFlags {
    std::vector<bool> consensus_per_component;  // final frame, largest first
    bool oscillation_period2 = false;
    bool density_plateaued = false;
    bool fully_disconnected = false;

    bool all_components_consensus() const;
};

/// Flags derived only from recorded series.
OutcomeFlags detect_outcomes(std::span<const MetricFrame> frames,
                             std::span<const OpinionProfile> trajectory,
                             PlateauParams plateau = {}, std::size_t oscillation_window = 10);

}  // namespace coevnet
