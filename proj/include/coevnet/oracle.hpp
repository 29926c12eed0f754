#pragma once

// Brute-force reference computations. These deliberately share no code path
// with the production algorithms they check.

#include <cstdint>
#include <string>
#include <vector>

#include "coevnet/graph.hpp"
#include "coevnet/opinion.hpp"

namespace coevnet::oracle {

/// Betweenness by enumerating every shortest path between every pair
/// (iterative-deepening search). Exponential; intended for n <= 12.
std::vector<double> betweenness_by_enumeration(const SocialGraph& g);

/// Aggregate via an explicit dense weight matrix whose columns are
/// normalized before multiplying the view.
std::vector<double> aggregate_by_weighted_mean(NodeId i, const ModelView& view);

/// Scan of all unordered pairs for a shared neighbor.
std::vector<std::pair<NodeId, NodeId>> triadic_by_pair_scan(const SocialGraph& g);

/// Each pair present with probability p; weights uniform in [0,1].
SocialGraph random_graph(std::size_t n, double p, Rng& rng);

struct CheckResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::string first_failure;

    bool passed() const { return failures == 0 && cases > 0; }
};

/// 100 random graphs (n <= 12) for betweenness, 1000 random aggregate
/// instances (n <= 10), and triadic candidates on every graph with n <= 6
/// plus random graphs with n = 7, 8.
std::vector<CheckResult> run_equivalence_checks(std::uint64_t seed);

}  // namespace coevnet::oracle
