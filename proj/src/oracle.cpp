#include "coevnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "coevnet/metrics.hpp"

namespace coevnet::oracle {

namespace {

using Matrix = std::vector<std::vector<char>>;

Matrix adjacency_matrix(const SocialGraph& g) {
    const std::size_t n = g.node_count();
    Matrix adj(n, std::vector<char>(n, 0));
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (i != j && g.has_edge(i, j)) adj[i][j] = 1;
    return adj;
}

}  // namespace

std::vector<double> betweenness_by_enumeration(const SocialGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> score(n, 0.0);
    if (n < 3) return score;
    const Matrix adj = adjacency_matrix(g);

    for (NodeId s = 0; s < n; ++s) {
        for (NodeId t = s + 1; t < n; ++t) {
            // Count all simple s-t paths of exactly `len` edges, and how many
            // pass through each interior vertex, for increasing len.
            for (std::size_t len = 1; len < n; ++len) {
                std::size_t total = 0;
                std::vector<std::size_t> through(n, 0);
                std::vector<NodeId> path{s};
                std::vector<char> used(n, 0);
                used[s] = 1;
                std::function<void()> extend = [&] {
                    const NodeId last = path.back();
                    if (path.size() == len + 1) {
                        if (last != t) return;
                        ++total;
                        for (std::size_t p = 1; p + 1 < path.size(); ++p) ++through[path[p]];
                        return;
                    }
                    if (last == t) return;
                    for (NodeId next = 0; next < n; ++next) {
                        if (!adj[last][next] || used[next]) continue;
                        used[next] = 1;
                        path.push_back(next);
                        extend();
                        path.pop_back();
                        used[next] = 0;
                    }
                };
                extend();
                if (total == 0) continue;
                for (NodeId v = 0; v < n; ++v)
                    score[v] += static_cast<double>(through[v]) / static_cast<double>(total);
                break;
            }
        }
    }
    const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (auto& v : score) v /= pairs;
    return score;
}

std::vector<double> aggregate_by_weighted_mean(NodeId i, const ModelView& view) {
    const std::size_t n = view.graph.node_count();
    const std::size_t topics = view.profile.topics();

    // Column i of the influence matrix, then normalized.
    std::vector<double> column(n, 0.0);
    for (NodeId j = 0; j < n; ++j) {
        if (j == i) column[j] = view.self_weight;
        else if (view.graph.has_edge(j, i)) column[j] = view.graph.weight(j, i);
    }
    double total = 0.0;
    for (double w : column) total += w;

    std::vector<double> out(topics, 0.0);
    for (std::size_t k = 0; k < topics; ++k) {
        if (total == 0.0) {
            out[k] = view.profile.at(i, k);
            continue;
        }
        for (NodeId j = 0; j < n; ++j) {
            const double seen = j == i ? view.profile.at(i, k) : view.masks.at(j, i, k);
            out[k] += (column[j] / total) * seen;
        }
    }
    return out;
}

std::vector<std::pair<NodeId, NodeId>> triadic_by_pair_scan(const SocialGraph& g) {
    const std::size_t n = g.node_count();
    const Matrix adj = adjacency_matrix(g);
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) {
            if (adj[i][j]) continue;
            for (NodeId k = 0; k < n; ++k)
                if (adj[i][k] && adj[j][k]) {
                    out.emplace_back(i, j);
                    break;
                }
        }
    return out;
}

SocialGraph random_graph(std::size_t n, double p, Rng& rng) {
    SocialGraph g(n);
    std::bernoulli_distribution coin(p);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(rng)) {
                const double w_ij = weight(rng);
                const double w_ji = weight(rng);
                g.add_edge(i, j, w_ij, w_ji);
            }
    return g;
}

namespace {

CheckResult check_betweenness(Rng& rng) {
    CheckResult r{"betweenness vs shortest-path enumeration", 0, 0, 0.0, 1e-9, ""};
    std::uniform_int_distribution<std::size_t> size(3, 12);
    std::uniform_real_distribution<double> density(0.1, 0.7);
    for (int c = 0; c < 100; ++c) {
        const auto g = random_graph(size(rng), density(rng), rng);
        const auto fast = betweenness(g);
        const auto slow = betweenness_by_enumeration(g);
        ++r.cases;
        double err = 0.0;
        for (std::size_t v = 0; v < fast.size(); ++v) err = std::max(err, std::abs(fast[v] - slow[v]));
        r.max_error = std::max(r.max_error, err);
        if (err > r.tolerance && r.failures++ == 0)
            r.first_failure = "case " + std::to_string(c) + " (n=" + std::to_string(g.node_count()) + ")";
    }
    return r;
}

CheckResult check_aggregate(Rng& rng) {
    CheckResult r{"aggregate opinion vs dense weighted mean", 0, 0, 0.0, 1e-12, ""};
    std::uniform_int_distribution<std::size_t> size(1, 10);
    std::uniform_int_distribution<std::size_t> topics(1, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    for (int c = 0; c < 1000; ++c) {
        const std::size_t n = size(rng);
        const std::size_t k = topics(rng);
        const auto g = random_graph(n, unit(rng), rng);
        const auto profile = OpinionProfile::random(n, k, rng);
        MaskStore masks(n, k);
        for (const auto& [i, j] : g.edges()) {
            masks.open(i, j);
            for (std::size_t t = 0; t < k; ++t) {
                if (coin(rng)) masks.reveal(i, j, t, profile);
                if (coin(rng)) masks.reveal(j, i, t, profile);
            }
        }
        std::vector<AgentSpec> agents(n);
        const ModelView view{g, profile, masks, agents, coin(rng) ? 1.0 : unit(rng)};
        ++r.cases;
        for (NodeId i = 0; i < n; ++i) {
            const auto fast = aggregate_opinion(i, view);
            const auto slow = aggregate_by_weighted_mean(i, view);
            double err = 0.0;
            for (std::size_t t = 0; t < k; ++t) err = std::max(err, std::abs(fast[t] - slow[t]));
            r.max_error = std::max(r.max_error, err);
            if (err > r.tolerance && r.failures++ == 0)
                r.first_failure = "instance " + std::to_string(c) + " node " + std::to_string(i);
        }
    }
    return r;
}

CheckResult check_triadic(Rng& rng) {
    CheckResult r{"triadic candidates vs pair scan", 0, 0, 0.0, 0.0, ""};
    auto compare = [&](const SocialGraph& g, const std::string& label) {
        ++r.cases;
        if (triadic_candidates(g) != triadic_by_pair_scan(g)) {
            r.max_error = 1.0;
            if (r.failures++ == 0) r.first_failure = label;
        }
    };
    // Every labelled graph on up to six nodes.
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<std::pair<NodeId, NodeId>> slots;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j) slots.emplace_back(i, j);
        for (std::uint64_t bits = 0; bits < (1ULL << slots.size()); ++bits) {
            SocialGraph g(n);
            for (std::size_t s = 0; s < slots.size(); ++s)
                if (bits >> s & 1ULL) g.add_edge(slots[s].first, slots[s].second);
            compare(g, "n=" + std::to_string(n) + " mask=" + std::to_string(bits));
        }
    }
    std::uniform_real_distribution<double> density(0.05, 0.9);
    for (std::size_t n = 7; n <= 8; ++n)
        for (int c = 0; c < 500; ++c)
            compare(random_graph(n, density(rng), rng), "random n=" + std::to_string(n));
    return r;
}

}  // namespace

std::vector<CheckResult> run_equivalence_checks(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CheckResult> out;
    out.push_back(check_betweenness(rng));
    out.push_back(check_aggregate(rng));
    out.push_back(check_triadic(rng));
    return out;
}

}  // namespace coevnet::oracle
