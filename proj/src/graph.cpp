#include "coevnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace coevnet {

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::random: return "random";
        case GeneratorKind::small_world: return "small_world";
        case GeneratorKind::scale_free: return "scale_free";
    }
    return "unknown";
}

std::optional<GeneratorKind> generator_from_string(const std::string& name) {
    if (name == "random") return GeneratorKind::random;
    if (name == "small_world") return GeneratorKind::small_world;
    if (name == "scale_free") return GeneratorKind::scale_free;
    return std::nullopt;
}

double WeightInit::draw(Rng& rng) const {
    if (kind == Kind::constant) return value;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void GenSpec::validate() const {
    std::ostringstream err;
    if (n < 2) err << "n must be >= 2 (got " << n << "); ";
    if (!(saturation >= 0.0 && saturation <= 1.0))
        err << "saturation must lie in [0,1] (got " << saturation << "); ";
    if (weights.kind == WeightInit::Kind::constant && !(weights.value >= 0.0 && weights.value <= 1.0))
        err << "constant weight must lie in [0,1] (got " << weights.value << "); ";
    if (lattice_degree && (*lattice_degree < 2 || *lattice_degree % 2 != 0))
        err << "lattice degree override must be even and >= 2; ";
    if (auto msg = err.str(); !msg.empty()) throw ConfigError("invalid graph spec: " + msg);
}

std::size_t small_world_degree(std::size_t n, double saturation) {
    const auto half = std::lround(saturation * static_cast<double>(n - 1) / 2.0);
    return static_cast<std::size_t>(std::max<long>(2, 2 * half));
}

std::size_t scale_free_attachments(std::size_t n, double saturation) {
    const auto m = std::lround(saturation * static_cast<double>(n - 1) / 2.0);
    return std::min<std::size_t>(std::max<long>(1, m), n - 1);
}

// --- SocialGraph -------------------------------------------------------------

void SocialGraph::check_node(NodeId i) const {
    if (i >= out_.size())
        throw std::out_of_range("node " + std::to_string(i) + " out of range (n = " +
                                std::to_string(out_.size()) + ")");
}

bool SocialGraph::has_edge(NodeId i, NodeId j) const {
    check_node(i);
    check_node(j);
    return out_[i].count(j) != 0;
}

bool SocialGraph::add_edge(NodeId i, NodeId j, double w_ij, double w_ji) {
    check_node(i);
    check_node(j);
    if (i == j) throw std::invalid_argument("self-edge on node " + std::to_string(i));
    if (out_[i].count(j)) return false;
    out_[i].emplace(j, w_ij);
    out_[j].emplace(i, w_ji);
    ++edges_;
    return true;
}

bool SocialGraph::remove_edge(NodeId i, NodeId j) {
    check_node(i);
    check_node(j);
    if (out_[i].erase(j) == 0) return false;
    out_[j].erase(i);
    --edges_;
    return true;
}

std::vector<NodeId> SocialGraph::neighbors(NodeId i) const {
    check_node(i);
    std::vector<NodeId> out;
    out.reserve(out_[i].size());
    for (const auto& [j, w] : out_[i]) out.push_back(j);
    return out;
}

std::size_t SocialGraph::degree(NodeId i) const {
    check_node(i);
    return out_[i].size();
}

double SocialGraph::weight(NodeId from, NodeId to) const {
    check_node(from);
    auto it = out_[from].find(to);
    if (it == out_[from].end())
        throw std::out_of_range("no edge " + std::to_string(from) + "-" + std::to_string(to));
    return it->second;
}

void SocialGraph::set_weight(NodeId from, NodeId to, double w) {
    check_node(from);
    auto it = out_[from].find(to);
    if (it == out_[from].end())
        throw std::out_of_range("no edge " + std::to_string(from) + "-" + std::to_string(to));
    it->second = w;
}

const std::map<NodeId, double>& SocialGraph::out_weights(NodeId i) const {
    check_node(i);
    return out_[i];
}

std::vector<std::pair<NodeId, NodeId>> SocialGraph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edges_);
    for (NodeId i = 0; i < out_.size(); ++i)
        for (const auto& [j, w] : out_[i])
            if (i < j) out.emplace_back(i, j);
    return out;
}

// --- generators --------------------------------------------------------------

namespace {

void add_weighted(SocialGraph& g, NodeId i, NodeId j, const WeightInit& init, Rng& rng) {
    if (g.has_edge(i, j)) return;
    const double w_ij = init.draw(rng);
    const double w_ji = init.draw(rng);
    g.add_edge(i, j, w_ij, w_ji);
}

SocialGraph gnp(const GenSpec& spec, Rng& rng) {
    SocialGraph g(spec.n);
    std::bernoulli_distribution coin(spec.saturation);
    for (NodeId i = 0; i < spec.n; ++i)
        for (NodeId j = i + 1; j < spec.n; ++j)
            if (coin(rng)) add_weighted(g, i, j, spec.weights, rng);
    return g;
}

// Ring lattice with k/2 neighbors per side, then each lattice edge (i, i+s) is
// rewired to a uniformly chosen non-neighbor of i with probability beta.
SocialGraph watts_strogatz(const GenSpec& spec, Rng& rng) {
    const std::size_t n = spec.n;
    const std::size_t k = spec.lattice_degree.value_or(small_world_degree(n, spec.saturation));
    const std::size_t half = std::min(k / 2, n / 2);
    const double beta = spec.saturation;

    SocialGraph g(n);
    for (std::size_t s = 1; s <= half; ++s)
        for (NodeId i = 0; i < n; ++i) add_weighted(g, i, (i + s) % n, spec.weights, rng);

    std::bernoulli_distribution rewire(beta);
    std::uniform_int_distribution<NodeId> pick(0, n - 1);
    for (std::size_t s = 1; s <= half; ++s) {
        for (NodeId i = 0; i < n; ++i) {
            const NodeId j = (i + s) % n;
            if (!rewire(rng)) continue;
            if (!g.has_edge(i, j) || g.degree(i) >= n - 1) continue;
            NodeId w = pick(rng);
            while (w == i || g.has_edge(i, w)) w = pick(rng);
            g.remove_edge(i, j);
            add_weighted(g, i, w, spec.weights, rng);
        }
    }
    return g;
}

// Preferential attachment seeded with a star on m+1 nodes. Targets are drawn
// from the multiset of edge endpoints so selection is proportional to degree.
SocialGraph barabasi_albert(const GenSpec& spec, Rng& rng) {
    const std::size_t n = spec.n;
    const std::size_t m = scale_free_attachments(n, spec.saturation);

    SocialGraph g(n);
    std::vector<NodeId> endpoints;
    for (NodeId leaf = 1; leaf <= m && leaf < n; ++leaf) {
        add_weighted(g, 0, leaf, spec.weights, rng);
        endpoints.push_back(0);
        endpoints.push_back(leaf);
    }
    for (NodeId source = m + 1; source < n; ++source) {
        std::vector<NodeId> targets;
        while (targets.size() < m) {
            std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
            const NodeId t = endpoints[pick(rng)];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        std::sort(targets.begin(), targets.end());
        for (NodeId t : targets) {
            add_weighted(g, source, t, spec.weights, rng);
            endpoints.push_back(source);
            endpoints.push_back(t);
        }
    }
    return g;
}

}  // namespace

SocialGraph generate(const GenSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    switch (spec.kind) {
        case GeneratorKind::random: return gnp(spec, rng);
        case GeneratorKind::small_world: return watts_strogatz(spec, rng);
        case GeneratorKind::scale_free: return barabasi_albert(spec, rng);
    }
    throw ConfigError("unknown generator kind");
}

// --- triadic closure ---------------------------------------------------------

std::vector<std::pair<NodeId, NodeId>> triadic_candidates(const SocialGraph& g) {
    // Adjacency as bit rows; a node's two-hop set is the OR of its neighbors' rows.
    const std::size_t n = g.node_count();
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> rows(n * words, 0);
    for (NodeId i = 0; i < n; ++i)
        for (const auto& [j, w] : g.out_weights(i)) rows[i * words + j / 64] |= 1ULL << (j % 64);

    std::vector<std::pair<NodeId, NodeId>> out;
    std::vector<std::uint64_t> reach(words);
    for (NodeId i = 0; i < n; ++i) {
        std::fill(reach.begin(), reach.end(), 0);
        for (const auto& [mid, w] : g.out_weights(i))
            for (std::size_t b = 0; b < words; ++b) reach[b] |= rows[mid * words + b];
        for (std::size_t b = 0; b < words; ++b) reach[b] &= ~rows[i * words + b];
        for (NodeId j = i + 1; j < n; ++j)
            if (reach[j / 64] >> (j % 64) & 1ULL) out.emplace_back(i, j);
    }
    return out;
}

std::vector<std::pair<NodeId, NodeId>> grow(SocialGraph& g, double friend_prob, Rng& rng,
                                            const WeightInit& init) {
    if (!(friend_prob >= 0.0 && friend_prob <= 1.0))
        throw ConfigError("friend_prob must lie in [0,1]");
    std::vector<std::pair<NodeId, NodeId>> added;
    if (friend_prob == 0.0) return added;
    std::bernoulli_distribution coin(friend_prob);
    // Candidates are fixed before any insertion so new edges cannot chain.
    for (const auto& [i, j] : triadic_candidates(g)) {
        if (!coin(rng)) continue;
        const double w_ij = init.draw(rng);
        const double w_ji = init.draw(rng);
        g.add_edge(i, j, w_ij, w_ji);
        added.emplace_back(i, j);
    }
    return added;
}

std::optional<std::size_t> hop_distance(const SocialGraph& g, NodeId from, NodeId to) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> dist(n, n);
    std::deque<NodeId> queue{from};
    dist.at(from) = 0;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        if (u == to) return dist[u];
        for (const auto& [v, w] : g.out_weights(u))
            if (dist[v] == n) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return std::nullopt;
}

}  // namespace coevnet
