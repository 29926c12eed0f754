#include "coevnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace coevnet {

std::vector<double> betweenness(const SocialGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> cb(n, 0.0);
    if (n < 3) return cb;

    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId v = 0; v < n; ++v)
        for (const auto& [w, weight] : g.out_weights(v)) adj[v].push_back(w);

    std::vector<std::vector<NodeId>> preds(n);
    std::vector<double> sigma(n);
    std::vector<long> dist(n);
    std::vector<double> delta(n);
    std::vector<NodeId> order;
    order.reserve(n);

    for (NodeId s = 0; s < n; ++s) {
        for (auto& p : preds) p.clear();
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(delta.begin(), delta.end(), 0.0);
        order.clear();

        sigma[s] = 1.0;
        dist[s] = 0;
        std::deque<NodeId> queue{s};
        while (!queue.empty()) {
            const NodeId v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (NodeId w : adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            if (w != s) cb[w] += delta[w];
        }
    }
    // Each unordered pair was counted from both endpoints.
    const double scale = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    for (auto& v : cb) v /= scale;
    return cb;
}

std::vector<std::size_t> component_labels(const SocialGraph& g) {
    const std::size_t n = g.node_count();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(n, unset);
    std::size_t next = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            for (const auto& [w, weight] : g.out_weights(v))
                if (label[w] == unset) {
                    label[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    return label;
}

std::vector<std::size_t> components(const SocialGraph& g) {
    const auto labels = component_labels(g);
    std::vector<std::size_t> sizes;
    for (auto l : labels) {
        if (l >= sizes.size()) sizes.resize(l + 1, 0);
        ++sizes[l];
    }
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

double graph_density(const SocialGraph& g) {
    const double n = static_cast<double>(g.node_count());
    if (n < 2) return 0.0;
    return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

double induced_density(const SocialGraph& g, std::span<const NodeId> members) {
    if (members.size() < 2) return 0.0;
    std::size_t edges = 0;
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
            if (g.has_edge(members[a], members[b])) ++edges;
    const double m = static_cast<double>(members.size());
    return 2.0 * static_cast<double>(edges) / (m * (m - 1.0));
}

std::vector<ComponentCamps> camps(const SocialGraph& g, const OpinionProfile& profile) {
    const auto labels = component_labels(g);
    std::vector<ComponentCamps> out;
    for (NodeId v = 0; v < labels.size(); ++v) {
        if (labels[v] >= out.size()) out.resize(labels[v] + 1);
        out[labels[v]].nodes.push_back(v);
    }
    for (auto& comp : out) {
        comp.size = comp.nodes.size();
        std::map<std::vector<Opinion>, std::vector<NodeId>> groups;
        for (NodeId v : comp.nodes) {
            const auto row = profile.row(v);
            groups[std::vector<Opinion>(row.begin(), row.end())].push_back(v);
        }
        for (auto& [opinion, members] : groups)
            comp.camps.push_back({opinion, members.size(), induced_density(g, members)});
        if (comp.camps.size() == 2 && comp.camps[0].density != comp.camps[1].density)
            comp.core = comp.camps[0].density > comp.camps[1].density ? 0 : 1;
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size > b.size; });
    return out;
}

bool detect_oscillation(std::span<const OpinionProfile> trajectory, std::size_t window) {
    if (window < 4) throw std::invalid_argument("oscillation window must be >= 4");
    if (trajectory.size() < window)
        throw std::invalid_argument("trajectory shorter than oscillation window");
    const auto tail = trajectory.subspan(trajectory.size() - window);
    bool moved = false;
    for (std::size_t t = 0; t + 2 < tail.size(); ++t)
        if (!(tail[t] == tail[t + 2])) return false;
    for (std::size_t t = 0; t + 1 < tail.size(); ++t)
        if (!(tail[t] == tail[t + 1])) moved = true;
    return moved;
}

bool detect_plateau(std::span<const double> series, std::size_t window, double eps) {
    if (window == 0 || series.size() < window)
        throw std::invalid_argument("series shorter than plateau window");
    const auto tail = series.subspan(series.size() - window);
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    // Slack for decimal inputs such as 0.505 - 0.495 landing just above 0.01.
    return *hi - *lo <= eps + 1e-12;
}

PerType per_type_series(std::span<const double> values, std::span<const AgentSpec> agents) {
    if (values.size() != agents.size())
        throw std::invalid_argument("per_type_series: every node needs a type");
    std::array<std::vector<double>, 3> buckets;
    for (std::size_t i = 0; i < values.size(); ++i)
        buckets[index_of(agents[i].archetype)].push_back(values[i]);
    PerType out{};
    for (std::size_t a = 0; a < 3; ++a) {
        const auto& b = buckets[a];
        if (b.empty()) continue;
        double mean = 0.0;
        for (double v : b) mean += v;
        mean /= static_cast<double>(b.size());
        double var = 0.0;
        for (double v : b) var += (v - mean) * (v - mean);
        var /= static_cast<double>(b.size());
        out[a] = SeriesStat{mean, std::sqrt(var), b.size()};
    }
    return out;
}

MetricFrame measure(std::size_t t, const ModelView& view) {
    const auto& g = view.graph;
    const std::size_t n = g.node_count();
    MetricFrame f;
    f.t = t;
    f.density = graph_density(g);
    f.component_sizes = components(g);
    for (NodeId i = 0; i < n; ++i)
        if (g.degree(i) == 0) {
            ++f.isolate_count;
            ++f.isolates_by_type[index_of(view.agents[i].archetype)];
        }
    f.betweenness = betweenness(g);
    f.per_type_betweenness = per_type_series(f.betweenness, view.agents);
    f.rewards.resize(n);
    for (NodeId i = 0; i < n; ++i) f.rewards[i] = neighborhood_reward(i, view);
    f.per_type_reward = per_type_series(f.rewards, view.agents);
    std::set<std::vector<Opinion>> distinct;
    for (NodeId i = 0; i < n; ++i) {
        const auto row = view.profile.row(i);
        distinct.emplace(row.begin(), row.end());
    }
    f.distinct_opinions = distinct.size();
    f.camps = camps(g, view.profile);
    return f;
}

bool OutcomeFlags::all_components_consensus() const {
    return std::all_of(consensus_per_component.begin(), consensus_per_component.end(),
                       [](bool b) { return b; });
}

OutcomeFlags detect_outcomes(std::span<const MetricFrame> frames,
                             std::span<const OpinionProfile> trajectory, PlateauParams plateau,
                             std::size_t oscillation_window) {
    OutcomeFlags flags;
    if (frames.empty()) return flags;
    const auto& last = frames.back();
    for (const auto& comp : last.camps) flags.consensus_per_component.push_back(comp.consensus());
    flags.fully_disconnected = last.isolate_count == last.component_sizes.size() &&
                               std::all_of(last.component_sizes.begin(), last.component_sizes.end(),
                                           [](std::size_t s) { return s == 1; });
    if (trajectory.size() >= oscillation_window && oscillation_window >= 4)
        flags.oscillation_period2 = detect_oscillation(trajectory, oscillation_window);
    if (frames.size() >= plateau.window) {
        std::vector<double> density;
        density.reserve(frames.size());
        for (const auto& f : frames) density.push_back(f.density);
        flags.density_plateaued = detect_plateau(density, plateau.window, plateau.eps);
    }
    return flags;
}

}  // namespace coevnet
