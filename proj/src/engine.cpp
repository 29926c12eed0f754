#include "coevnet/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "coevnet/rng.hpp"

namespace coevnet {

std::string to_string(MaskInit m) {
    return m == MaskInit::all_visible ? "all_visible" : "all_hidden";
}

std::optional<MaskInit> mask_init_from_string(const std::string& name) {
    if (name == "all_visible") return MaskInit::all_visible;
    if (name == "all_hidden") return MaskInit::all_hidden;
    return std::nullopt;
}

// --- SimConfig ---------------------------------------------------------------

void SimConfig::validate() const {
    std::vector<std::string> bad;
    auto unit = [&](const std::string& name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) bad.push_back(name + " must lie in [0,1]");
    };
    if (nodes < 2) bad.push_back("nodes must be >= 2");
    if (topics < 1) bad.push_back("K must be >= 1");
    double total = 0.0;
    bool negative = false;
    for (double p : type_dist) {
        if (!(p >= 0.0)) negative = true;
        total += p;
    }
    if (negative) bad.push_back("type_dist entries must be >= 0");
    if (!(std::abs(total - 1.0) <= 1e-9)) bad.push_back("type_dist must sum to 1");
    if (!(saturation >= 0.0 && saturation <= 1.0)) bad.push_back("saturation must lie in [0,1]");
    if (!(upd_thresh >= 0.0 && upd_thresh <= 0.5)) bad.push_back("upd_thresh must lie in [0,0.5]");
    unit("upd_prob", upd_prob);
    unit("unf_thresh", unf_thresh);
    unit("unf_prob", unf_prob);
    unit("friend_prob", friend_prob);
    if (steps < 0) bad.push_back("steps must be >= 0");
    if (weight_init.kind == WeightInit::Kind::constant)
        unit("weight_init", weight_init.value);
    for (Archetype a : kArchetypes) {
        const auto name = std::string(to_string(a));
        if (auto r = res_overrides[index_of(a)]; r && !(*r >= 0.0 && *r <= 0.5))
            bad.push_back("res_overrides." + name + " must lie in [0,0.5]");
        if (auto p = upd_prob_overrides[index_of(a)]; p) unit("upd_prob_overrides." + name, *p);
    }
    if (sw_degree && (*sw_degree < 2 || *sw_degree % 2 != 0))
        bad.push_back("sw_degree must be even and >= 2");
    if (bad.empty()) return;
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& b : bad) msg << "\n  - " << b;
    throw ConfigError(msg.str());
}

AgentSpec SimConfig::agent_spec(Archetype a) const {
    AgentSpec s;
    s.archetype = a;
    s.res = res_overrides[index_of(a)].value_or(upd_thresh);
    s.upd_prob = upd_prob_overrides[index_of(a)].value_or(upd_prob);
    s.unf_prob = unf_prob;
    s.unf_thresh = unf_thresh;
    return s;
}

GenSpec SimConfig::gen_spec() const {
    GenSpec g;
    g.kind = generator;
    g.n = static_cast<std::size_t>(nodes);
    g.saturation = saturation;
    g.seed = substream_seed(seed, Phase::generate, 0, 0);
    g.weights = weight_init;
    if (sw_degree) g.lattice_degree = static_cast<std::size_t>(*sw_degree);
    return g;
}

std::array<std::size_t, 3> archetype_counts(const TypeDist& dist, std::size_t n) {
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> remainder{};
    std::size_t assigned = 0;
    for (std::size_t a = 0; a < 3; ++a) {
        const double quota = dist[a] * static_cast<double>(n);
        // Absorb representation error such as 0.15 * 75 = 11.2499...
        const double whole = std::floor(quota + 1e-9);
        counts[a] = static_cast<std::size_t>(whole);
        remainder[a] = quota - whole;
        assigned += counts[a];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return remainder[x] > remainder[y]; });
    for (std::size_t r = 0; assigned < n; r = (r + 1) % 3) {
        if (dist[order[r]] <= 0.0) continue;
        ++counts[order[r]];
        ++assigned;
    }
    return counts;
}

// --- SimState ----------------------------------------------------------------

bool SimState::same_content(const SimState& o) const {
    return t == o.t && seed == o.seed && graph == o.graph && profile == o.profile &&
           masks == o.masks && agents == o.agents && weight_init == o.weight_init &&
           friend_prob == o.friend_prob && self_weight == o.self_weight;
}

SimState init(const SimConfig& config) {
    config.validate();
    SimState s;
    s.seed = config.seed;
    s.friend_prob = config.friend_prob;
    s.weight_init = config.weight_init;
    s.graph = generate(config.gen_spec());

    const auto n = static_cast<std::size_t>(config.nodes);
    const auto topics = static_cast<std::size_t>(config.topics);
    Rng rng = substream(config.seed, Phase::init, 0, 0);

    std::vector<Archetype> types;
    const auto counts = archetype_counts(config.type_dist, n);
    for (Archetype a : kArchetypes) types.insert(types.end(), counts[index_of(a)], a);
    std::shuffle(types.begin(), types.end(), rng);
    s.agents.reserve(n);
    for (Archetype a : types) s.agents.push_back(config.agent_spec(a));

    s.profile = OpinionProfile::random(n, topics, rng);
    s.masks = MaskStore(n, topics);
    for (const auto& [i, j] : s.graph.edges()) {
        s.masks.open(i, j);
        if (config.mask_init == MaskInit::all_visible) s.masks.reveal_all(i, j, s.profile);
    }
    return s;
}

// --- phases ------------------------------------------------------------------

ActionPlan phase_choose(const SimState& state) {
    const std::size_t n = state.graph.node_count();
    const ModelView view = state.view();
    ActionPlan plan(n);
    for (NodeId i = 0; i < n; ++i) {
        Rng rng = substream(state.seed, Phase::choose, state.t, i);
        const auto& policy = state.policies[index_of(state.agents[i].archetype)];
        plan[i] = policy ? policy->choose(i, view, rng) : default_policy(i, view, rng);
    }
    return plan;
}

namespace {

void check_action(const SimState& state, const Action& a) {
    const std::size_t n = state.graph.node_count();
    if (a.actor >= n || a.target >= n || a.actor == a.target)
        throw std::logic_error("malformed action: bad node pair (" + std::to_string(a.actor) +
                               ", " + std::to_string(a.target) + ")");
    if (a.kind == Action::Kind::reveal && a.topic >= state.profile.topics())
        throw std::logic_error("malformed action: topic " + std::to_string(a.topic) +
                               " out of range");
}

}  // namespace

void phase_execute(SimState& state, const ActionPlan& actions, StepLog* log) {
    std::vector<Action> reveals;
    for (const auto& list : actions) {
        for (const Action& a : list) {
            check_action(state, a);
            if (a.kind == Action::Kind::reveal) {
                reveals.push_back(a);
            } else if (a.kind == Action::Kind::unfriend) {
                if (state.graph.remove_edge(a.actor, a.target)) {
                    clear_masks_on_unfriend(state.masks, a.actor, a.target);
                    state.masks.close(a.actor, a.target);
                    if (log)
                        log->edges_removed.emplace_back(std::min(a.actor, a.target),
                                                        std::max(a.actor, a.target));
                }
            }
        }
    }
    std::sort(reveals.begin(), reveals.end(), [](const Action& x, const Action& y) {
        return std::tie(x.actor, x.target, x.topic) < std::tie(y.actor, y.target, y.topic);
    });
    for (const Action& a : reveals) reveal_mask(state.masks, a.actor, a.target, a.topic, state.profile);
}

void phase_update(SimState& state, StepLog* log) {
    const std::size_t n = state.graph.node_count();
    const std::size_t topics = state.profile.topics();
    std::vector<std::vector<double>> aggregates(n);
    {
        const ModelView view = state.view();
        for (NodeId i = 0; i < n; ++i) aggregates[i] = aggregate_opinion(i, view);
    }
    std::vector<OpinionFlip> flips;
    for (NodeId i = 0; i < n; ++i) {
        const AgentSpec& agent = state.agents[i];
        Rng rng = substream(state.seed, Phase::update, state.t, i);
        for (std::size_t k = 0; k < topics; ++k) {
            const Opinion before = state.profile.at(i, k);
            const Opinion after =
                update_opinion(agent.archetype, before, aggregates[i][k], agent.res, agent.upd_prob, rng);
            if (after != before) flips.push_back({i, k, before, after});
        }
    }
    for (const auto& f : flips) {
        state.profile.set(f.agent, f.topic, f.to);
        state.masks.sync(f.agent, f.topic, state.profile);
    }
    if (log) log->flips = std::move(flips);
}

void phase_grow(SimState& state, StepLog* log) {
    Rng rng = substream(state.seed, Phase::grow, state.t, 0);
    const auto added = grow(state.graph, state.friend_prob, rng, state.weight_init);
    for (const auto& [i, j] : added) state.masks.open(i, j);
    if (log) log->edges_added = added;
}

StepLog step(SimState& state) {
    StepLog log;
    log.actions = phase_choose(state);
    phase_execute(state, log.actions, &log);
    phase_update(state, &log);
    phase_grow(state, &log);
    ++state.t;
    log.t = state.t;
    const ModelView view = state.view();
    log.rewards.resize(state.graph.node_count());
    for (NodeId i = 0; i < log.rewards.size(); ++i) log.rewards[i] = neighborhood_reward(i, view);
    return log;
}

MetricFrame measure(const SimState& state) { return measure(state.t, state.view()); }

SimResult run(const SimConfig& config) {
    SimResult r;
    r.config = config;
    r.final_state = init(config);
    const auto steps = static_cast<std::size_t>(config.steps);
    r.frames.reserve(steps + 1);
    r.trajectory.reserve(steps + 1);
    r.logs.reserve(steps);
    r.frames.push_back(measure(r.final_state));
    r.trajectory.push_back(r.final_state.profile);
    for (std::size_t s = 0; s < steps; ++s) {
        r.logs.push_back(step(r.final_state));
        r.frames.push_back(measure(r.final_state));
        r.trajectory.push_back(r.final_state.profile);
    }
    return r;
}

std::optional<std::string> check_invariants(const SimState& state) {
    const auto& g = state.graph;
    const std::size_t n = g.node_count();
    if (state.profile.node_count() != n || state.masks.node_count() != n || state.agents.size() != n)
        return "structure sizes disagree with node count";
    for (NodeId i = 0; i < n; ++i) {
        for (const auto& [j, w] : g.out_weights(i)) {
            if (!g.has_edge(j, i)) return "asymmetric adjacency at " + std::to_string(i);
            if (!(w >= 0.0 && w <= 1.0)) return "weight out of [0,1] on edge " + std::to_string(i);
            if (!state.masks.tracks(i, j)) return "edge without mask entry";
        }
        for (const auto& [j, mask] : state.masks.outgoing(i)) {
            if (!g.has_edge(i, j))
                return "mask on non-edge (" + std::to_string(i) + "," + std::to_string(j) + ")";
            for (std::size_t k = 0; k < mask.size(); ++k)
                if (mask[k] != 0 && mask[k] != state.profile.at(i, k))
                    return "stale mask entry (" + std::to_string(i) + "," + std::to_string(j) +
                           "," + std::to_string(k) + ")";
        }
        for (std::size_t k = 0; k < state.profile.topics(); ++k) {
            const auto b = state.profile.at(i, k);
            if (b != 1 && b != -1) return "opinion outside {-1,+1}";
        }
        const auto agg = aggregate_opinion(i, state.view());
        for (double v : agg)
            if (!(v >= -1.0 && v <= 1.0)) return "aggregate opinion out of [-1,1]";
    }
    return std::nullopt;
}

}  // namespace coevnet
