#include "coevnet/opinion.hpp"

#include <cmath>
#include <sstream>

namespace coevnet {

std::string_view to_string(Archetype a) {
    switch (a) {
        case Archetype::hom: return "hom";
        case Archetype::het: return "het";
        case Archetype::adv: return "adv";
    }
    return "unknown";
}

std::optional<Archetype> archetype_from_string(std::string_view name) {
    for (Archetype a : kArchetypes)
        if (to_string(a) == name) return a;
    return std::nullopt;
}

std::string_view to_string(Action::Kind kind) {
    switch (kind) {
        case Action::Kind::nop: return "nop";
        case Action::Kind::reveal: return "reveal";
        case Action::Kind::unfriend: return "unfriend";
    }
    return "unknown";
}

// --- OpinionProfile ----------------------------------------------------------

OpinionProfile::OpinionProfile(std::size_t n, std::size_t topics)
    : n_(n), k_(topics), data_(n * topics, 1) {}

OpinionProfile OpinionProfile::random(std::size_t n, std::size_t topics, Rng& rng) {
    OpinionProfile p(n, topics);
    std::bernoulli_distribution coin(0.5);
    for (auto& v : p.data_) v = coin(rng) ? 1 : -1;
    return p;
}

void OpinionProfile::set(NodeId i, std::size_t k, Opinion value) {
    if (value != 1 && value != -1) throw std::invalid_argument("opinion must be -1 or +1");
    data_.at(i * k_ + k) = value;
}

// --- MaskStore ---------------------------------------------------------------

void MaskStore::open(NodeId i, NodeId j) {
    rows_.at(i).insert_or_assign(j, Mask(k_, 0));
    rows_.at(j).insert_or_assign(i, Mask(k_, 0));
}

void MaskStore::reveal_all(NodeId i, NodeId j, const OpinionProfile& profile) {
    for (std::size_t k = 0; k < k_; ++k) {
        reveal(i, j, k, profile);
        reveal(j, i, k, profile);
    }
}

void MaskStore::clear(NodeId i, NodeId j) {
    if (auto it = rows_.at(i).find(j); it != rows_[i].end()) it->second.assign(k_, 0);
    if (auto it = rows_.at(j).find(i); it != rows_[j].end()) it->second.assign(k_, 0);
}

void MaskStore::close(NodeId i, NodeId j) {
    rows_.at(i).erase(j);
    rows_.at(j).erase(i);
}

bool MaskStore::tracks(NodeId i, NodeId j) const { return rows_.at(i).count(j) != 0; }

std::int8_t MaskStore::at(NodeId i, NodeId j, std::size_t k) const {
    const Mask* m = find(i, j);
    return m ? (*m)[k] : 0;
}

const Mask* MaskStore::find(NodeId i, NodeId j) const {
    const auto& row = rows_.at(i);
    auto it = row.find(j);
    return it == row.end() ? nullptr : &it->second;
}

bool MaskStore::reveal(NodeId i, NodeId j, std::size_t k, const OpinionProfile& profile) {
    if (k >= k_) throw std::out_of_range("topic " + std::to_string(k) + " out of range");
    auto& row = rows_.at(i);
    auto it = row.find(j);
    if (it == row.end()) return false;
    it->second[k] = profile.at(i, k);
    return true;
}

void MaskStore::sync(NodeId i, std::size_t k, const OpinionProfile& profile) {
    const auto value = profile.at(i, k);
    for (auto& [j, mask] : rows_.at(i))
        if (mask[k] != 0) mask[k] = value;
}

// --- AgentSpec ---------------------------------------------------------------

void AgentSpec::validate() const {
    std::ostringstream err;
    auto unit = [&](const char* name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) err << name << " must lie in [0,1] (got " << v << "); ";
    };
    if (!(res >= 0.0 && res <= 0.5)) err << "res must lie in [0,0.5] (got " << res << "); ";
    unit("upd_prob", upd_prob);
    unit("unf_prob", unf_prob);
    unit("unf_thresh", unf_thresh);
    if (auto msg = err.str(); !msg.empty()) throw ConfigError("invalid agent: " + msg);
}

// --- rules -------------------------------------------------------------------

std::vector<ViewEntry> observe(NodeId i, const ModelView& view) {
    std::vector<ViewEntry> out;
    const auto& incoming = view.graph.out_weights(i);
    out.reserve(incoming.size() + 1);
    const auto own = view.profile.row(i);
    out.push_back({i, view.self_weight, Mask(own.begin(), own.end())});
    for (const auto& [j, w_ij] : incoming) {
        const Mask* m = view.masks.find(j, i);
        out.push_back({j, view.graph.weight(j, i), m ? *m : Mask(view.profile.topics(), 0)});
    }
    return out;
}

PairDistance distance(NodeId i, NodeId j, const OpinionProfile& profile, const MaskStore& masks) {
    PairDistance d;
    const Mask* shown = masks.find(j, i);
    if (!shown) return d;
    std::size_t disagree = 0;
    for (std::size_t k = 0; k < shown->size(); ++k) {
        if ((*shown)[k] == 0) continue;
        ++d.revealed;
        if ((*shown)[k] != profile.at(i, k)) ++disagree;
    }
    if (d.revealed > 0) d.value = static_cast<double>(disagree) / static_cast<double>(d.revealed);
    return d;
}

double pair_reward(Archetype a, double d) {
    switch (a) {
        case Archetype::hom: return 1.0 - d;
        case Archetype::adv: return d;
        case Archetype::het: return 1.0 - 2.0 * std::abs(d - 0.5);
    }
    return 0.0;
}

double neighborhood_reward(NodeId i, const ModelView& view) {
    const Archetype a = view.agents[i].archetype;
    double total = 0.0;
    std::size_t counted = 0;
    for (const auto& [j, w] : view.graph.out_weights(i)) {
        const auto d = distance(i, j, view.profile, view.masks);
        if (!d.defined()) continue;
        total += pair_reward(a, *d.value);
        ++counted;
    }
    return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

std::vector<double> aggregate_opinion(NodeId i, const ModelView& view) {
    const std::size_t topics = view.profile.topics();
    std::vector<double> sum(topics, 0.0);
    double norm = view.self_weight;
    for (std::size_t k = 0; k < topics; ++k) sum[k] = view.self_weight * view.profile.at(i, k);
    for (const auto& [j, w_ij] : view.graph.out_weights(i)) {
        const double w_ji = view.graph.weight(j, i);
        norm += w_ji;
        if (const Mask* m = view.masks.find(j, i))
            for (std::size_t k = 0; k < topics; ++k) sum[k] += w_ji * (*m)[k];
    }
    if (norm <= 0.0) {
        // Every incoming weight is zero: nothing can move i.
        for (std::size_t k = 0; k < topics; ++k) sum[k] = view.profile.at(i, k);
        return sum;
    }
    for (auto& v : sum) v /= norm;
    return sum;
}

Opinion update_opinion(Archetype a, Opinion current, double aggregate, double res, double upd_prob,
                       Rng& rng) {
    const double alignment = aggregate * current;
    const bool pressured = a == Archetype::adv ? alignment > 0.0 : alignment < 0.0;
    if (!pressured || !(std::abs(aggregate) > res)) return current;
    if (!std::bernoulli_distribution(upd_prob)(rng)) return current;
    return static_cast<Opinion>(-current);
}

std::vector<Action> default_policy(NodeId i, const ModelView& snapshot, Rng& rng) {
    const AgentSpec& me = snapshot.agents[i];
    const std::size_t topics = snapshot.profile.topics();
    std::vector<Action> out;
    for (const auto& [j, w] : snapshot.graph.out_weights(i)) {
        if (me.can(kUnfriend)) {
            const auto d = distance(i, j, snapshot.profile, snapshot.masks);
            if (d.defined() && pair_reward(me.archetype, *d.value) < me.unf_thresh &&
                std::bernoulli_distribution(me.unf_prob)(rng)) {
                out.push_back(Action::unfriend(i, j));
                continue;
            }
        }
        if (me.can(kReveal)) {
            std::vector<std::size_t> hidden;
            const Mask* shown = snapshot.masks.find(i, j);
            for (std::size_t k = 0; k < topics; ++k)
                if (!shown || (*shown)[k] == 0) hidden.push_back(k);
            if (!hidden.empty() && std::bernoulli_distribution(0.5)(rng)) {
                std::uniform_int_distribution<std::size_t> pick(0, hidden.size() - 1);
                out.push_back(Action::reveal(i, j, hidden[pick(rng)]));
                continue;
            }
        }
        out.push_back(Action::nop(i, j));
    }
    return out;
}

}  // namespace coevnet
