#include "coevnet/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace coevnet {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// --- config -----------------------------------------------------------------

const std::set<std::string>& config_fields() {
    static const std::set<std::string> fields{
        "nodes",      "K",           "type_dist",  "saturation", "upd_thresh",
        "upd_prob",   "unf_thresh",  "unf_prob",   "friend_prob", "steps",
        "seed",       "generator",   "mask_init",  "weight_init", "res_overrides",
        "upd_prob_overrides",        "sw_degree"};
    return fields;
}

namespace {

class FieldReader {
public:
    explicit FieldReader(const json& doc) : doc_(doc) {}

    std::vector<std::string>& errors() { return errors_; }

    template <class T>
    void integer(const char* name, T& out, bool required) {
        if (!present(name, required)) return;
        const auto& v = doc_.at(name);
        if (!v.is_number_integer()) return fail(name, "must be an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_unsigned()) return fail(name, "must be a non-negative integer");
            out = v.get<T>();
        } else {
            out = v.get<T>();
        }
    }

    void real(const char* name, double& out, bool required) {
        if (!present(name, required)) return;
        const auto& v = doc_.at(name);
        if (!v.is_number()) return fail(name, "must be a number");
        out = v.get<double>();
    }

    template <class Parse>
    void word(const char* name, bool required, Parse parse) {
        if (!present(name, required)) return;
        const auto& v = doc_.at(name);
        if (!v.is_string() || !parse(v.get<std::string>())) fail(name, "has an unrecognized value");
    }

    bool present(const char* name, bool required) {
        if (doc_.contains(name)) return true;
        if (required) fail(name, "is required");
        return false;
    }

    void fail(const std::string& name, const std::string& why) { errors_.push_back(name + " " + why); }

    const json& doc() const { return doc_; }

private:
    const json& doc_;
    std::vector<std::string> errors_;
};

void read_per_type(FieldReader& r, const char* name, std::array<std::optional<double>, 3>& out) {
    if (!r.present(name, false)) return;
    const auto& v = r.doc().at(name);
    if (!v.is_object()) return r.fail(name, "must be an object keyed by hom/het/adv");
    for (const auto& [key, value] : v.items()) {
        const auto a = archetype_from_string(key);
        if (!a) {
            r.fail(std::string(name) + "." + key, "is not an archetype");
            continue;
        }
        if (!value.is_number()) {
            r.fail(std::string(name) + "." + key, "must be a number");
            continue;
        }
        out[index_of(*a)] = value.get<double>();
    }
}

void read_type_dist(FieldReader& r, TypeDist& out) {
    if (!r.present("type_dist", true)) return;
    const auto& v = r.doc().at("type_dist");
    if (v.is_array()) {
        if (v.size() != 3) return r.fail("type_dist", "must list exactly three proportions (hom, het, adv)");
        for (std::size_t a = 0; a < 3; ++a) {
            if (!v[a].is_number()) return r.fail("type_dist", "entries must be numbers");
            out[a] = v[a].get<double>();
        }
        return;
    }
    if (v.is_object()) {
        out = {0.0, 0.0, 0.0};
        for (const auto& [key, value] : v.items()) {
            const auto a = archetype_from_string(key);
            if (!a || !value.is_number()) return r.fail("type_dist." + key, "is not a numeric archetype share");
            out[index_of(*a)] = value.get<double>();
        }
        return;
    }
    r.fail("type_dist", "must be an array [hom, het, adv] or an object");
}

void read_weight_init(FieldReader& r, WeightInit& out) {
    if (!r.present("weight_init", false)) return;
    const auto& v = r.doc().at("weight_init");
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "uniform_random") out = WeightInit::uniform_random();
        else if (s == "constant") out = WeightInit::constant(1.0);
        else r.fail("weight_init", "has an unrecognized value");
        return;
    }
    if (v.is_object() && v.size() == 1 && v.contains("constant") && v["constant"].is_number()) {
        out = WeightInit::constant(v["constant"].get<double>());
        return;
    }
    r.fail("weight_init", "must be \"uniform_random\", \"constant\" or {\"constant\": c}");
}

}  // namespace

SimConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("invalid config:\n  - document must be a JSON object");
    SimConfig c;
    FieldReader r(doc);
    for (const auto& [key, value] : doc.items())
        if (!config_fields().count(key)) r.fail(key, "is not a recognized field");

    r.integer("nodes", c.nodes, true);
    r.integer("K", c.topics, true);
    read_type_dist(r, c.type_dist);
    r.real("saturation", c.saturation, true);
    r.real("upd_thresh", c.upd_thresh, false);
    r.real("upd_prob", c.upd_prob, false);
    r.real("unf_thresh", c.unf_thresh, false);
    r.real("unf_prob", c.unf_prob, false);
    r.real("friend_prob", c.friend_prob, false);
    r.integer("steps", c.steps, true);
    r.integer("seed", c.seed, true);
    r.word("generator", false, [&](const std::string& s) {
        auto g = generator_from_string(s);
        if (g) c.generator = *g;
        return g.has_value();
    });
    r.word("mask_init", false, [&](const std::string& s) {
        auto m = mask_init_from_string(s);
        if (m) c.mask_init = *m;
        return m.has_value();
    });
    read_weight_init(r, c.weight_init);
    read_per_type(r, "res_overrides", c.res_overrides);
    read_per_type(r, "upd_prob_overrides", c.upd_prob_overrides);
    if (r.present("sw_degree", false)) {
        std::int64_t k = 0;
        r.integer("sw_degree", k, false);
        c.sw_degree = k;
    }

    std::vector<std::string> problems = std::move(r.errors());
    if (problems.empty()) {
        c.validate();
        return c;
    }
    // Still run the semantic checks so one pass reports everything.
    try {
        c.validate();
    } catch (const ConfigError& e) {
        std::istringstream lines(e.what());
        std::string line;
        std::getline(lines, line);
        while (std::getline(lines, line)) problems.push_back(line.substr(line.find("- ") + 2));
    }
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& p : problems) msg << "\n  - " << p;
    throw ConfigError(msg.str());
}

json config_to_json(const SimConfig& c) {
    json j;
    j["nodes"] = c.nodes;
    j["K"] = c.topics;
    j["type_dist"] = json::array({c.type_dist[0], c.type_dist[1], c.type_dist[2]});
    j["saturation"] = c.saturation;
    j["upd_thresh"] = c.upd_thresh;
    j["upd_prob"] = c.upd_prob;
    j["unf_thresh"] = c.unf_thresh;
    j["unf_prob"] = c.unf_prob;
    j["friend_prob"] = c.friend_prob;
    j["steps"] = c.steps;
    j["seed"] = c.seed;
    j["generator"] = to_string(c.generator);
    j["mask_init"] = to_string(c.mask_init);
    if (c.weight_init.kind == WeightInit::Kind::uniform_random)
        j["weight_init"] = "uniform_random";
    else
        j["weight_init"] = json{{"constant", c.weight_init.value}};
    auto per_type = [](const std::array<std::optional<double>, 3>& v) {
        json o = json::object();
        for (Archetype a : kArchetypes)
            if (v[index_of(a)]) o[std::string(to_string(a))] = *v[index_of(a)];
        return o;
    };
    if (auto o = per_type(c.res_overrides); !o.empty()) j["res_overrides"] = o;
    if (auto o = per_type(c.upd_prob_overrides); !o.empty()) j["upd_prob_overrides"] = o;
    if (c.sw_degree) j["sw_degree"] = *c.sw_degree;
    return j;
}

SimConfig parse_config(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid config:\n  - " + path.string() + " is not valid JSON (" + e.what() + ")");
    }
    return config_from_json(doc);
}

// --- logs -------------------------------------------------------------------

json step_log_to_json(const StepLog& log) {
    json j;
    j["t"] = log.t;
    json actions = json::array();
    for (const auto& list : log.actions) {
        json per = json::array();
        for (const auto& a : list)
            per.push_back({{"kind", std::string(to_string(a.kind))},
                           {"actor", a.actor},
                           {"target", a.target},
                           {"topic", a.topic}});
        actions.push_back(std::move(per));
    }
    j["actions"] = std::move(actions);
    json flips = json::array();
    for (const auto& f : log.flips) flips.push_back({f.agent, f.topic, f.from, f.to});
    j["flips"] = std::move(flips);
    j["edges_added"] = log.edges_added;
    j["edges_removed"] = log.edges_removed;
    j["rewards"] = log.rewards;
    return j;
}

StepLog step_log_from_json(const json& j) {
    StepLog log;
    log.t = j.at("t").get<std::size_t>();
    for (const auto& per : j.at("actions")) {
        std::vector<Action> list;
        for (const auto& a : per) {
            Action act;
            const auto kind = a.at("kind").get<std::string>();
            act.kind = kind == "reveal" ? Action::Kind::reveal
                       : kind == "unfriend" ? Action::Kind::unfriend
                                            : Action::Kind::nop;
            act.actor = a.at("actor").get<NodeId>();
            act.target = a.at("target").get<NodeId>();
            act.topic = a.at("topic").get<std::size_t>();
            list.push_back(act);
        }
        log.actions.push_back(std::move(list));
    }
    for (const auto& f : j.at("flips"))
        log.flips.push_back({f[0].get<NodeId>(), f[1].get<std::size_t>(), f[2].get<Opinion>(),
                             f[3].get<Opinion>()});
    log.edges_added = j.at("edges_added").get<std::vector<std::pair<NodeId, NodeId>>>();
    log.edges_removed = j.at("edges_removed").get<std::vector<std::pair<NodeId, NodeId>>>();
    log.rewards = j.at("rewards").get<std::vector<double>>();
    return log;
}

json flags_to_json(const OutcomeFlags& f) {
    return {{"consensus_per_component", f.consensus_per_component},
            {"all_components_consensus", f.all_components_consensus()},
            {"oscillation_period2", f.oscillation_period2},
            {"density_plateaued", f.density_plateaued},
            {"fully_disconnected", f.fully_disconnected}};
}

json result_to_json(const SimResult& r) {
    json j;
    j["config"] = config_to_json(r.config);
    json density = json::array();
    for (const auto& f : r.frames) density.push_back(f.density);
    j["density"] = std::move(density);
    json traj = json::array();
    for (const auto& p : r.trajectory) {
        json rows = json::array();
        for (NodeId i = 0; i < p.node_count(); ++i) {
            const auto row = p.row(i);
            rows.push_back(std::vector<int>(row.begin(), row.end()));
        }
        traj.push_back(std::move(rows));
    }
    j["trajectory"] = std::move(traj);
    json logs = json::array();
    for (const auto& l : r.logs) logs.push_back(step_log_to_json(l));
    j["logs"] = std::move(logs);
    j["final_edges"] = r.final_state.graph.edges();
    return j;
}

// --- text exports -----------------------------------------------------------

namespace {

std::string opinion_list(std::span<const Opinion> row, char sep) {
    std::string s;
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) s += sep;
        s += std::to_string(static_cast<int>(row[k]));
    }
    return s;
}

}  // namespace

std::string to_dot(const SimState& state) {
    std::ostringstream out;
    out << "graph social {\n";
    for (NodeId i = 0; i < state.graph.node_count(); ++i)
        out << "  " << i << " [archetype=\"" << to_string(state.agents[i].archetype)
            << "\", opinions=\"" << opinion_list(state.profile.row(i), ',') << "\"];\n";
    for (const auto& [i, j] : state.graph.edges()) out << "  " << i << " -- " << j << ";\n";
    out << "}\n";
    return out.str();
}

std::string to_edge_list(const SocialGraph& g) {
    std::ostringstream out;
    for (const auto& [i, j] : g.edges())
        out << i << ' ' << j << ' ' << format_number(g.weight(i, j)) << ' '
            << format_number(g.weight(j, i)) << '\n';
    return out.str();
}

std::string metrics_csv(const SimResult& r) {
    std::ostringstream out;
    out << "t,density,n_components,largest_component,isolates,distinct_opinions";
    for (Archetype a : kArchetypes) {
        const auto n = to_string(a);
        out << ",btw_mean_" << n << ",btw_std_" << n << ",reward_mean_" << n << ",reward_std_" << n;
    }
    out << '\n';
    for (const auto& f : r.frames) {
        out << f.t << ',' << format_number(f.density) << ',' << f.component_sizes.size() << ','
            << (f.component_sizes.empty() ? 0 : f.component_sizes.front()) << ',' << f.isolate_count
            << ',' << f.distinct_opinions;
        for (Archetype a : kArchetypes) {
            const auto& b = f.per_type_betweenness[index_of(a)];
            const auto& w = f.per_type_reward[index_of(a)];
            out << ',' << (b ? format_number(b->mean) : "") << ',' << (b ? format_number(b->stddev) : "")
                << ',' << (w ? format_number(w->mean) : "") << ',' << (w ? format_number(w->stddev) : "");
        }
        out << '\n';
    }
    return out.str();
}

std::string trajectory_csv(const SimResult& r) {
    std::ostringstream out;
    out << "t,node,archetype";
    const auto topics = static_cast<std::size_t>(r.config.topics);
    for (std::size_t k = 0; k < topics; ++k) out << ",k" << k;
    out << '\n';
    const auto& agents = r.final_state.agents;
    for (std::size_t t = 0; t < r.trajectory.size(); ++t) {
        const auto& p = r.trajectory[t];
        for (NodeId i = 0; i < p.node_count(); ++i)
            out << t << ',' << i << ',' << to_string(agents[i].archetype) << ','
                << opinion_list(p.row(i), ',') << '\n';
    }
    return out.str();
}

json run_summary(const SimResult& r) {
    const auto flags = detect_outcomes(r.frames, r.trajectory);
    const auto& last = r.frames.back();
    json j;
    j["config"] = config_to_json(r.config);
    j["flags"] = flags_to_json(flags);
    j["final_density"] = last.density;
    j["component_sizes"] = last.component_sizes;
    j["isolates"] = last.isolate_count;
    json by_type = json::object();
    std::array<std::size_t, 3> population{};
    for (const auto& a : r.final_state.agents) ++population[index_of(a.archetype)];
    json pop = json::object();
    for (Archetype a : kArchetypes) {
        by_type[std::string(to_string(a))] = last.isolates_by_type[index_of(a)];
        pop[std::string(to_string(a))] = population[index_of(a)];
    }
    j["isolates_by_type"] = std::move(by_type);
    j["population_by_type"] = std::move(pop);
    j["distinct_opinions"] = last.distinct_opinions;
    j["betweenness_normalization"] = "(n-1)(n-2)/2, unweighted";
    return j;
}

// --- files ------------------------------------------------------------------

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError(path.parent_path(), "cannot create directory: " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void export_dot(const SimState& state, const std::filesystem::path& path) {
    write_text(path, to_dot(state));
}

void export_csv(const SimResult& result, const std::filesystem::path& dir) {
    write_text(dir / "metrics.csv", metrics_csv(result));
    write_text(dir / "trajectory.csv", trajectory_csv(result));
}

}  // namespace coevnet
