#include "coevnet/coevnet.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "coevnet/engine.hpp"
#include "coevnet/experiment.hpp"
#include "coevnet/io.hpp"
#include "coevnet/oracle.hpp"

using namespace coevnet;
using nlohmann::json;

struct coevnet_sim {
    SimConfig config;
    SimState state;
    SimResult record;  // frames and trajectory so far
};

namespace {

thread_local std::string last_error;

coevnet_status fail(coevnet_status code, const std::string& msg) {
    last_error = msg;
    return code;
}

template <class F>
coevnet_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const ConfigError& e) {
        return fail(COEVNET_ERR_CONFIG, e.what());
    } catch (const IoError& e) {
        return fail(COEVNET_ERR_IO, e.what());
    } catch (const std::out_of_range& e) {
        return fail(COEVNET_ERR_ARG, e.what());
    } catch (const std::bad_alloc&) {
        return fail(COEVNET_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(COEVNET_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(COEVNET_ERR_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

coevnet_status null_arg(const char* name) { return fail(COEVNET_ERR_ARG, std::string(name) + " is null"); }

coevnet_sim* make_sim(const SimConfig& config) {
    auto* sim = new coevnet_sim{config, init(config), {}};
    sim->record.config = config;
    sim->record.frames.push_back(measure(sim->state));
    sim->record.trajectory.push_back(sim->state.profile);
    return sim;
}

coevnet_status advance(coevnet_sim* sim) {
    step(sim->state);
    sim->record.frames.push_back(measure(sim->state));
    sim->record.trajectory.push_back(sim->state.profile);
    return COEVNET_OK;
}

// Snapshot exports need the current state inside the result.
SimResult snapshot(const coevnet_sim* sim) {
    SimResult r = sim->record;
    r.final_state = sim->state;
    return r;
}

}  // namespace

extern "C" {

const char* coevnet_last_error(void) { return last_error.c_str(); }
const char* coevnet_version(void) { return version_string(); }
void coevnet_string_free(char* s) { std::free(s); }

coevnet_status coevnet_sim_create(const char* config_json, coevnet_sim** out) {
    if (!config_json) return null_arg("config_json");
    if (!out) return null_arg("out");
    return guarded([&] {
        json doc;
        try {
            doc = json::parse(config_json);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        *out = make_sim(config_from_json(doc));
        return COEVNET_OK;
    });
}

coevnet_status coevnet_sim_create_from_file(const char* path, coevnet_sim** out) {
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = make_sim(parse_config(path));
        return COEVNET_OK;
    });
}

void coevnet_sim_destroy(coevnet_sim* sim) { delete sim; }

coevnet_status coevnet_sim_step(coevnet_sim* sim) {
    if (!sim) return null_arg("sim");
    return guarded([&] {
        if (sim->state.t >= static_cast<std::size_t>(sim->config.steps))
            return fail(COEVNET_ERR_STATE, "all configured steps have been taken");
        return advance(sim);
    });
}

coevnet_status coevnet_sim_run(coevnet_sim* sim) {
    if (!sim) return null_arg("sim");
    return guarded([&] {
        while (sim->state.t < static_cast<std::size_t>(sim->config.steps)) advance(sim);
        return COEVNET_OK;
    });
}

#define COEVNET_GETTER(name, type, expr)                              \
    coevnet_status name(const coevnet_sim* sim, type* out) {          \
        if (!sim) return null_arg("sim");                             \
        if (!out) return null_arg("out");                             \
        *out = (expr);                                                \
        return COEVNET_OK;                                            \
    }

COEVNET_GETTER(coevnet_sim_time, size_t, sim->state.t)
COEVNET_GETTER(coevnet_sim_node_count, size_t, sim->state.graph.node_count())
COEVNET_GETTER(coevnet_sim_edge_count, size_t, sim->state.graph.edge_count())
COEVNET_GETTER(coevnet_sim_topic_count, size_t, sim->state.profile.topics())
COEVNET_GETTER(coevnet_sim_density, double, graph_density(sim->state.graph))

#undef COEVNET_GETTER

coevnet_status coevnet_sim_has_edge(const coevnet_sim* sim, size_t i, size_t j, int* out) {
    if (!sim) return null_arg("sim");
    if (!out) return null_arg("out");
    const std::size_t n = sim->state.graph.node_count();
    if (i >= n || j >= n) return fail(COEVNET_ERR_ARG, "node index out of range");
    *out = i != j && sim->state.graph.has_edge(i, j);
    return COEVNET_OK;
}

coevnet_status coevnet_sim_opinion(const coevnet_sim* sim, size_t i, size_t k, int* out) {
    if (!sim) return null_arg("sim");
    if (!out) return null_arg("out");
    if (i >= sim->state.profile.node_count() || k >= sim->state.profile.topics())
        return fail(COEVNET_ERR_ARG, "agent or topic index out of range");
    *out = sim->state.profile.at(i, k);
    return COEVNET_OK;
}

coevnet_status coevnet_sim_archetype(const coevnet_sim* sim, size_t i, int* out) {
    if (!sim) return null_arg("sim");
    if (!out) return null_arg("out");
    if (i >= sim->state.agents.size()) return fail(COEVNET_ERR_ARG, "agent index out of range");
    *out = static_cast<int>(index_of(sim->state.agents[i].archetype));
    return COEVNET_OK;
}

#define COEVNET_EXPORT(name, expr)                                  \
    coevnet_status name(const coevnet_sim* sim, char** out) {       \
        if (!sim) return null_arg("sim");                           \
        if (!out) return null_arg("out");                           \
        return guarded([&] {                                        \
            *out = dup(expr);                                       \
            return COEVNET_OK;                                      \
        });                                                         \
    }

COEVNET_EXPORT(coevnet_sim_dot, to_dot(sim->state))
COEVNET_EXPORT(coevnet_sim_edge_list, to_edge_list(sim->state.graph))
COEVNET_EXPORT(coevnet_sim_metrics_csv, metrics_csv(sim->record))
COEVNET_EXPORT(coevnet_sim_trajectory_csv, trajectory_csv(snapshot(sim)))
COEVNET_EXPORT(coevnet_sim_summary_json, run_summary(snapshot(sim)).dump(2))

#undef COEVNET_EXPORT

coevnet_status coevnet_run_config(const char* config_path, int64_t replicas, const uint64_t* seed,
                                  const char* out_dir, unsigned workers, char** manifest_path) {
    if (!config_path) return null_arg("config_path");
    if (!out_dir) return null_arg("out_dir");
    return guarded([&] {
        ExperimentSpec spec;
        spec.base = parse_config(config_path);
        spec.replicas = replicas;
        spec.seed_base = seed ? *seed : spec.base.seed;
        spec.workers = workers;
        const auto m = run_suite(spec, out_dir);
        if (manifest_path) *manifest_path = dup(m.manifest_path().string());
        return COEVNET_OK;
    });
}

coevnet_status coevnet_run_suite(const char* suite, int64_t replicas, uint64_t seed, const char* out_dir,
                                 unsigned workers, char** manifest_path) {
    if (!suite) return null_arg("suite");
    if (!out_dir) return null_arg("out_dir");
    return guarded([&] {
        ExperimentSpec spec;
        spec.suite = suite_from_string(suite);
        if (!spec.suite)
            throw ConfigError(std::string("unknown suite '") + suite +
                              "' (expected verification, composition, density or resistance)");
        spec.replicas = replicas;
        spec.seed_base = seed;
        spec.workers = workers;
        const auto m = run_suite(spec, out_dir);
        if (manifest_path) *manifest_path = dup(m.manifest_path().string());
        return COEVNET_OK;
    });
}

coevnet_status coevnet_summarize(const char* manifest_path, char** summary_json) {
    if (!manifest_path) return null_arg("manifest_path");
    if (!summary_json) return null_arg("summary_json");
    return guarded([&] {
        *summary_json = dup(summarize(load_manifest(manifest_path)).dump(2));
        return COEVNET_OK;
    });
}

coevnet_status coevnet_oracle_check(uint64_t seed, int* all_passed, char** report) {
    if (!all_passed) return null_arg("all_passed");
    return guarded([&] {
        json out = json::array();
        bool ok = true;
        for (const auto& r : oracle::run_equivalence_checks(seed)) {
            ok = ok && r.passed();
            out.push_back({{"name", r.name},
                           {"cases", r.cases},
                           {"failures", r.failures},
                           {"max_error", r.max_error},
                           {"tolerance", r.tolerance},
                           {"passed", r.passed()},
                           {"first_failure", r.first_failure}});
        }
        *all_passed = ok;
        if (report) *report = dup(out.dump(2));
        return COEVNET_OK;
    });
}

}  // extern "C"
