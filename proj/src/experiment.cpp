#include "coevnet/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "coevnet/io.hpp"

#ifndef COEVNET_VERSION
#define COEVNET_VERSION "0.0.0"
#endif

namespace coevnet {

using nlohmann::json;
namespace fs = std::filesystem;

const char* version_string() { return COEVNET_VERSION; }

std::string to_string(SuiteKind s) {
    switch (s) {
        case SuiteKind::verification: return "verification";
        case SuiteKind::composition: return "composition";
        case SuiteKind::density: return "density";
        case SuiteKind::resistance: return "resistance";
    }
    return "unknown";
}

std::optional<SuiteKind> suite_from_string(const std::string& name) {
    for (auto s : {SuiteKind::verification, SuiteKind::composition, SuiteKind::density,
                   SuiteKind::resistance})
        if (to_string(s) == name) return s;
    return std::nullopt;
}

namespace {

std::string dist_label(const TypeDist& d) {
    std::ostringstream s;
    s << std::lround(d[0] * 100) << '-' << std::lround(d[1] * 100) << '-' << std::lround(d[2] * 100);
    return s.str();
}

std::string value_label(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    for (char& c : s)
        if (c == '/' || c == ' ' || c == '"' || c == ':' || c == '{' || c == '}' || c == '[' || c == ']')
            c = '_';
    return s;
}

SimConfig with_dist(SimConfig c, const TypeDist& d) {
    c.type_dist = d;
    return c;
}

const std::vector<TypeDist>& mixed_compositions() {
    static const std::vector<TypeDist> d{
        {0.34, 0.33, 0.33}, {0.50, 0.25, 0.25}, {0.60, 0.20, 0.20}, {0.70, 0.15, 0.15}};
    return d;
}

std::vector<SweepPoint> suite_points(SuiteKind suite, const SimConfig& base) {
    std::vector<SweepPoint> out;
    switch (suite) {
        case SuiteKind::verification: {
            const std::pair<const char*, TypeDist> grid[] = {
                {"hom", {1, 0, 0}},         {"het", {0, 1, 0}},         {"adv", {0, 0, 1}},
                {"hom-het", {0.5, 0.5, 0}}, {"hom-adv", {0.5, 0, 0.5}}, {"het-adv", {0, 0.5, 0.5}}};
            for (const auto& [name, d] : grid) out.push_back({name, with_dist(base, d)});
            break;
        }
        case SuiteKind::composition:
            for (const auto& d : mixed_compositions()) {
                SimConfig c = with_dist(base, d);
                c.saturation = 0.15;
                c.upd_thresh = 0.0;
                c.res_overrides = {};
                out.push_back({dist_label(d), c});
            }
            break;
        case SuiteKind::density:
            for (double sat : {0.05, 0.10, 0.15, 0.20, 0.25}) {
                SimConfig c = with_dist(base, mixed_compositions()[0]);
                c.saturation = sat;
                out.push_back({"sat-" + format_number(sat), c});
            }
            break;
        case SuiteKind::resistance:
            for (std::size_t d = 0; d < 2; ++d)
                for (double res : {0.0, 0.25, 0.5}) {
                    SimConfig c = with_dist(base, mixed_compositions()[d]);
                    c.res_overrides[index_of(Archetype::het)] = res;
                    out.push_back({dist_label(c.type_dist) + "_het-res-" + format_number(res), c});
                }
            break;
    }
    return out;
}

}  // namespace

void ExperimentSpec::validate() const {
    std::vector<std::string> problems;
    if (replicas < 1) problems.push_back("replicas must be >= 1 (got " + std::to_string(replicas) + ")");
    try {
        base.validate();
    } catch (const ConfigError& e) {
        problems.push_back(e.what());
    }
    if (problems.empty()) {
        try {
            sweep_points(*this);
        } catch (const ConfigError& e) {
            problems.push_back(e.what());
        }
    }
    if (problems.empty()) return;
    std::string msg = "invalid experiment:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg);
}

std::vector<SweepPoint> sweep_points(const ExperimentSpec& spec) {
    if (spec.suite) return suite_points(*spec.suite, spec.base);

    std::vector<std::pair<std::string, json>> partial{{"", config_to_json(spec.base)}};
    for (const auto& axis : spec.sweep) {
        if (!config_fields().count(axis.field) || axis.field == "seed")
            throw ConfigError("sweep field '" + axis.field + "' is not a config field");
        if (axis.values.empty()) throw ConfigError("sweep field '" + axis.field + "' has no values");
        std::vector<std::pair<std::string, json>> next;
        for (const auto& [name, doc] : partial)
            for (const auto& v : axis.values) {
                json patched = doc;
                patched[axis.field] = v;
                const std::string part = axis.field + "=" + value_label(v);
                next.emplace_back(name.empty() ? part : name + "," + part, std::move(patched));
            }
        partial = std::move(next);
    }
    std::vector<SweepPoint> out;
    for (auto& [name, doc] : partial)
        out.push_back({name.empty() ? "base" : name, config_from_json(doc)});
    return out;
}

// --- manifest ---------------------------------------------------------------

json manifest_to_json(const RunManifest& m) {
    json runs = json::array();
    for (const auto& r : m.runs)
        runs.push_back({{"point", r.point},
                        {"replica", r.replica},
                        {"seed", r.seed},
                        {"dir", r.dir.generic_string()},
                        {"files",
                         {{"metrics", RunEntry::kMetrics},
                          {"trajectory", RunEntry::kTrajectory},
                          {"dot", RunEntry::kDot},
                          {"summary", RunEntry::kSummary}}},
                        {"config", config_to_json(r.config)}});
    return {{"tool", "coevnet"},
            {"version", m.tool_version},
            {"suite", m.suite},
            {"replicas", m.replicas},
            {"seed_base", m.seed_base},
            {"layout", "<suite>/<point>/<replica>/"},
            {"runs", std::move(runs)}};
}

RunManifest manifest_from_json(const json& doc, const fs::path& root) {
    try {
        RunManifest m;
        m.root = root;
        m.tool_version = doc.at("version").get<std::string>();
        m.suite = doc.at("suite").get<std::string>();
        m.replicas = doc.at("replicas").get<std::int64_t>();
        m.seed_base = doc.at("seed_base").get<std::uint64_t>();
        for (const auto& r : doc.at("runs")) {
            RunEntry e;
            e.point = r.at("point").get<std::string>();
            e.replica = r.at("replica").get<std::int64_t>();
            e.seed = r.at("seed").get<std::uint64_t>();
            e.dir = fs::path(r.at("dir").get<std::string>());
            e.config = config_from_json(r.at("config"));
            m.runs.push_back(std::move(e));
        }
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
}

RunManifest load_manifest(const fs::path& path) {
    const std::string text = read_text(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return manifest_from_json(doc, path.parent_path());
}

// --- execution --------------------------------------------------------------

RunManifest plan(const ExperimentSpec& spec, const fs::path& out) {
    spec.validate();
    RunManifest m;
    m.tool_version = version_string();
    m.suite = spec.suite ? to_string(*spec.suite) : "run";
    m.root = out / m.suite;
    m.replicas = spec.replicas;
    m.seed_base = spec.seed_base;
    for (const auto& point : sweep_points(spec))
        for (std::int64_t r = 0; r < spec.replicas; ++r) {
            RunEntry e;
            e.point = point.name;
            e.replica = r;
            e.seed = spec.seed_base + static_cast<std::uint64_t>(r);
            e.dir = fs::path(point.name) / std::to_string(r);
            e.config = point.config;
            e.config.seed = e.seed;
            m.runs.push_back(std::move(e));
        }
    return m;
}

void execute_run(const RunManifest& manifest, const RunEntry& entry) {
    const SimResult result = run(entry.config);
    const fs::path dir = manifest.root / entry.dir;
    export_csv(result, dir);
    export_dot(result.final_state, dir / RunEntry::kDot);
    write_text(dir / RunEntry::kSummary, run_summary(result).dump(2) + "\n");
}

namespace {

void ensure_writable(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir, "cannot create output directory: " + ec.message());
    const fs::path probe = dir / ".write-probe";
    {
        std::ofstream f(probe, std::ios::trunc);
        if (!(f << "ok")) throw IoError(dir, "output directory is not writable");
    }
    fs::remove(probe, ec);
}

}  // namespace

RunManifest run_suite(const ExperimentSpec& spec, const fs::path& out) {
    RunManifest m = plan(spec, out);
    ensure_writable(m.root);

    unsigned workers = spec.workers ? spec.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(m.runs.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= m.runs.size()) return;
            try {
                execute_run(m, m.runs[i]);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = m.runs.size();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    write_text(m.manifest_path(), manifest_to_json(m).dump(2) + "\n");
    return m;
}

// --- summarize --------------------------------------------------------------

std::optional<double> column_mean(const std::string& csv, const std::string& column, std::size_t from_t) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("metrics table is empty");
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(s);
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    const auto header = split(line);
    std::size_t col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == column) col = c;
    if (col == header.size()) throw ConfigError("metrics table has no column '" + column + "'");
    double total = 0.0;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() <= col || std::stoul(cells[0]) < from_t || cells[col].empty()) continue;
        total += std::stod(cells[col]);
        ++count;
    }
    if (count == 0) return std::nullopt;
    return total / static_cast<double>(count);
}

json summarize(const RunManifest& manifest) {
    if (manifest.runs.empty()) throw ConfigError("manifest lists no runs");

    std::vector<std::string> missing;
    for (const auto& r : manifest.runs)
        for (const char* f : {RunEntry::kMetrics, RunEntry::kSummary}) {
            const fs::path p = manifest.root / r.dir / f;
            if (!fs::is_regular_file(p)) missing.push_back(p.string());
        }
    if (!missing.empty()) {
        std::string msg = "missing run files:";
        for (const auto& p : missing) msg += "\n  " + p;
        throw IoError(manifest.root, msg);
    }

    struct Acc {
        std::size_t runs = 0;
        std::map<std::string, std::size_t> flags;
        double density = 0.0;
        std::array<double, 3> isolates{};
        double het_btw = 0.0;
        std::size_t het_btw_runs = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, Acc> acc;
    const char* flag_names[] = {"all_components_consensus", "oscillation_period2", "density_plateaued",
                                "fully_disconnected"};

    for (const auto& r : manifest.runs) {
        if (!acc.count(r.point)) order.push_back(r.point);
        Acc& a = acc[r.point];
        const fs::path dir = manifest.root / r.dir;
        json s;
        try {
            s = json::parse(read_text(dir / RunEntry::kSummary));
        } catch (const json::parse_error& e) {
            throw IoError(dir / RunEntry::kSummary, e.what());
        }
        ++a.runs;
        for (const char* f : flag_names)
            if (s.at("flags").at(f).get<bool>()) ++a.flags[f];
        a.density += s.at("final_density").get<double>();
        for (Archetype t : kArchetypes)
            a.isolates[index_of(t)] += s.at("isolates_by_type").at(std::string(to_string(t))).get<double>();
        if (auto m = column_mean(read_text(dir / RunEntry::kMetrics), "btw_mean_het", 50)) {
            a.het_btw += *m;
            ++a.het_btw_runs;
        }
    }

    json points = json::array();
    for (const auto& name : order) {
        const Acc& a = acc[name];
        const double n = static_cast<double>(a.runs);
        json flags = json::object();
        for (const char* f : flag_names) {
            auto it = a.flags.find(f);
            flags[f] = (it == a.flags.end() ? 0.0 : static_cast<double>(it->second)) / n;
        }
        json iso = json::object();
        for (Archetype t : kArchetypes) iso[std::string(to_string(t))] = a.isolates[index_of(t)] / n;
        json p{{"point", name},
               {"runs", a.runs},
               {"flag_fractions", std::move(flags)},
               {"mean_final_density", a.density / n},
               {"mean_isolates_by_type", std::move(iso)}};
        p["mean_het_betweenness_t50"] =
            a.het_btw_runs ? json(a.het_btw / static_cast<double>(a.het_btw_runs)) : json(nullptr);
        points.push_back(std::move(p));
    }
    return {{"suite", manifest.suite}, {"version", manifest.tool_version}, {"points", std::move(points)}};
}

}  // namespace coevnet
