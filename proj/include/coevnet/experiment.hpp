#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coevnet/engine.hpp"

namespace coevnet {

enum class SuiteKind { verification, composition, density, resistance };

std::string to_string(SuiteKind s);
std::optional<SuiteKind> suite_from_string(const std::string& name);

/// One swept config field; values are JSON so any config key can be swept.
struct SweepAxis {
    std::string field;
    std::vector<nlohmann::json> values;
};

struct ExperimentSpec {
    SimConfig base;
    std::int64_t replicas = 1;
    std::uint64_t seed_base = 0;
    std::vector<SweepAxis> sweep;
    std::optional<SuiteKind> suite;
    unsigned workers = 0;  // 0: hardware concurrency

    /// Throws ConfigError when replicas < 1, a sweep field is unknown, or a
    /// swept value yields an invalid config.
    void validate() const;
};

struct SweepPoint {
    std::string name;
    SimConfig config;  // seed is overwritten per replica
};

/// Sweep points of the spec: the suite's fixed grid if set, otherwise the
/// cartesian product of the sweep axes (a single "base" point when empty).
std::vector<SweepPoint> sweep_points(const ExperimentSpec& spec);

struct RunEntry {
    std::string point;
    std::int64_t replica = 0;
    std::uint64_t seed = 0;
    std::filesystem::path dir;  // relative to the manifest's directory
    SimConfig config;

    static constexpr const char* kMetrics = "metrics.csv";
    static constexpr const char* kTrajectory = "trajectory.csv";
    static constexpr const char* kDot = "final.dot";
    static constexpr const char* kSummary = "summary.json";
};

struct RunManifest {
    std::string tool_version;
    std::string suite;  // suite name, or "run" for plain runs
    std::filesystem::path root;  // directory holding manifest.json
    std::int64_t replicas = 0;
    std::uint64_t seed_base = 0;
    std::vector<RunEntry> runs;

    std::filesystem::path manifest_path() const { return root / "manifest.json"; }
};

nlohmann::json manifest_to_json(const RunManifest& m);
/// `root` is taken from where the file lives, so manifests can be moved.
RunManifest manifest_from_json(const nlohmann::json& doc, const std::filesystem::path& root);
RunManifest load_manifest(const std::filesystem::path& path);

/// Plans the runs without executing them.
RunManifest plan(const ExperimentSpec& spec, const std::filesystem::path& out);

/// Executes one planned run and writes its four files.
void execute_run(const RunManifest& manifest, const RunEntry& entry);

/// Plans, checks the output directory is writable, runs everything on a
/// worker pool, then writes manifest.json.
RunManifest run_suite(const ExperimentSpec& spec, const std::filesystem::path& out);

/// Per-point aggregates over the files listed in the manifest.
nlohmann::json summarize(const RunManifest& manifest);

/// Mean of a metrics.csv column over rows with t >= from_t; nullopt when the
/// column is empty in all such rows.
std::optional<double> column_mean(const std::string& metrics_csv, const std::string& column,
                                  std::size_t from_t);

const char* version_string();

}  // namespace coevnet
