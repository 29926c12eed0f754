#pragma once

#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "coevnet/engine.hpp"

namespace coevnet {

/// Filesystem failure; the message always carries the offending path.
class IoError : public std::runtime_error {
public:
    IoError(const std::filesystem::path& path, const std::string& what)
        : std::runtime_error(path.string() + ": " + what), path_(path) {}
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Shortest round-trip decimal form; stable across runs of the same build.
std::string format_number(double v);

// --- config -----------------------------------------------------------------

/// Every key a config document may contain.
const std::set<std::string>& config_fields();

/// Builds a validated config from JSON. Unknown fields, wrong types and
/// semantic violations are all reported together in one ConfigError.
SimConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SimConfig& config);

/// Reads and validates a JSON config file.
SimConfig parse_config(const std::filesystem::path& path);

// --- serialization ----------------------------------------------------------

nlohmann::json step_log_to_json(const StepLog& log);
StepLog step_log_from_json(const nlohmann::json& doc);
nlohmann::json result_to_json(const SimResult& result);
nlohmann::json flags_to_json(const OutcomeFlags& flags);

/// Undirected DOT with `archetype` and `opinions` node attributes.
std::string to_dot(const SimState& state);
/// One `i j w_ij w_ji` line per edge.
std::string to_edge_list(const SocialGraph& g);

std::string metrics_csv(const SimResult& result);
std::string trajectory_csv(const SimResult& result);

/// Per-run digest: resolved config, outcome flags and final-frame figures.
nlohmann::json run_summary(const SimResult& result);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

void export_dot(const SimState& state, const std::filesystem::path& path);
/// Writes metrics.csv and trajectory.csv into `dir`.
void export_csv(const SimResult& result, const std::filesystem::path& dir);

}  // namespace coevnet
