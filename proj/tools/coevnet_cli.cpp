// coevnet command-line front end. Talks to the simulator only through the C API.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "coevnet/coevnet.h"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kIo = 2 };

int report(coevnet_status st) {
    if (st == COEVNET_OK) return kOk;
    std::cerr << "error: " << coevnet_last_error() << '\n';
    return st == COEVNET_ERR_IO ? kIo : kInvalid;
}

// Takes ownership of a string returned by the library.
std::string take(char* s) {
    std::string out = s ? s : "";
    coevnet_string_free(s);
    return out;
}

int finish_batch(coevnet_status st, char* manifest) {
    if (st != COEVNET_OK) return report(st);
    const std::string path = take(manifest);
    char* summary = nullptr;
    if (auto s = coevnet_summarize(path.c_str(), &summary); s != COEVNET_OK) return report(s);
    std::cout << take(summary) << '\n';
    std::cerr << "manifest: " << path << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coevolving opinion network simulator"};
    app.set_version_flag("--version", std::string(coevnet_version()));
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", suite_name, manifest_path;
    std::int64_t replicas = 1;
    std::optional<std::uint64_t> seed;
    std::uint64_t oracle_seed = 20240601;
    unsigned workers = 0;

    auto* run = app.add_subcommand("run", "Run one config, optionally over several seeds");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--replicas", replicas, "Number of seeds (seed, seed+1, ...)")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "First seed; defaults to the config's seed");
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--workers", workers, "Worker threads (0 = all cores)");

    auto* suite = app.add_subcommand("suite", "Run a prebuilt experiment suite");
    suite->add_option("--name", suite_name, "Suite")
        ->required()
        ->check(CLI::IsMember({"verification", "composition", "density", "resistance"}));
    suite->add_option("--replicas", replicas, "Replicas per sweep point")->default_val(10);
    suite->add_option("--seed", seed, "Seed of replica 0");
    suite->add_option("--out", out_dir, "Output directory")->capture_default_str();
    suite->add_option("--workers", workers, "Worker threads (0 = all cores)");

    auto* summ = app.add_subcommand("summarize", "Aggregate the runs listed in a manifest");
    summ->add_option("--manifest", manifest_path, "manifest.json")->required();

    auto* oracle = app.add_subcommand("oracle-check", "Compare fast algorithms against brute force");
    oracle->add_option("--seed", oracle_seed, "Seed for the random instances")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    if (*run) {
        char* manifest = nullptr;
        const std::uint64_t s = seed.value_or(0);
        const auto st = coevnet_run_config(config_path.c_str(), replicas, seed ? &s : nullptr,
                                           out_dir.c_str(), workers, &manifest);
        return finish_batch(st, manifest);
    }
    if (*suite) {
        char* manifest = nullptr;
        const auto st = coevnet_run_suite(suite_name.c_str(), replicas, seed.value_or(0), out_dir.c_str(),
                                          workers, &manifest);
        return finish_batch(st, manifest);
    }
    if (*summ) {
        char* summary = nullptr;
        if (auto st = coevnet_summarize(manifest_path.c_str(), &summary); st != COEVNET_OK) return report(st);
        std::cout << take(summary) << '\n';
        return kOk;
    }
    if (*oracle) {
        int passed = 0;
        char* text = nullptr;
        if (auto st = coevnet_oracle_check(oracle_seed, &passed, &text); st != COEVNET_OK) return report(st);
        std::cout << take(text) << '\n';
        if (!passed) {
            std::cerr << "oracle-check: mismatch against brute force\n";
            return kInvalid;
        }
        return kOk;
    }
    return kInvalid;
}
