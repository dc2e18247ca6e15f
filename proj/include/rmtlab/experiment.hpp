#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace rmtlab {

struct ExperimentConfig {
    std::string kind;
    nlohmann::json parameters;
    std::uint64_t masterSeed = 1;
    int workers = 1;
    std::string outputDir = ".";

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::string startedAt;
    std::string finishedAt;
    std::vector<std::string> artifacts;
    nlohmann::json summary;
    std::string softwareVersion;
    std::vector<std::uint64_t> perTaskSeeds;
    bool pass = true;

    nlohmann::json to_json() const;
};

/// Dispatches the config to the owning module, fans tasks across workers,
/// writes artifacts atomically, and returns the result record.
ExperimentResult run_experiment(const ExperimentConfig& config);

extern const char* kSoftwareVersion;

}  // namespace rmtlab
