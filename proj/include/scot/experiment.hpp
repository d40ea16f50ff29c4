#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "scot/simulator.hpp"
#include "scot/workload.hpp"

namespace scot {

inline constexpr const char* kConfigSchema = "scot-experiment/1";

// A validated experiment: topology built, workload resolved or generated.
struct Experiment {
    std::string origin;
    nlohmann::json document;
    std::shared_ptr<const ScotTopology> topology;
    SimConfig sim;
    Workload workload;
    std::optional<WorkloadSpec> generator;
    std::uint64_t seed = 1;
    std::optional<std::string> output;

    // Redraws a generated workload from a new seed.
    void reseed(std::uint64_t new_seed);
};

// Errors are ConfigError (message carries origin, line and JSON path) or
// the topology/graph error raised while building the overlay.
Experiment parse_experiment(const std::string& text, const std::string& origin = "<config>");
Experiment parse_experiment(const nlohmann::json& doc, const std::string& origin = "<config>");
Experiment load_experiment(const std::filesystem::path& path);

struct RunArtifacts {
    SimResult result;
    std::string messages_csv;
    std::string links_csv;
    std::string summary;
};

RunArtifacts run_experiment(const Experiment& e, Mode mode);

// Writes messages.csv, links.csv, summary.txt (and trace.txt when the run
// was traced) into `dir`, creating it.
void write_artifacts(const std::filesystem::path& dir, const RunArtifacts& a);

// key=value lines comparing runs of the same experiment in several modes.
std::string comparison_text(const std::vector<RunArtifacts>& runs);

// Built-in configurations: h-tree, h-tree-subscribe, h-tree-notify, dnr-case1..3,
// roman, stability.
std::vector<std::string> fixture_names();
nlohmann::json fixture(const std::string& name);

}  // namespace scot
