#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aai/axes.hpp"
#include "aai/battery.hpp"
#include "aai/composite.hpp"
#include "aai/dynamics.hpp"
#include "aai/frontier.hpp"
#include "aai/gates.hpp"
#include "aai/stats.hpp"

namespace aai::report {

inline constexpr const char* kEngineName = "aai-meter";
inline constexpr const char* kEngineVersion = "1.0.0";

struct InputPaths {
    std::string config;
    std::string traces;
    std::optional<std::string> events;
    std::optional<std::string> checkpoints;
    std::optional<std::string> evidence;
};

struct Corpus {
    json config;
    Battery battery;
    std::vector<EpisodeTrace> traces;
    std::vector<RevisionEvent> events;
    std::vector<Checkpoint> checkpoints;
    json evidence = json::object();
    std::map<std::string, std::string> checksums;  // role -> sha256 of the input file
    IngestWarnings warnings;
};

[[nodiscard]] json read_json_file(const std::string& path);
[[nodiscard]] Corpus load_corpus(const InputPaths& paths);

// Bootstrap plan from config "bootstrap" {replicates, level, block_length} and the master seed.
[[nodiscard]] stats::ResamplePlan plan_from_config(const json& config, std::uint64_t seed);

// Sorted agent ids over traces and checkpoints; an empty id maps to "agent".
[[nodiscard]] std::vector<std::string> agent_ids(const Corpus& c);

struct Options {
    std::uint64_t seed = 0;
    std::optional<std::string> preset;  // overrides the battery preset weights
    bool dynamics = true;
    bool gates = true;
    bool frontier = true;
};

struct AgentAnalysis {
    std::string agent;
    std::size_t runs = 0;
    axes::AxisVector axes;
    composite::CompositeResult strict;
    composite::CompositeResult floor;
    std::vector<dynamics::FamilyDynamics> dynamics;
    std::optional<gates::LevelReport> level;
    std::optional<frontier::FrontierEstimate> delegability;
    std::optional<frontier::FrontierSummary> delegability_summary;
    std::string frontier_note;
    std::optional<double> quality_auf;
    std::vector<std::pair<double, double>> quality_curve;
    axes::MemoryResult memory;
    axes::ToolResult tools;
    bool has_memory = false;
};

struct Analysis {
    std::vector<AgentAnalysis> agents;
    std::string preset;
    double q_star = 0.0;
    std::optional<dynamics::DynamicsConfig> dynamics_config;
};

// ingest -> axes -> composite -> dynamics -> gates -> frontier
[[nodiscard]] Analysis analyze(const Corpus& c, const Options& opt);

[[nodiscard]] json validation_json(const Corpus& c, bool* pass);
[[nodiscard]] json axes_json(const Analysis& a);
[[nodiscard]] json composite_json(const Analysis& a, const Corpus& c);
[[nodiscard]] json dynamics_json(const Analysis& a);
[[nodiscard]] json gates_json(const Analysis& a);
[[nodiscard]] json frontier_json(const Analysis& a);

// Full bundle with input checksums, config snapshot, engine version, seed and bundle checksum.
[[nodiscard]] json bundle_json(const Analysis& a, const Corpus& c, const Options& opt);

// Writes bundle.json, tables/*.csv and plots/*.svg; returns notes for skipped plots.
std::vector<std::string> write_report(const json& bundle, const Analysis& a, const std::string& dir);

// Canonical serialization used for files and checksums.
[[nodiscard]] std::string canonical(const json& j);

struct SvgSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

// Frontier overlay with the Q* line; with two or more series the region where the
// last series lies above the first is shaded.
[[nodiscard]] std::string frontier_svg(const std::vector<SvgSeries>& series, double q_star);
[[nodiscard]] std::string line_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                                   const std::vector<SvgSeries>& series);

}  // namespace aai::report
