#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aai/battery.hpp"
#include "aai/dynamics.hpp"

namespace aai::simulate {

struct ArchetypeSpec {
    std::string name;
    std::map<Axis, double> targets;  // A G P M T R S W $
    double index = 0.0;              // table AAI-Index column
    double kappa = 0.0;
    std::optional<std::pair<double, double>> kappa_ci;  // table CI, for comparison only
    int tool_categories = 1;
    bool maintenance_evidence = false;
    int expected_level = -1;
};

// The four illustrative archetypes: rpa, agentic-llm, self-improving, orchestrator.
[[nodiscard]] std::vector<ArchetypeSpec> default_archetypes();

struct ArchetypeOptions {
    int runs = 100;
    double noise = 0.02;
    std::uint64_t seed = 0;
    int families = 100;
    int tasks_per_family = 5;
    double kappa_star = 0.005;
    double h_max = 3.0;
};

struct SimulatedCorpus {
    json config;
    std::vector<EpisodeTrace> traces;
    std::vector<RevisionEvent> events;
    std::vector<Checkpoint> checkpoints;
    json evidence;
};

// Battery used by the archetype generator.
[[nodiscard]] Battery archetype_battery(const ArchetypeOptions& opt);

[[nodiscard]] SimulatedCorpus simulate_archetypes(const std::vector<ArchetypeSpec>& specs,
                                                  const ArchetypeOptions& opt);

// Writes config.json, traces.jsonl, events.jsonl, checkpoints.jsonl, evidence.json, expected.csv.
void write_corpus(const SimulatedCorpus& corpus, const std::vector<ArchetypeSpec>& specs, const std::string& dir);

struct ProgressionSpec {
    double a = 1.0;
    double beta = 0.5;
    double kbar0 = 0.0;
    double kbar_cap_eps = 1e-6;
    dynamics::Normalizer normalizer{dynamics::Normalizer::Kind::michaelis_menten, 0.01};
    dynamics::Link link = dynamics::Link::surprisal;
    double c0 = 0.6;
    double r_min = 1.0;
    double kappa_star = 0.005;
    std::map<Axis, double> axes0;
    std::map<Axis, double> rho4;
    std::map<Axis, double> rho5;
    std::map<Axis, double> theta4;  // AAI-4 thresholds
    std::map<Axis, double> theta5;  // AAI-5 floors (G3, G4)
    std::vector<double> margins0;
    std::vector<double> mu;
    double zeta = 2.0;
    double coverage_floor = 0.95;
    double lambda_tool = 2.0;
    double lambda_rev = 2.0;
    double alpha_tool = 0.2;
    double alpha_rev = 0.2;
    double innovation_floor = 0.8;
    dynamics::StepConfig step;
    double budget = 100.0;
    double max_step = 0.01;
    double tol = 1e-10;
};

// Hypothesis-satisfying default anchored at the AAI-3 row.
[[nodiscard]] ProgressionSpec default_progression();

struct ProgressionRow {
    double R = 0.0;
    double kbar = 0.0;
    double kappa = 0.0;
    double C = 0.0;
    double y = 0.0;
    bool aai4 = false;
    bool aai5 = false;
};

struct ProgressionResult {
    std::vector<ProgressionRow> rows;
    std::optional<double> R4;
    std::optional<double> R5;
    std::optional<double> T4;
    std::optional<double> T5;
    std::optional<double> C4;
    double innovation = 0.0;
    double m_floor = 0.0;  // min link derivative on [c0, 1)
    std::string status;    // "ok" or "budget exceeded"
    std::string coupling = "dy/dR = m_floor * kappa on the link scale";
};

[[nodiscard]] ProgressionResult simulate_progression(const ProgressionSpec& spec);

// Resource at which kbar first reaches threshold under dkbar/dR = a (1 - kbar)^beta.
[[nodiscard]] std::optional<double> rate_escape_hit(double a, double beta, double kbar0, double threshold,
                                                    double budget, double max_step, double tol = 1e-12);

// Closed form of the same hitting resource.
[[nodiscard]] double rate_escape_closed_form(double a, double beta, double kbar0, double threshold);

[[nodiscard]] json progression_to_json(const ProgressionResult& r);
[[nodiscard]] std::string progression_csv(const ProgressionResult& r);

}  // namespace aai::simulate
