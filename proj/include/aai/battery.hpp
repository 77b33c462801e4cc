#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace aai {

using json = nlohmann::json;

enum class Axis { A, G, P, M, T, R, S, E, W, Dollar };

inline constexpr std::array<Axis, 10> kAllAxes{Axis::A, Axis::G, Axis::P, Axis::M, Axis::T,
                                               Axis::R, Axis::S, Axis::E, Axis::W, Axis::Dollar};

[[nodiscard]] const char* axis_key(Axis a) noexcept;
[[nodiscard]] Axis parse_axis(const std::string& key);

struct Anchor {
    double lo = 0.0;
    double hi = 1.0;
};

struct TaskSpec {
    std::string id;
    std::string family;
    double q_star = 0.5;
    std::vector<std::string> required_tools;
    std::optional<double> reference_prob;  // pre-registered predictor for W
};

struct FamilySpec {
    std::string name;
    double threshold = 0.5;                 // tau_i
    std::optional<double> human_threshold;  // human-reference anchor for parity
    std::vector<std::string> tasks;
};

struct DriftTag {
    std::string name;
    double magnitude = 0.0;
};

struct Battery {
    std::vector<TaskSpec> tasks;
    std::vector<FamilySpec> families;
    std::vector<DriftTag> drift_catalog;
    std::map<std::string, double> resource_schema;
    std::map<Axis, Anchor> anchors;
    std::map<Axis, double> weights;
    std::string preset = "default";
    int min_family_size = 5;
    std::vector<std::string> seed_manifest;
    int horizon_cap = 10;
    int depth_anchor = 8;
    double lambda_max = 0.0990210257942779;  // ln 2 / 7 days
    int recall_k = 5;
    std::optional<double> recall_at_k;  // used when traces carry no recall outcomes
    double size_prior_max = 7.0;
    double revision_scale = 0.1;
    std::array<double, 3> stage_weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    std::array<double, 2> comm_penalty_weights{0.25, 0.25};
    std::array<int, 2> loop_thresholds{3, 3};
    std::array<double, 4> ss_severity_weights{0.25, 1.0, 5.0, 20.0};
    bool proper_scoring_declared = false;
    double target_quality = 0.65;  // Q*
    std::optional<double> cost_per_hour;
    std::optional<double> physical_cost_per_hour;

    [[nodiscard]] const TaskSpec* find_task(const std::string& id) const;
    [[nodiscard]] const FamilySpec* find_family(const std::string& name) const;
    [[nodiscard]] const DriftTag* find_drift(const std::string& name) const;
    [[nodiscard]] std::set<std::string> required_tool_set() const;
    [[nodiscard]] Anchor anchor(Axis a) const;
};

// Weight presets: "default", "software", "robotics".
[[nodiscard]] std::map<Axis, double> preset_weights(const std::string& name);

[[nodiscard]] Battery load_battery(const json& doc);
[[nodiscard]] json battery_to_json(const Battery& b);
[[nodiscard]] std::string schema_hash(const std::map<std::string, double>& schema);

struct IncidentCounts {
    long nm = 0;
    long minor = 0;
    long major = 0;
    long critical = 0;
};

struct EpisodeFlags {
    bool unresolved_conflict = false;
    bool loop = false;
    bool chatter = false;
    bool mode_collapse = false;
};

struct EpisodeTrace {
    std::string task_id;
    std::string seed_id;
    std::string drift_tag;
    double quality = 0.0;
    long uninterrupted_actions = 0;
    long plan_depth = 0;
    double cost = 0.0;
    double timestamp = 0.0;  // seconds
    double human_interventions = 0.0;
    long concurrency = 1;
    long comm_tokens = 0;
    long verified_actions = 0;
    EpisodeFlags flags;
    std::optional<double> lag_days;
    std::optional<double> stated_prob;
    std::optional<int> truth;
    std::optional<IncidentCounts> incident_counts;
    std::optional<double> exposure_hours;
    bool sim_flag = false;
    std::vector<std::string> tool_categories_used;
    std::optional<long> recovered_faults;
    std::optional<long> total_faults;
    std::optional<double> control_score;
    std::optional<double> repair_hours;
    std::optional<double> recall_at_k;
    std::string agent_id;
    std::string run_id;
    std::string policy_id;
    std::string schema_hash;
    std::string locus;  // file:line of origin
};

struct RevisionEvent {
    std::string event_id;
    std::string window_id;
    std::string agent_id;
    std::string run_id;
    std::optional<double> c_rev_pre;
    std::optional<double> c_rev_post;
    std::optional<double> c_ctrl_pre;
    std::optional<double> c_ctrl_post;
    std::array<double, 3> stage_autonomy{0.0, 0.0, 0.0};
    std::optional<double> ablation_result;
    std::optional<double> c_ctrl_abl;
    std::string change_kind = "patch";
    bool holdout_matched = true;
    std::optional<std::array<double, 2>> did_ci;
    std::vector<double> holdout_did;  // per-task paired DiD values
    std::map<std::string, std::string> artifacts;
    std::string locus;

    [[nodiscard]] bool complete() const;
};

struct Checkpoint {
    std::string family;
    std::string agent_id;
    double t = 0.0;  // days
    std::optional<double> R;
    double C = 0.0;
    std::string locus;
};

struct PolicyRun {
    std::string policy_id;
    std::string agent_id;
    double mean_quality = 0.0;
    double mean_interventions = 0.0;
};

struct LedgerRecord {
    double timestamp = 0.0;
    std::string kind;
    double quantity = 0.0;
};

class ResourceLedger {
public:
    ResourceLedger(double origin, std::vector<LedgerRecord> records,
                   const std::map<std::string, double>& schema);

    // Cumulative resource over records with origin < timestamp <= t.
    [[nodiscard]] double cumulative(double t) const;
    [[nodiscard]] double origin() const noexcept { return origin_; }

private:
    double origin_;
    std::vector<double> times_;
    std::vector<double> running_;
};

struct IngestWarnings {
    std::vector<std::string> messages;
    std::set<std::string> reported;  // unknown field names already warned about
};

// JSONL readers; malformed lines raise aai::Error with file:line locus.
[[nodiscard]] std::vector<EpisodeTrace> load_traces(const std::string& path, IngestWarnings* warnings = nullptr);
[[nodiscard]] EpisodeTrace parse_trace(const json& j, const std::string& locus,
                                       IngestWarnings* warnings = nullptr);
[[nodiscard]] json trace_to_json(const EpisodeTrace& t);

[[nodiscard]] std::vector<RevisionEvent> load_events(const std::string& path, IngestWarnings* warnings = nullptr);
[[nodiscard]] RevisionEvent parse_event(const json& j, const std::string& locus);
[[nodiscard]] json event_to_json(const RevisionEvent& e);

[[nodiscard]] std::vector<Checkpoint> load_checkpoints(const std::string& path);
[[nodiscard]] json checkpoint_to_json(const Checkpoint& c);

[[nodiscard]] std::vector<PolicyRun> load_policy_runs(const std::string& path);
// Per-policy mean quality and interventions from traces carrying policy_id.
[[nodiscard]] std::vector<PolicyRun> policy_runs_from_traces(std::span<const EpisodeTrace* const> traces);

// Checks a trace against the battery (task known, drift tag cataloged, ranges).
void check_trace(const EpisodeTrace& t, const Battery& b);

struct AdmissibilityItem {
    std::string key;  // a..e
    bool pass = false;
    bool declared = false;  // item recorded from config, not checked
    std::string message;
};

struct AdmissibilityReport {
    std::vector<AdmissibilityItem> items;
    [[nodiscard]] bool pass() const;
};

[[nodiscard]] AdmissibilityReport validate_admissibility(const Battery& b, std::span<const EpisodeTrace> traces);
[[nodiscard]] json admissibility_to_json(const AdmissibilityReport& r);

struct FamilyAggregate {
    std::string family;
    double mean_quality = 0.0;
    bool covered = false;
    std::size_t count = 0;
    bool has_data = false;
};

// Family means and coverage indicators; human=true uses the human-reference threshold.
[[nodiscard]] std::vector<FamilyAggregate> family_aggregate(std::span<const EpisodeTrace* const> traces,
                                                            const Battery& b, bool human = false);

// Pointer view helper for estimator inputs.
[[nodiscard]] std::vector<const EpisodeTrace*> refs(std::span<const EpisodeTrace> traces);

}  // namespace aai
