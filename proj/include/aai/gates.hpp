#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aai/axes.hpp"
#include "aai/battery.hpp"
#include "aai/dynamics.hpp"
#include "aai/stats.hpp"

namespace aai::gates {

enum class GateMode { base, curvature };

struct GateConfig {
    // Axis threshold rows for levels 2..4; a threshold of 0 at R in level 2 means R > 0.
    std::map<int, std::map<Axis, double>> table;
    double kappa_star = 0.0;
    double maintenance_alpha = 0.8;
    int maintenance_days = 7;
    double expansion_eps = 0.01;
    double accel_alpha = 0.05;
    double gamma = 0.01;  // diminishing-returns bound
    double zeta = 2.0;
    double coverage_floor = 0.95;
    double g2_fraction = 0.8;
    double alpha_tool = 0.2;
    double alpha_rev = 0.2;
    double innovation_floor = 0.8;
    double g3_floor = 0.9;
    double g3_software_floor = 0.95;
    double g4_floor = 0.9;
    double aai0_a = 0.95;
    double aai0_p_max = 0.05;
    int aai0_t_max = 1;
    double aai1_a = 0.5;
    double aai1_p = 0.3;
    int aai1_tools = 3;
    double aai2_days = 7.0;
    double aai3_p = 0.7;
    double aai3_s = 0.5;
    double aai3_m_span_days = 30.0;
    int aai3_families = 2;
    double aai4_p = 0.9;
    double aai4_s = 0.7;
    int aai4_families = 2;
    double chc_tau_v = 0.85;
    double chc_tau_h = 0.05;
    std::optional<double> chc_tau_w;
    std::optional<double> chc_tau_ms;
    double core_gamma = 1.0;
    bool require_chc = false;
    GateMode mode = GateMode::base;
    dynamics::StepConfig step;
};

[[nodiscard]] std::map<int, std::map<Axis, double>> default_table();

// Reads the "gates" section; gates.kappa_star is required.
[[nodiscard]] GateConfig load_gate_config(const json& doc);

struct DayRecord {
    int day = 0;
    double index = 0.0;
    bool human_patch = false;
};

struct ClosureResult {
    bool pass = false;
    bool insufficient = false;
    std::string reason;
    double margin = 0.0;
    std::optional<double> did;
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<double> ablation_gap;
    std::optional<double> ablation_did;
    std::string event_id;
};

// Every day >= alpha * baseline over >= Y consecutive days, no human patches.
[[nodiscard]] ClosureResult maintenance_closure(double baseline, std::span<const DayRecord> days, double alpha,
                                                int window_days);

// DiD > 0 with CI excluding 0, ablated capability within eps of pre, ablated DiD within eps of 0.
[[nodiscard]] ClosureResult expansion_closure(const RevisionEvent& e, double eps, const stats::ResamplePlan& plan);

struct CurvatureVerdicts {
    int accel_families = 0;       // P(dk >= 0) >= 1 - alpha
    bool diminishing_all = false;  // dk >= -gamma on every family with a fit
    bool m1 = false;
    bool m2 = false;
    bool m3 = false;
    bool insufficient = false;
    std::size_t families = 0;
};

[[nodiscard]] CurvatureVerdicts curvature_gates(std::span<const dynamics::FamilyDynamics> families,
                                                const GateConfig& cfg);

struct PairedQuality {
    double agent = 0.0;
    double human = 0.0;
};

// (mean A - mean H) / (sd(diffs) / sqrt(n)); +-inf for a constant nonzero difference.
[[nodiscard]] double superhuman_margin(std::span<const PairedQuality> pairs);

struct Evidence {
    std::optional<double> maintenance_baseline;
    std::vector<DayRecord> maintenance_days;
    std::map<std::string, std::vector<PairedQuality>> human_pairs;
    std::optional<double> lambda_tool;
    std::optional<double> lambda_rev;
    bool innovation_ablation_verified = false;
    std::optional<double> c_prev;
    std::optional<double> c_aai4;
    std::vector<std::vector<int>> vrp_bits;
    struct WmTrial {
        int seed = 0;
        int length = 0;
        double accuracy = 0.0;
    };
    std::vector<WmTrial> wm_trials;
    std::optional<double> wm_theta;
    std::vector<double> recall_fractions;
    std::map<std::string, double> core_scores;
};

[[nodiscard]] Evidence load_evidence(const json& doc);
[[nodiscard]] json evidence_to_json(const Evidence& e);

struct ChcResult {
    std::optional<double> vrp;
    std::optional<double> hall;
    std::optional<double> wm_span;
    std::optional<double> delayed_recall;
    bool pass = false;
    bool insufficient = false;
    std::string reason;
};

[[nodiscard]] double vrp_at_k(const std::vector<std::vector<int>>& bits);
[[nodiscard]] double wm_span(std::span<const Evidence::WmTrial> trials, double theta);
[[nodiscard]] ChcResult chc_gates(const Evidence& e, const GateConfig& cfg);

struct Aai5Result {
    std::map<std::string, double> margins;
    std::optional<double> coverage;  // Gamma
    std::optional<double> innovation;  // I
    std::optional<double> step_target;
    std::array<bool, 6> pass{};
    std::array<std::string, 6> detail;
};

struct Allocation {
    std::map<Axis, double> amounts;
    bool uniform_fallback = false;
};

// r_x = B w_x eta_x / sum(w eta); the last axis takes the rounding residual.
[[nodiscard]] Allocation suggest_allocation(const std::map<Axis, double>& weights, const std::map<Axis, double>& eta,
                                            double budget);

struct GateInputs {
    axes::AxisVector axes;
    std::vector<dynamics::FamilyDynamics> families;
    std::vector<RevisionEvent> events;
    Evidence evidence;
    std::optional<double> composite;
    std::optional<bool> human_parity;  // every family covered at its human threshold
    std::string preset = "default";
};

struct Verdict {
    int level = 0;
    std::string gate;
    bool pass = false;
    std::string status;  // pass, fail, insufficient evidence, no data
    std::string detail;
};

struct LevelReport {
    int level = -1;
    std::array<bool, 6> level_pass{};
    std::vector<Verdict> verdicts;
    std::optional<ClosureResult> maintenance;
    std::optional<ClosureResult> expansion;
    CurvatureVerdicts curvature;
    Aai5Result aai5;
    ChcResult chc;
    std::optional<double> step_target;
    std::optional<double> double_step_target;
    json descriptors = json::object();
};

[[nodiscard]] LevelReport assign_level(const GateInputs& in, const GateConfig& cfg, const stats::ResamplePlan& plan);

[[nodiscard]] json level_report_to_json(const LevelReport& r);

}  // namespace aai::gates
