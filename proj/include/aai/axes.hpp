#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aai/battery.hpp"
#include "aai/stats.hpp"

namespace aai::axes {

using TraceSpan = std::span<const EpisodeTrace* const>;

// clip((raw - L)/(U - L), 0, 1)
[[nodiscard]] double calibrate(double raw, Anchor anchor);

[[nodiscard]] double axis_A(TraceSpan traces, int horizon_cap);
[[nodiscard]] double axis_G(std::span<const FamilyAggregate> families);
[[nodiscard]] double axis_P(TraceSpan traces, int depth_anchor);

struct RetentionFit {
    std::string family;
    double lambda = 0.0;
    double q0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double m = 0.0;
    std::optional<double> half_life_fit;
    std::optional<double> half_life_empirical;
    std::vector<std::pair<double, double>> curve;  // (lag, mean quality)
    std::size_t n = 0;
};

struct MemoryResult {
    double raw = 0.0;
    std::vector<RetentionFit> families;
    std::vector<std::string> skipped;
    double lag_span_days = 0.0;
    std::size_t n = 0;
};

// exp(-lambda / lambda_max)
[[nodiscard]] double retention_score(double lambda, double lambda_max);
[[nodiscard]] MemoryResult axis_M(TraceSpan persistence, const Battery& b);

struct DeltaPoint {
    std::string tag;
    double magnitude = 0.0;
    double success = 0.0;
    std::size_t n = 0;
};

struct ToolResult {
    double raw = 0.0;
    double cov = 0.0;
    double succ = 0.0;
    double size_factor = 0.0;
    std::size_t used_count = 0;
    std::size_t required_count = 0;
    std::vector<DeltaPoint> per_delta;
    double mild_magnitude = 0.0;
    std::map<std::string, double> category_success_mild;
    int tools_mild_ok = 0;  // categories with >= 60% success at the mild drift
    std::size_t n = 0;
};

// (cov * succ * S)^(1/3) with S = min(1, ln(1+used)/ln(1+s_max))
[[nodiscard]] double tool_score(double cov, double succ, double used, double s_max);
[[nodiscard]] ToolResult axis_T(TraceSpan traces, const Battery& b);

struct EventContribution {
    std::string event_id;
    double delta = 0.0;
    double rho = 0.0;
    double contribution = 0.0;
};

struct RevisionResult {
    double raw = 0.0;
    std::vector<EventContribution> events;
    std::vector<std::string> excluded;
};

[[nodiscard]] RevisionResult axis_R(std::span<const RevisionEvent> events, double revision_scale,
                                    const std::array<double, 3>& stage_weights);

struct SocialResult {
    double raw = 0.0;
    double lift = 0.0;
    double pi_conflict = 0.0;
    double pi_deadlock = 0.0;
    std::optional<double> tau_comm;
    std::size_t tasks = 0;
    std::size_t penalty_episodes = 0;
};

[[nodiscard]] SocialResult axis_S(TraceSpan traces, const Battery& b);

struct EmbodiedResult {
    std::optional<double> raw;  // absent when S2R cannot be formed
    double ar = 0.0;
    double ss = 0.0;
    std::optional<double> s2r;
    std::optional<double> mtbf;
    std::optional<double> mttr;
    std::optional<double> mtbsi;
    double hours = 0.0;
    std::array<double, 4> rates{};  // incidents per 100 h: nm, min, maj, crit
    std::size_t n_real = 0;
    std::size_t n_sim = 0;
};

[[nodiscard]] bool is_embodied(const EpisodeTrace& t);
[[nodiscard]] EmbodiedResult axis_E(TraceSpan embodied, const Battery& b);

struct RoboticsDiagnostics {
    std::optional<double> ra;
    std::optional<double> qc;
    std::optional<double> dollar_phys;
};

[[nodiscard]] RoboticsDiagnostics robotics_diagnostics(TraceSpan embodied, const Battery& b);

struct WorldModelResult {
    double raw = 0.0;
    double brier = 0.0;
    double brier_ref = 0.0;
    std::size_t n = 0;
};

[[nodiscard]] WorldModelResult axis_W(TraceSpan traces, const Battery& b);

struct DollarResult {
    double raw = 0.0;
    double tph = 0.0;
    double cph = 0.0;
    double hours = 0.0;
    std::size_t successes = 0;
};

[[nodiscard]] DollarResult axis_dollar(TraceSpan traces, std::optional<double> cost_per_hour, double q_star);

struct AxisScore {
    Axis axis = Axis::A;
    bool has_data = false;
    std::optional<double> raw;
    std::optional<double> score;
    std::optional<double> lo;
    std::optional<double> hi;
    std::size_t n = 0;
    std::string reason;
    json diagnostics = json::object();
};

struct AxisVector {
    std::map<Axis, AxisScore> axes;
    std::size_t tool_count = 0;
    int tools_mild_ok = 0;
    double memory_lag_span = 0.0;
    std::size_t runs = 1;

    [[nodiscard]] std::optional<double> score(Axis a) const;
};

// Full axis vector for one run; with_ci=false skips bootstrap bands.
[[nodiscard]] AxisVector compute_axes(TraceSpan traces, std::span<const RevisionEvent> events, const Battery& b,
                                      const stats::ResamplePlan& plan, bool with_ci = true);

// Mean over runs; CI is the percentile bootstrap of the run mean.
[[nodiscard]] AxisVector average_runs(std::span<const AxisVector> runs, const stats::ResamplePlan& plan);

[[nodiscard]] json axis_vector_to_json(const AxisVector& v);

// Vector with the given normalized scores marked as measured; other axes no-data.
[[nodiscard]] AxisVector vector_from_scores(const std::map<Axis, double>& scores);

}  // namespace aai::axes
