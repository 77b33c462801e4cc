#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aai/battery.hpp"
#include "aai/stats.hpp"

namespace aai::dynamics {

enum class Link { logit, surprisal };

inline constexpr double kClampMargin = 1e-9;

[[nodiscard]] const char* link_name(Link l) noexcept;
[[nodiscard]] Link parse_link(const std::string& name);

// Clamp to [1e-9, 1 - 1e-9]; sets *clamped when the input moved.
[[nodiscard]] double clamp_capability(double c, bool* clamped = nullptr);

[[nodiscard]] double link(double c, Link l);
[[nodiscard]] double link_inverse(double y, Link l);
[[nodiscard]] double link_derivative(double c, Link l);

struct LinkValue {
    double g = 0.0;
    double uniformity = 0.0;  // g(c) / g(1 - eps0)
    bool clamped = false;
};

[[nodiscard]] LinkValue link_transform(double c, Link l, double eps0 = 0.01);

struct Normalizer {
    enum class Kind { michaelis_menten, logistic };
    Kind kind = Kind::michaelis_menten;
    double param = 1.0;  // kappa_half or s
};

[[nodiscard]] double normalize_rate(double kappa, const Normalizer& n);
[[nodiscard]] double normalize_rate_inverse(double kbar, const Normalizer& n);

struct Series {
    std::string family;
    std::vector<double> t;  // days
    std::vector<double> R;
    std::vector<double> C;
    bool clamped = false;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

// Ordered series per family; R falls back to the ledger, then to t.
[[nodiscard]] std::map<std::string, Series> build_series(std::span<const Checkpoint> checkpoints,
                                                         const ResourceLedger* ledger = nullptr);

struct KappaEstimate {
    double theil_sen = 0.0;
    double fd_median = 0.0;
    std::optional<double> lo;  // bootstrap CI of the Theil-Sen slope
    std::optional<double> hi;
};

[[nodiscard]] double fd_median(std::span<const double> R, std::span<const double> C);
[[nodiscard]] KappaEstimate kappa_estimate(const Series& s, const stats::ResamplePlan& plan);

struct WindowRates {
    double kappa = 0.0;    // (C2 - C1) / (R2 - R1)
    double velocity = 0.0;  // (R2 - R1) / (t2 - t1)
    double kappa_t = 0.0;  // kappa * velocity
};

// Uses the first checkpoint at or after t1 and the last at or before t2; nullopt when R2 == R1.
[[nodiscard]] std::optional<WindowRates> window_rates(const Series& s, double t1, double t2);

struct LocalFit {
    double kappa = 0.0;   // first derivative of g(C) in R
    double dkappa = 0.0;  // second derivative
    double bandwidth = 0.0;
};

// Tricube-weighted quadratic fit of y on R centered at r0. Rank deficiency doubles h once, then throws.
[[nodiscard]] LocalFit local_quadratic(std::span<const double> R, std::span<const double> y, double r0,
                                       double bandwidth);

struct CurvaturePoint {
    double R = 0.0;
    double kappa = 0.0;
    double dkappa = 0.0;
    std::optional<double> kappa_lo, kappa_hi, dkappa_lo, dkappa_hi;
    std::optional<double> elasticity;
};

struct Curvature {
    std::vector<CurvaturePoint> points;  // each checkpoint R, then the window midpoint last
    std::vector<double> midpoint_dkappa_replicates;
    double bandwidth = 0.0;
};

[[nodiscard]] Curvature curvature(const Series& s, Link l, double bandwidth_fraction,
                                  const stats::ResamplePlan& plan);

struct RateConversion {
    double kappa = 0.0;
    double dkappa = 0.0;
};

// kappa = kappa_t / r; dkappa = dkappa_t / r^2 - kappa_t r' / r^3
[[nodiscard]] RateConversion convert_time_to_resource(double kappa_t, double dkappa_t, double r, double r_prime);

// R * dkappa / kappa; nullopt when kappa <= 0.
[[nodiscard]] std::optional<double> meta_elasticity(double R, double kappa, double dkappa);

enum class StepMode { additive, multiplicative };

struct StepConfig {
    Link link = Link::surprisal;
    StepMode mode = StepMode::additive;
    double delta = 1.0;       // additive increment
    double multiplier = 2.0;  // multiplicative factor A > 1
};

[[nodiscard]] double step_operator(double c, const StepConfig& cfg);

struct LambdaConfig {
    double alpha = 0.5;
    bool three_term = false;
    double w_c = 0.4;
    double w_kappa = 0.4;
    double w_delta = 0.2;
    double eta = 1.0;
    double eta_prime = 1.0;
    double gamma_star = 1.0;
    bool k_plus = false;
};

struct LambdaScore {
    double value = 0.0;
    double m = 0.0;
    std::optional<double> k;
    bool clamped = false;
};

[[nodiscard]] LambdaScore lambda_score(double U, double kappa, double dkappa, double kappa_star,
                                       const LambdaConfig& cfg);

struct EscapeBounds {
    double resource = 0.0;
    std::optional<double> time;
};

[[nodiscard]] EscapeBounds escape_bounds(double c0, double eps, double v_esc, std::optional<double> r_min, Link l);

struct Exemplar {
    double lambda = 0.0;
    int level = 0;
};

// Level -> smallest Lambda at that level after isotonic projection.
[[nodiscard]] std::map<int, double> calibrate_cutpoints(std::span<const Exemplar> exemplars);
[[nodiscard]] std::optional<int> label_for(double lambda, const std::map<int, double>& cutpoints);

struct DynamicsConfig {
    Link link = Link::surprisal;
    double eps0 = 0.01;
    double bandwidth_fraction = 0.5;
    Normalizer normalizer;
    LambdaConfig lambda;
    StepConfig step;
    std::optional<double> kappa_star;
    double window_days = 7.0;
};

[[nodiscard]] DynamicsConfig load_dynamics_config(const json& doc);

struct FamilyDynamics {
    std::string family;
    std::size_t n = 0;
    double span_days = 0.0;
    KappaEstimate kappa;
    std::optional<Curvature> curvature;
    std::string curvature_error;
    std::optional<double> midpoint_kappa;
    std::optional<double> midpoint_dkappa;
    std::optional<double> prob_dkappa_nonneg;
    std::optional<double> elasticity;
    std::optional<double> normalized_rate;
    std::optional<LambdaScore> lambda;
    std::optional<bool> sustained;  // kappa >= kappa* in every rolling window
    std::vector<double> window_kappas;
    double last_c = 0.0;
    bool clamped = false;
};

[[nodiscard]] FamilyDynamics analyze_family(const Series& s, const DynamicsConfig& cfg,
                                            const stats::ResamplePlan& plan);

[[nodiscard]] json family_dynamics_to_json(const FamilyDynamics& f, const DynamicsConfig& cfg);

}  // namespace aai::dynamics
