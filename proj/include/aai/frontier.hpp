#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aai/battery.hpp"
#include "aai/stats.hpp"

namespace aai::frontier {

class QualityFrontier {
public:
    // Per-task empirical survival curves with task weights omega (default uniform, normalized to 1).
    QualityFrontier(std::span<const EpisodeTrace* const> traces, const std::map<std::string, double>& weights = {});

    // sum_t omega_t * P(q >= tau | t)
    [[nodiscard]] double at(double tau) const;
    // Exact integral over [0,1]: sum_t omega_t * mean q_t.
    [[nodiscard]] double auf() const noexcept { return auf_; }
    [[nodiscard]] std::vector<std::pair<double, double>> curve(std::size_t points = 101) const;

private:
    std::vector<std::pair<double, std::vector<double>>> tasks_;  // (omega, sorted qualities)
    double auf_ = 0.0;
};

// F_a(tau*) - F_b(tau*)
[[nodiscard]] double delta_f(const QualityFrontier& a, const QualityFrontier& b, double tau_star);

// H_max(a) = (1 - a) h_max
[[nodiscard]] double intervention_budget(double a, double h_max);

struct FrontierEstimate {
    std::vector<double> a;
    std::vector<std::optional<double>> raw;   // max admissible quality per bin
    std::vector<std::optional<double>> q;     // nonincreasing projection
    std::vector<std::optional<double>> lo;
    std::vector<std::optional<double>> hi;
    double h_max = 0.0;
    bool coverage_complete = true;  // no empty bins
    std::string label = "upper-envelope (monotone)";
};

[[nodiscard]] std::vector<double> default_bins(std::size_t count = 11);

[[nodiscard]] FrontierEstimate delegability_frontier(std::span<const PolicyRun> runs, double h_max,
                                                     std::span<const double> bins, const stats::ResamplePlan& plan,
                                                     bool with_ci = true);

struct FrontierSummary {
    double fd = 0.0;
    double auf = 0.0;
    std::vector<double> nu;
};

// Trapezoid weights of the uniform measure over non-empty bins, renormalized.
[[nodiscard]] std::vector<double> trapezoid_nu(const FrontierEstimate& e);

[[nodiscard]] FrontierSummary frontier_summaries(const FrontierEstimate& e, double q_star,
                                                 std::optional<std::vector<double>> nu = std::nullopt);

// AUF_{Q*}(later) - AUF_{Q*}(earlier); bins must match.
[[nodiscard]] double frontier_shift(const FrontierEstimate& later, const FrontierEstimate& earlier, double q_star);

struct SlopeVerdict {
    double slope = 0.0;
    std::optional<double> lo;
    std::optional<double> hi;
    bool pass = false;
};

[[nodiscard]] SlopeVerdict frontier_slope(std::span<const double> R, std::span<const double> auf, double floor,
                                          const stats::ResamplePlan& plan);

[[nodiscard]] json frontier_to_json(const FrontierEstimate& e, const FrontierSummary& s, double q_star);

}  // namespace aai::frontier
