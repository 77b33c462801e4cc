#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace aai::stats {

enum class ResampleMode { iid, block };

struct ResamplePlan {
    ResampleMode mode = ResampleMode::iid;
    int replicates = 1000;
    std::size_t block_length = 0;  // 0 selects ceil(n^(1/3))
    std::uint64_t seed = 0;
    double level = 0.95;
};

struct Interval {
    double point = 0.0;
    std::optional<double> lo;
    std::optional<double> hi;

    [[nodiscard]] bool has_ci() const noexcept { return lo.has_value() && hi.has_value(); }
};

// Statistic over a resample expressed as unit indices. May return NaN for a
// degenerate resample; such replicates are dropped from the percentile CI.
using Statistic = std::function<double(std::span<const std::size_t>)>;

[[nodiscard]] std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate) noexcept;
[[nodiscard]] std::size_t default_block_length(std::size_t n) noexcept;

// Index vector for one replicate; depends only on (n, plan, replicate).
[[nodiscard]] std::vector<std::size_t> resample_indices(std::size_t n, const ResamplePlan& plan,
                                                        std::uint64_t replicate);

// Replicate values computed in parallel (OpenMP). Order matches replicate index.
[[nodiscard]] std::vector<double> bootstrap_replicates(std::size_t n, const Statistic& stat,
                                                       const ResamplePlan& plan);

// Percentile CI of an arbitrary statistic. n < 2 gives the point estimate only.
[[nodiscard]] Interval bootstrap_ci(std::size_t n, const Statistic& stat, const ResamplePlan& plan);

// Percentile CI of the sample mean.
[[nodiscard]] Interval bootstrap_ci(std::span<const double> values, const ResamplePlan& plan);

// Percentile CI from precomputed replicates (NaNs dropped).
[[nodiscard]] Interval percentile_interval(double point, std::vector<double> replicates, double level);

// Linear-interpolated quantile of a sorted sample, q in [0,1].
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double q);

[[nodiscard]] double mean(std::span<const double> v);
[[nodiscard]] double median(std::vector<double> v);
[[nodiscard]] double lower_median(std::vector<double> v);
[[nodiscard]] double sample_sd(std::span<const double> v);

// Median of pairwise slopes over pairs with distinct x (OpenMP over rows).
[[nodiscard]] double theil_sen(std::span<const double> x, std::span<const double> y);

// Weighted least-squares monotone projection (pool-adjacent-violators).
[[nodiscard]] std::vector<double> isotonic_fit(std::span<const double> values,
                                               std::span<const double> weights,
                                               bool increasing = true);
[[nodiscard]] std::vector<double> isotonic_fit(std::span<const double> values, bool increasing = true);

[[nodiscard]] double did_delta(double pre_treated, double post_treated, double pre_control,
                               double post_control);

[[nodiscard]] double clip(double x, double lo, double hi) noexcept;

namespace serial {

// Single-threaded references for the parallel kernels above.
[[nodiscard]] std::vector<double> bootstrap_replicates(std::size_t n, const Statistic& stat,
                                                       const ResamplePlan& plan);
[[nodiscard]] double theil_sen(std::span<const double> x, std::span<const double> y);

}  // namespace serial

}  // namespace aai::stats
