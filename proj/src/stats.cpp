#include "aai/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "aai/error.hpp"

namespace aai::stats {

namespace {

constexpr const char* kModule = "stats";

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Draw in [0, n) from a 64-bit word; identical across standard libraries.
std::size_t bounded(std::mt19937_64& rng, std::size_t n) noexcept {
    const unsigned __int128 product = static_cast<unsigned __int128>(rng()) * n;
    return static_cast<std::size_t>(product >> 64);
}

void check_plan(const ResamplePlan& plan) {
    if (plan.replicates < 1) throw Error(kModule, "replicates must be positive");
    if (!(plan.level > 0.0 && plan.level < 1.0)) throw Error(kModule, "confidence level must be in (0,1)");
}

std::size_t slope_offset(std::size_t i, std::size_t n) noexcept {
    // pairs (k, j>k) for k < i
    return i * (2 * n - i - 1) / 2;
}

void check_xy(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(kModule, "theil_sen: x and y lengths differ");
}

double median_of_slopes(std::vector<double>& slopes) {
    slopes.erase(std::remove_if(slopes.begin(), slopes.end(), [](double s) { return std::isnan(s); }),
                 slopes.end());
    if (slopes.empty()) throw Error(kModule, "theil_sen: no pair with distinct x");
    return median(std::move(slopes));
}

}  // namespace

std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate) noexcept {
    return splitmix64(splitmix64(master) ^ (replicate + 0x632BE59BD9B4E019ULL));
}

std::size_t default_block_length(std::size_t n) noexcept {
    if (n == 0) return 1;
    auto len = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n)) - 1e-12));
    return std::max<std::size_t>(1, len);
}

std::vector<std::size_t> resample_indices(std::size_t n, const ResamplePlan& plan,
                                          std::uint64_t replicate) {
    std::vector<std::size_t> idx(n);
    if (n == 0) return idx;
    std::mt19937_64 rng(replicate_seed(plan.seed, replicate));
    if (plan.mode == ResampleMode::iid) {
        for (auto& i : idx) i = bounded(rng, n);
        return idx;
    }
    const std::size_t len = std::min(n, plan.block_length == 0 ? default_block_length(n) : plan.block_length);
    std::size_t filled = 0;
    while (filled < n) {
        const std::size_t start = bounded(rng, n);
        for (std::size_t k = 0; k < len && filled < n; ++k) idx[filled++] = (start + k) % n;
    }
    return idx;
}

std::vector<double> bootstrap_replicates(std::size_t n, const Statistic& stat, const ResamplePlan& plan) {
    check_plan(plan);
    const auto reps = static_cast<std::int64_t>(plan.replicates);
    std::vector<double> out(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < reps; ++b) {
        const auto idx = resample_indices(n, plan, static_cast<std::uint64_t>(b));
        out[static_cast<std::size_t>(b)] = stat(idx);
    }
    return out;
}

std::vector<double> serial::bootstrap_replicates(std::size_t n, const Statistic& stat,
                                                 const ResamplePlan& plan) {
    check_plan(plan);
    std::vector<double> out(static_cast<std::size_t>(plan.replicates));
    for (std::size_t b = 0; b < out.size(); ++b) out[b] = stat(resample_indices(n, plan, b));
    return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error(kModule, "quantile of empty sample");
    const double pos = clip(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Interval percentile_interval(double point, std::vector<double> replicates, double level) {
    Interval out{point, std::nullopt, std::nullopt};
    replicates.erase(std::remove_if(replicates.begin(), replicates.end(),
                                    [](double v) { return !std::isfinite(v); }),
                     replicates.end());
    // Too many degenerate replicates: report the point only.
    if (replicates.size() < 2) return out;
    std::sort(replicates.begin(), replicates.end());
    const double tail = (1.0 - level) / 2.0;
    double lo = quantile_sorted(replicates, tail);
    double hi = quantile_sorted(replicates, 1.0 - tail);
    // Widened to contain the point estimate so lo <= point <= hi always holds.
    out.lo = std::min(lo, point);
    out.hi = std::max(hi, point);
    return out;
}

Interval bootstrap_ci(std::size_t n, const Statistic& stat, const ResamplePlan& plan) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const double point = stat(all);
    if (n < 2) return Interval{point, std::nullopt, std::nullopt};
    return percentile_interval(point, bootstrap_replicates(n, stat, plan), plan.level);
}

Interval bootstrap_ci(std::span<const double> values, const ResamplePlan& plan) {
    if (values.empty()) throw Error(kModule, "bootstrap of empty sample");
    Statistic stat = [values](std::span<const std::size_t> idx) {
        double s = 0.0;
        for (auto i : idx) s += values[i];
        return s / static_cast<double>(idx.size());
    };
    return bootstrap_ci(values.size(), stat, plan);
}

double mean(std::span<const double> v) {
    if (v.empty()) throw Error(kModule, "mean of empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    if (v.empty()) throw Error(kModule, "median of empty sample");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double lower_median(std::vector<double> v) {
    if (v.empty()) throw Error(kModule, "median of empty sample");
    const std::size_t mid = (v.size() - 1) / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) throw Error(kModule, "sd needs at least two values");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double theil_sen(std::span<const double> x, std::span<const double> y) {
    check_xy(x, y);
    const std::size_t n = x.size();
    if (n < 2) throw Error(kModule, "theil_sen: fewer than two points");
    std::vector<double> slopes(n * (n - 1) / 2);
    const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        std::size_t k = slope_offset(i, n);
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            const double dx = x[j] - x[i];
            slopes[k] = dx == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (y[j] - y[i]) / dx;
        }
    }
    return median_of_slopes(slopes);
}

double serial::theil_sen(std::span<const double> x, std::span<const double> y) {
    check_xy(x, y);
    const std::size_t n = x.size();
    if (n < 2) throw Error(kModule, "theil_sen: fewer than two points");
    std::vector<double> slopes;
    slopes.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[j] - x[i];
            slopes.push_back(dx == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (y[j] - y[i]) / dx);
        }
    return median_of_slopes(slopes);
}

std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights,
                                 bool increasing) {
    const std::size_t n = values.size();
    if (n == 0) throw Error(kModule, "isotonic_fit: empty input");
    if (weights.size() != n) throw Error(kModule, "isotonic_fit: weight length mismatch");
    for (double w : weights)
        if (!(w >= 0.0)) throw Error(kModule, "isotonic_fit: negative weight");

    const double sign = increasing ? 1.0 : -1.0;
    struct Block {
        double sum;     // weighted sum of values
        double weight;  // total weight
        double plain;   // unweighted sum, used when weight is zero
        std::size_t count;
        [[nodiscard]] double value() const {
            return weight > 0.0 ? sum / weight : plain / static_cast<double>(count);
        }
    };
    std::vector<Block> blocks;
    blocks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sign * values[i];
        blocks.push_back({weights[i] * v, weights[i], v, 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].value() > blocks.back().value()) {
            Block top = blocks.back();
            blocks.pop_back();
            auto& prev = blocks.back();
            prev.sum += top.sum;
            prev.weight += top.weight;
            prev.plain += top.plain;
            prev.count += top.count;
        }
    }
    std::vector<double> out;
    out.reserve(n);
    for (const auto& b : blocks) out.insert(out.end(), b.count, sign * b.value());
    return out;
}

std::vector<double> isotonic_fit(std::span<const double> values, bool increasing) {
    std::vector<double> w(values.size(), 1.0);
    return isotonic_fit(values, w, increasing);
}

double did_delta(double pre_treated, double post_treated, double pre_control, double post_control) {
    for (double v : {pre_treated, post_treated, pre_control, post_control})
        if (std::isnan(v)) throw Error(kModule, "did_delta: missing capability value");
    return (post_treated - pre_treated) - (post_control - pre_control);
}

double clip(double x, double lo, double hi) noexcept { return std::min(hi, std::max(lo, x)); }

}  // namespace aai::stats
