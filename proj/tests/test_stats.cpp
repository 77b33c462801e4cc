#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "aai/error.hpp"
#include "aai/stats.hpp"
#include "helpers.hpp"

using namespace aai;
using namespace aai::stats;
using aai::testing::Gen;

namespace {

double brute_theil_sen(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> s;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (x[j] != x[i]) s.push_back((y[j] - y[i]) / (x[j] - x[i]));
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

// Least-squares nondecreasing fit by exhaustive search over block partitions.
std::vector<double> brute_isotonic(const std::vector<double>& v, const std::vector<double>& w) {
    const std::size_t n = v.size();
    std::vector<double> best;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<double> fit(n);
        std::size_t start = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool cut = i == n - 1 || (mask >> i & 1u);
            if (!cut) continue;
            double s = 0, ws = 0;
            for (std::size_t k = start; k <= i; ++k) {
                s += w[k] * v[k];
                ws += w[k];
            }
            for (std::size_t k = start; k <= i; ++k) fit[k] = s / ws;
            start = i + 1;
        }
        if (!std::is_sorted(fit.begin(), fit.end())) continue;
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) err += w[i] * (fit[i] - v[i]) * (fit[i] - v[i]);
        if (err < best_err - 1e-15) {
            best_err = err;
            best = fit;
        }
    }
    return best;
}

Statistic mean_stat(const std::vector<double>& v) {
    return [&v](std::span<const std::size_t> idx) {
        double s = 0;
        for (auto i : idx) s += v[i];
        return s / static_cast<double>(idx.size());
    };
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("Theil-Sen examples") {
    CHECK(theil_sen(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 0}) == 0.0);
    CHECK(theil_sen(std::vector<double>{0, 1, 2, 3}, std::vector<double>{1, 3, 5, 7}) == 2.0);
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(i);
        y.push_back(0.5 * i + 1);
    }
    y[9] = 100;
    CHECK(theil_sen(x, y) == 0.5);
    CHECK_THROWS_AS((void)theil_sen(std::vector<double>{1, 1}, std::vector<double>{0, 1}), Error);
}

TEST_CASE("Theil-Sen matches the exhaustive oracle") {
    Gen g(100);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(g.integer(2, 50));
        auto x = g.vec(n, -5, 5);
        const auto y = g.vec(n, -5, 5);
        if (trial % 5 == 0) x[1] = x[0];
        if (n == 2 && x[0] == x[1]) continue;
        const double oracle = brute_theil_sen(x, y);
        CHECK(theil_sen(x, y) == oracle);
        CHECK(serial::theil_sen(x, y) == oracle);
    }
}

TEST_CASE("isotonic examples") {
    const std::vector<double> mono{1, 2, 3};
    CHECK(isotonic_fit(mono) == mono);
    CHECK(isotonic_fit(std::vector<double>{3, 1, 2}) == std::vector<double>{2, 2, 2});
    const std::vector<double> v{0.3, 0.1, 0.7, 0.4};
    auto rev = v;
    std::reverse(rev.begin(), rev.end());
    auto inc = isotonic_fit(v, true);
    auto dec = isotonic_fit(rev, false);
    std::reverse(dec.begin(), dec.end());
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(inc[i] == doctest::Approx(dec[i]).epsilon(1e-12));
}

TEST_CASE("isotonic fit matches brute-force projection") {
    Gen g(200);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(g.integer(1, 12));
        const auto v = g.vec(n, 0, 1);
        const auto w = g.vec(n, 0.1, 2);
        const auto fit = isotonic_fit(v, w);
        const auto oracle = brute_isotonic(v, w);
        REQUIRE(fit.size() == oracle.size());
        CHECK(std::is_sorted(fit.begin(), fit.end()));
        double m1 = 0, m2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(fit[i] - oracle[i]) < 1e-12);
            m1 += w[i] * fit[i];
            m2 += w[i] * v[i];
        }
        CHECK(std::abs(m1 - m2) < 1e-12);
    }
}

TEST_CASE("bootstrap constant sample and determinism") {
    const std::vector<double> c(30, 0.4);
    ResamplePlan plan;
    plan.replicates = 200;
    const auto iv = bootstrap_ci(c, plan);
    CHECK(*iv.lo == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(*iv.hi == doctest::Approx(0.4).epsilon(1e-14));

    Gen g(3);
    const auto v = g.vec(80, 0, 1);
    plan.seed = 99;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(4);
    const auto a = bootstrap_replicates(v.size(), mean_stat(v), plan);
    const auto b = serial::bootstrap_replicates(v.size(), mean_stat(v), plan);
    CHECK(a == b);
    omp_set_num_threads(1);
    const auto c1 = bootstrap_replicates(v.size(), mean_stat(v), plan);
    omp_set_num_threads(saved);
    CHECK(a == c1);
    plan.seed = 100;
    CHECK(bootstrap_replicates(v.size(), mean_stat(v), plan) != a);
}

TEST_CASE("block bootstrap with full-length blocks gives rotations") {
    ResamplePlan plan;
    plan.mode = ResampleMode::block;
    plan.block_length = 9;
    for (std::uint64_t r = 0; r < 20; ++r) {
        const auto idx = resample_indices(9, plan, r);
        for (std::size_t k = 1; k < idx.size(); ++k) CHECK(idx[k] == (idx[k - 1] + 1) % 9);
    }
    CHECK(default_block_length(27) == 3);
    CHECK(default_block_length(28) == 4);
}

TEST_CASE("percentile interval contains the point") {
    Gen g(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto v = g.vec(static_cast<std::size_t>(g.integer(2, 40)), -1, 1);
        ResamplePlan plan;
        plan.replicates = 100;
        plan.seed = static_cast<std::uint64_t>(trial);
        const auto iv = bootstrap_ci(v, plan);
        CHECK(*iv.lo <= iv.point);
        CHECK(iv.point <= *iv.hi);
    }
}

TEST_CASE("medians and difference in differences") {
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 2, 3}) == 2.5);
    CHECK(lower_median({4, 1, 2, 3}) == 2);
    CHECK(did_delta(0.78, 0.84, 0.78, 0.80) == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(did_delta(0.5, 0.6, 0.5, 0.6) == 0.0);
    CHECK(did_delta(0.5, 0.6, 0.5, 0.8) < 0.0);
    CHECK_THROWS_AS((void)did_delta(std::nan(""), 0.6, 0.5, 0.8), Error);
}

}
