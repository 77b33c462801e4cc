#include <doctest.h>

#include <cmath>

#include "aai/axes.hpp"
#include "aai/error.hpp"
#include "helpers.hpp"

using namespace aai;
using namespace aai::axes;
using aai::testing::Gen;
using aai::testing::trace;

namespace {

std::vector<const EpisodeTrace*> ptrs(const std::vector<EpisodeTrace>& v) { return refs(v); }

}  // namespace

TEST_SUITE("axes") {

TEST_CASE("calibration anchors and clipping") {
    const Anchor an{0.2, 0.6};
    CHECK(calibrate(0.2, an) == 0.0);
    CHECK(calibrate(0.6, an) == 1.0);
    CHECK(calibrate(0.4, an) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(calibrate(0.2 - 0.04, an) == 0.0);
    CHECK(calibrate(0.6 + 0.04, an) == 1.0);
    CHECK_THROWS_AS((void)calibrate(0.5, Anchor{0.5, 0.5}), Error);
}

TEST_CASE("calibration is nondecreasing and scale invariant") {
    Gen g(1);
    for (int i = 0; i < 500; ++i) {
        const double lo = g.uniform(-1, 1), hi = lo + g.uniform(0.01, 2);
        const double r = g.uniform(-2, 3), r2 = r + g.uniform(0, 1);
        CHECK(calibrate(r, {lo, hi}) <= calibrate(r2, {lo, hi}));
        CHECK(calibrate(r, {lo, hi}) == doctest::Approx(calibrate(2 * r, {2 * lo, 2 * hi})).epsilon(1e-12));
    }
}

TEST_CASE("autonomy and planning examples") {
    std::vector<EpisodeTrace> ts(2);
    ts[0].uninterrupted_actions = 5;
    ts[1].uninterrupted_actions = 10;
    ts[0].plan_depth = 2;
    ts[1].plan_depth = 4;
    CHECK(axis_A(ptrs(ts), 10) == doctest::Approx(0.75));
    CHECK(axis_P(ptrs(ts), 8) == doctest::Approx(0.375));
    ts[0].uninterrupted_actions = ts[1].uninterrupted_actions = 20;
    CHECK(axis_A(ptrs(ts), 10) == 1.0);
    ts[0].plan_depth = ts[1].plan_depth = 0;
    CHECK(axis_P(ptrs(ts), 8) == 0.0);
    CHECK_THROWS_AS((void)axis_A({}, 10), NoData);
}

TEST_CASE("autonomy is monotone in each action count") {
    Gen g(2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<EpisodeTrace> ts(8);
        for (auto& t : ts) t.uninterrupted_actions = g.integer(0, 15);
        const double before = axis_A(ptrs(ts), 10);
        ts[static_cast<std::size_t>(g.integer(0, 7))].uninterrupted_actions += g.integer(0, 5);
        CHECK(axis_A(ptrs(ts), 10) >= before);
    }
}

TEST_CASE("generality counts covered families") {
    std::vector<FamilyAggregate> f{{"a", 0.9, true, 1, true}, {"b", 0.1, false, 1, true},
                                   {"c", 0.9, true, 1, true}, {"d", 0.1, false, 1, true}};
    CHECK(axis_G(f) == 0.5);
    for (auto& x : f) x.covered = true;
    CHECK(axis_G(f) == 1.0);
    for (auto& x : f) x.has_data = false;
    CHECK_THROWS_AS((void)axis_G(f), NoData);
}

TEST_CASE("memory anchor points") {
    const double t_min = 7.0, lmax = std::log(2.0) / t_min;
    CHECK(retention_score(0.0, lmax) == 1.0);
    CHECK(std::abs(retention_score(lmax, lmax) - std::exp(-1.0)) < 1e-9);
    CHECK(std::abs(retention_score(std::log(2.0) / (2 * t_min), lmax) - std::exp(-0.5)) < 1e-9);
    CHECK(retention_score(lmax, lmax) == doctest::Approx(0.37).epsilon(0.01));
    CHECK(retention_score(lmax / 2, lmax) == doctest::Approx(0.61).epsilon(0.01));
}

TEST_CASE("memory fit recovers an exact exponential") {
    auto b = aai::testing::small_battery();
    const double lambda = 0.05;
    std::vector<EpisodeTrace> ts;
    for (double lag : {0.0, 1.0, 7.0, 14.0, 30.0}) {
        auto t = trace("F0-t0", 0.9 * std::exp(-lambda * lag));
        t.lag_days = lag;
        t.recall_at_k = 0.5;
        ts.push_back(t);
    }
    const auto r = axis_M(ptrs(ts), b);
    REQUIRE(r.families.size() == 1);
    CHECK(r.families[0].lambda == doctest::Approx(lambda).epsilon(1e-9));
    CHECK(r.raw == doctest::Approx(0.5 * (std::exp(-lambda / b.lambda_max) + 0.5)).epsilon(1e-9));
    CHECK(r.lag_span_days == 30.0);

    std::vector<EpisodeTrace> single{ts[0], ts[0]};
    CHECK_THROWS_AS((void)axis_M(ptrs(single), b), NoData);
}

TEST_CASE("tool score examples") {
    CHECK(tool_score(1, 1, 7, 7) == doctest::Approx(1.0));
    CHECK(tool_score(0, 1, 7, 7) == 0.0);
    CHECK(tool_score(0.5, 0.8, 3, 7) == doctest::Approx(0.6437).epsilon(1e-4));
    CHECK(std::log(4.0) / std::log(8.0) == doctest::Approx(0.6667).epsilon(1e-4));
}

TEST_CASE("tool axis per-drift curve and mild-drift categories") {
    auto b = aai::testing::small_battery();
    std::vector<EpisodeTrace> ts;
    for (int k = 0; k < 4; ++k) {
        auto t = trace("F0-t" + std::to_string(k), 0.9, "mild");
        t.tool_categories_used = {"tool" + std::to_string(k)};
        ts.push_back(t);
    }
    ts.push_back(trace("F1-t0", 0.1, "none"));
    const auto r = axis_T(ptrs(ts), b);
    CHECK(r.cov == 1.0);
    CHECK(r.succ == doctest::Approx(0.8));
    CHECK(r.tools_mild_ok == 4);
    REQUIRE(r.per_delta.size() == 2);
    CHECK(r.per_delta[0].success == 0.0);
    CHECK(r.per_delta[1].success == 1.0);
}

TEST_CASE("self-revision worked example") {
    RevisionEvent e;
    e.event_id = "e";
    e.c_rev_pre = 0.78;
    e.c_rev_post = 0.84;
    e.c_ctrl_pre = 0.78;
    e.c_ctrl_post = 0.80;
    e.stage_autonomy = {0.9, 0.9, 0.9};
    std::vector<RevisionEvent> ev{e};
    const auto r = axis_R(ev, 0.10, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(r.events[0].delta == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(r.events[0].contribution == doctest::Approx(0.036).epsilon(1e-12));
    CHECK(r.raw == doctest::Approx(0.36).epsilon(1e-12));

    ev[0].c_ctrl_post = 0.90;
    CHECK(axis_R(ev, 0.10, {1.0 / 3, 1.0 / 3, 1.0 / 3}).raw == 0.0);
    ev[0].c_ctrl_post.reset();
    const auto ex = axis_R(ev, 0.10, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(ex.excluded.size() == 1);
}

TEST_CASE("removing a revision event lowers R by at most its contribution") {
    Gen g(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RevisionEvent> ev(5);
        for (auto& e : ev) {
            e.c_rev_pre = g.uniform();
            e.c_rev_post = g.uniform();
            e.c_ctrl_pre = g.uniform();
            e.c_ctrl_post = g.uniform();
            e.stage_autonomy = {g.uniform(), g.uniform(), g.uniform()};
        }
        const std::array<double, 3> w{0.2, 0.3, 0.5};
        const auto full = axis_R(ev, 0.5, w);
        for (const auto& c : full.events) CHECK(c.contribution >= 0.0);
        const auto removed = full.events.front().contribution;
        ev.erase(ev.begin());
        const auto less = axis_R(ev, 0.5, w);
        CHECK(less.raw <= full.raw + 1e-15);
        CHECK(full.raw - less.raw <= removed / 0.5 + 1e-12);
    }
}

TEST_CASE("sociality lift and penalties") {
    auto b = aai::testing::small_battery();
    std::vector<EpisodeTrace> ts{trace("F0-t0", 0.6), trace("F0-t0", 0.8)};
    ts[1].concurrency = 2;
    CHECK(axis_S(ptrs(ts), b).raw == doctest::Approx(0.5).epsilon(1e-8));
    ts[1].quality = 0.5;
    CHECK(axis_S(ptrs(ts), b).raw == 0.0);
    ts[1].quality = 0.8;
    ts[1].flags.unresolved_conflict = true;
    CHECK(axis_S(ptrs(ts), b).raw == 0.0);
    std::vector<EpisodeTrace> solo{trace("F0-t0", 0.6)};
    CHECK_THROWS_AS((void)axis_S(ptrs(solo), b), NoData);
}

TEST_CASE("embodiment examples") {
    auto b = aai::testing::small_battery();
    auto real = trace("F0-t0", 0.9);
    real.exposure_hours = 200.0;
    real.incident_counts = IncidentCounts{};
    auto sim = trace("F0-t0", 0.9);
    sim.sim_flag = true;
    std::vector<EpisodeTrace> ts{real, sim};
    CHECK(*axis_E(ptrs(ts), b).raw == doctest::Approx(1.0));
    ts[0].incident_counts->minor = 1;
    const auto r = axis_E(ptrs(ts), b);
    CHECK(r.rates[1] == doctest::Approx(0.5));
    CHECK(r.ss == doctest::Approx(0.5));
    ts[0].incident_counts->critical = 1;
    CHECK(*axis_E(ptrs(ts), b).raw == 0.0);
    std::vector<EpisodeTrace> no_sim{real};
    CHECK_FALSE(axis_E(ptrs(no_sim), b).raw.has_value());
}

TEST_CASE("recovery autonomy") {
    auto b = aai::testing::small_battery();
    auto t = trace("F0-t0", 0.9);
    t.recovered_faults = 7;
    t.total_faults = 10;
    std::vector<EpisodeTrace> ts{t};
    CHECK(*robotics_diagnostics(ptrs(ts), b).ra == doctest::Approx(0.7));
    ts[0].recovered_faults = 0;
    ts[0].total_faults = 0;
    CHECK_FALSE(robotics_diagnostics(ptrs(ts), b).ra.has_value());
}

TEST_CASE("world-model Brier skill") {
    auto b = aai::testing::small_battery();
    std::vector<EpisodeTrace> ts{trace("F0-t0", 0.5), trace("F0-t1", 0.5)};
    ts[0].stated_prob = 1.0;
    ts[0].truth = 1;
    ts[1].stated_prob = 0.0;
    ts[1].truth = 0;
    CHECK(axis_W(ptrs(ts), b).raw == 1.0);
    ts[0].stated_prob = 0.5;
    ts[1].stated_prob = 0.5;
    CHECK(axis_W(ptrs(ts), b).raw == 0.0);
    ts[0].stated_prob = 0.0;
    CHECK(axis_W(ptrs(ts), b).raw == 0.0);
    b.tasks[0].reference_prob.reset();
    CHECK_THROWS_AS((void)axis_W(ptrs(ts), b), Error);
}

TEST_CASE("economic throughput ratio") {
    std::vector<EpisodeTrace> ts;
    for (int i = 0; i <= 4; ++i) {
        auto t = trace("F0-t0", i < 4 ? 0.9 : 0.1);
        t.timestamp = 900.0 * i;
        ts.push_back(t);
    }
    CHECK(axis_dollar(ptrs(ts), 8.0, 0.6).raw == doctest::Approx(0.5));
    CHECK(axis_dollar(ptrs(ts), 16.0, 0.6).raw == doctest::Approx(0.25));
    for (auto& t : ts) t.quality = 0.0;
    CHECK(axis_dollar(ptrs(ts), 8.0, 0.6).raw == 0.0);
}

TEST_CASE("vector from scores marks other axes as no data") {
    const auto v = vector_from_scores({{Axis::A, 0.5}});
    CHECK(v.score(Axis::A) == 0.5);
    CHECK_FALSE(v.score(Axis::G).has_value());
}

}
