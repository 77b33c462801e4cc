#include <doctest.h>

#include <cmath>

#include "aai/axes.hpp"
#include "aai/error.hpp"
#include "aai/simulate.hpp"
#include "helpers.hpp"

using namespace aai;
using namespace aai::simulate;

TEST_SUITE("simulate") {

TEST_CASE("noise-free archetypes reproduce their targets") {
    const auto specs = default_archetypes();
    REQUIRE(specs.size() == 4);
    ArchetypeOptions opt;
    opt.runs = 1;
    opt.noise = 0.0;
    opt.seed = 3;
    const auto corpus = simulate_archetypes(specs, opt);
    const auto battery = load_battery(corpus.config);
    stats::ResamplePlan plan;
    for (const auto& spec : specs) {
        std::vector<const EpisodeTrace*> mine;
        for (const auto& t : corpus.traces)
            if (t.agent_id == spec.name) mine.push_back(&t);
        std::vector<RevisionEvent> events;
        for (const auto& e : corpus.events)
            if (e.agent_id == spec.name) events.push_back(e);
        const auto v = axes::compute_axes(mine, events, battery, plan, false);
        for (const auto& [axis, target] : spec.targets) {
            INFO(spec.name << " " << axis_key(axis));
            REQUIRE(v.score(axis).has_value());
            CHECK(std::abs(*v.score(axis) - target) <= 0.003);
        }
    }
}

TEST_CASE("simulated corpus is deterministic in the seed") {
    ArchetypeOptions opt;
    opt.runs = 1;
    opt.families = 10;
    opt.seed = 11;
    const auto a = simulate_archetypes(default_archetypes(), opt);
    const auto b = simulate_archetypes(default_archetypes(), opt);
    REQUIRE(a.traces.size() == b.traces.size());
    for (std::size_t i = 0; i < a.traces.size(); ++i)
        CHECK(trace_to_json(a.traces[i]) == trace_to_json(b.traces[i]));
    opt.seed = 12;
    const auto c = simulate_archetypes(default_archetypes(), opt);
    bool differs = false;
    for (std::size_t i = 0; i < a.traces.size() && !differs; ++i) differs = a.traces[i].quality != c.traces[i].quality;
    CHECK(differs);
}

TEST_CASE("rate escape") {
    const double closed = rate_escape_closed_form(1.0, 0.5, 0.0, 1.0 - 1e-6);
    CHECK(closed == doctest::Approx(1.998).epsilon(1e-12));
    const auto hit = rate_escape_hit(1.0, 0.5, 0.0, 1.0 - 1e-6, 10.0, 0.01);
    REQUIRE(hit.has_value());
    CHECK(std::abs(*hit - 1.998) < 1e-3);
    const auto slow = rate_escape_hit(1.0, 0.99, 0.0, 1.0 - 1e-6, 100.0, 0.01);
    REQUIRE(slow.has_value());
    CHECK(*slow > *hit);
    CHECK(*slow == doctest::Approx(rate_escape_closed_form(1.0, 0.99, 0.0, 1.0 - 1e-6)).epsilon(1e-6));
    CHECK_FALSE(rate_escape_hit(1.0, 0.5, 0.0, 1.0 - 1e-6, 1.0, 0.01).has_value());
    CHECK_THROWS_AS((void)rate_escape_hit(1.0, 1.0, 0.0, 0.9, 10.0, 0.01), Error);
}

TEST_CASE("halving the step leaves the hitting resource unchanged") {
    for (double beta : {0.2, 0.5, 0.8}) {
        const double closed = rate_escape_closed_form(2.0, beta, 0.1, 0.99);
        const auto coarse = rate_escape_hit(2.0, beta, 0.1, 0.99, 10.0, 0.02);
        const auto fine = rate_escape_hit(2.0, beta, 0.1, 0.99, 10.0, 0.01);
        REQUIRE(coarse.has_value());
        REQUIRE(fine.has_value());
        CHECK(std::abs(*coarse - closed) < 1e-6);
        CHECK(std::abs(*fine - closed) < 1e-6);
        CHECK(std::abs(*fine - *coarse) < 1e-6);
    }
}

TEST_CASE("default progression reaches both milestones") {
    const auto r = simulate_progression(default_progression());
    CHECK(r.status == "ok");
    REQUIRE(r.R4.has_value());
    REQUIRE(r.R5.has_value());
    CHECK(*r.R4 <= *r.R5);
    CHECK(*r.T4 == doctest::Approx(*r.R4));
    CHECK(r.innovation == doctest::Approx(0.8));
    CHECK(r.m_floor == doctest::Approx(2.5));
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        CHECK(r.rows[i].R >= r.rows[i - 1].R);
        CHECK(r.rows[i].kbar >= r.rows[i - 1].kbar);
    }
    const auto csv = progression_csv(r);
    CHECK(csv.rfind("R,kbar,kappa,C,y,aai4,aai5", 0) == 0);
}

TEST_CASE("zero axis growth blocks attainment") {
    auto spec = default_progression();
    for (auto& [a, rho] : spec.rho4) rho = 0.0;
    for (auto& [a, rho] : spec.rho5) rho = 0.0;
    const auto r = simulate_progression(spec);
    CHECK_FALSE(r.R4.has_value());
    CHECK_FALSE(r.R5.has_value());
    CHECK(r.status == "budget exceeded");
}

TEST_CASE("progression rejects invalid parameters") {
    auto spec = default_progression();
    spec.beta = 1.0;
    CHECK_THROWS_AS((void)simulate_progression(spec), Error);
    spec = default_progression();
    spec.r_min = 0.0;
    CHECK_THROWS_AS((void)simulate_progression(spec), Error);
}

}
