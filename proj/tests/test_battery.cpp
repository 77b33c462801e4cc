#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "aai/battery.hpp"
#include "aai/error.hpp"
#include "helpers.hpp"

using namespace aai;
using aai::testing::error_of;
using aai::testing::Gen;

TEST_SUITE("battery") {

TEST_CASE("load of two families with six tasks each") {
    const auto b = load_battery(battery_to_json(aai::testing::small_battery(6)));
    CHECK(b.tasks.size() == 12);
    CHECK(b.families.size() == 2);
}

TEST_CASE("family below the minimum size is rejected") {
    auto j = battery_to_json(aai::testing::small_battery(5));
    auto& fam = j["families"][0]["tasks"];
    const std::string dropped = fam.back().get<std::string>();
    fam.erase(fam.size() - 1);
    auto& tasks = j["tasks"];
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i]["id"] == dropped) {
            tasks.erase(i);
            break;
        }
    CHECK(error_of([&] { (void)load_battery(j); }).find("family too small") != std::string::npos);
}

TEST_CASE("degenerate anchor is rejected") {
    auto j = battery_to_json(aai::testing::small_battery());
    j["anchors"]["A"] = {0.5, 0.5};
    CHECK(error_of([&] { (void)load_battery(j); }).find("degenerate anchor") != std::string::npos);
}

TEST_CASE("serialize and reload is lossless") {
    const auto b = aai::testing::small_battery();
    const auto j1 = battery_to_json(b);
    const auto j2 = battery_to_json(load_battery(j1));
    CHECK(j1 == j2);
}

TEST_CASE("weight presets load the annex numbers") {
    const auto sw = preset_weights("software");
    CHECK(sw.at(Axis::P) == 1.25);
    CHECK(sw.at(Axis::M) == 1.25);
    CHECK(sw.at(Axis::T) == 1.25);
    CHECK(sw.at(Axis::E) == 0.0);
    const auto rb = preset_weights("robotics");
    CHECK(rb.at(Axis::E) == 1.25);
    CHECK(rb.at(Axis::P) == 1.1);
    CHECK(rb.at(Axis::T) == 1.1);
    CHECK(rb.at(Axis::R) == 1.5);
    CHECK_THROWS_AS((void)preset_weights("nope"), Error);
}

TEST_CASE("admissibility items") {
    const auto b = aai::testing::small_battery();
    std::vector<EpisodeTrace> traces{aai::testing::trace("F0-t0", 0.5, "none"),
                                     aai::testing::trace("F0-t1", 0.5, "mild")};
    auto item = [](const AdmissibilityReport& r, const std::string& key) {
        return std::find_if(r.items.begin(), r.items.end(), [&](const auto& i) { return i.key == key; })->pass;
    };
    SUBCASE("traces covering all drift tags pass (c)") {
        const auto r = validate_admissibility(b, traces);
        CHECK(item(r, "c"));
        CHECK(r.pass());
    }
    SUBCASE("missing drift magnitude fails (c)") {
        traces.pop_back();
        CHECK_FALSE(item(validate_admissibility(b, traces), "c"));
    }
    SUBCASE("undisclosed seed fails (e)") {
        traces[0].seed_id = "secret";
        CHECK_FALSE(item(validate_admissibility(b, traces), "e"));
    }
    SUBCASE("two schema hashes fail (d)") {
        traces[0].schema_hash = "aaa";
        traces[1].schema_hash = "bbb";
        CHECK_FALSE(item(validate_admissibility(b, traces), "d"));
    }
}

TEST_CASE("family aggregate examples") {
    const auto b = aai::testing::small_battery();
    std::vector<EpisodeTrace> ts{aai::testing::trace("F0-t0", 0.8), aai::testing::trace("F0-t1", 0.6)};
    auto r = refs(ts);
    auto agg = family_aggregate(r, b);
    SUBCASE("mean 0.7 covered at tau 0.7") {
        Battery b7 = b;
        b7.families[0].threshold = 0.7;
        agg = family_aggregate(r, b7);
        CHECK(agg[0].mean_quality == doctest::Approx(0.7));
        CHECK(agg[0].covered);
        CHECK_FALSE(agg[1].has_data);
    }
    SUBCASE("equal to threshold is covered") {
        std::vector<EpisodeTrace> eq{aai::testing::trace("F0-t0", 0.5), aai::testing::trace("F0-t1", 0.5)};
        auto re = refs(eq);
        CHECK(family_aggregate(re, b)[0].covered);
    }
    SUBCASE("(0.5, 0.5) at tau 0.6 is not covered") {
        Battery b6 = b;
        b6.families[0].threshold = 0.6;
        std::vector<EpisodeTrace> eq{aai::testing::trace("F0-t0", 0.5), aai::testing::trace("F0-t1", 0.5)};
        auto re = refs(eq);
        CHECK_FALSE(family_aggregate(re, b6)[0].covered);
    }
}

TEST_CASE("family aggregate is permutation invariant") {
    const auto b = aai::testing::small_battery();
    Gen g(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<EpisodeTrace> ts;
        for (int i = 0; i < 20; ++i)
            ts.push_back(aai::testing::trace("F" + std::to_string(g.integer(0, 1)) + "-t" + std::to_string(g.integer(0, 4)),
                                             g.uniform()));
        auto r1 = refs(ts);
        auto r2 = r1;
        std::reverse(r2.begin(), r2.end());
        const auto a1 = family_aggregate(r1, b);
        const auto a2 = family_aggregate(r2, b);
        for (std::size_t k = 0; k < a1.size(); ++k) {
            CHECK(a1[k].mean_quality == doctest::Approx(a2[k].mean_quality).epsilon(1e-12));
            CHECK(a1[k].covered == a2[k].covered);
        }
    }
}

TEST_CASE("resource ledger is nondecreasing from zero") {
    Gen g(5);
    const std::map<std::string, double> schema{{"tokens", 0.5}, {"calls", 2.0}};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<LedgerRecord> recs;
        for (int i = 0; i < 30; ++i) recs.push_back({g.uniform(0.01, 10.0), g.integer(0, 1) ? "tokens" : "calls", g.uniform(0, 5)});
        const ResourceLedger ledger(0.0, recs, schema);
        CHECK(ledger.cumulative(0.0) == 0.0);
        double prev = 0.0;
        for (double t = 0.0; t <= 10.5; t += 0.25) {
            const double r = ledger.cumulative(t);
            CHECK(r >= prev);
            prev = r;
        }
    }
}

TEST_CASE("trace ingestion reports locus and warns on unknown fields") {
    const auto dir = std::filesystem::temp_directory_path() / "aai_battery_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "traces.jsonl").string();
    {
        std::ofstream out(path);
        out << R"({"task_id":"F0-t0","seed_id":"s0","drift_tag":"none","quality":0.5,"uninterrupted_actions":1,"plan_depth":1,"cost":0,"timestamp":0,"human_interventions":0,"concurrency":1,"comm_tokens":0,"verified_actions":0,"mystery":1})"
            << "\n{not json}\n";
    }
    IngestWarnings w;
    const auto msg = error_of([&] { (void)load_traces(path, &w); });
    CHECK(msg.find("traces.jsonl:2") != std::string::npos);
    CHECK(w.messages.size() == 1);
}

TEST_CASE("stated probability without truth is rejected") {
    auto j = trace_to_json(aai::testing::trace("F0-t0", 0.5));
    j["stated_prob"] = 0.3;
    CHECK(error_of([&] { (void)parse_trace(j, "traces.jsonl:4"); }).find("traces.jsonl:4") != std::string::npos);
}

}
