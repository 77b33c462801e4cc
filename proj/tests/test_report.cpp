#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <omp.h>

#include "aai/checksum.hpp"
#include "aai/report.hpp"
#include "aai/simulate.hpp"
#include "helpers.hpp"

using namespace aai;
using namespace aai::report;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("aai_report_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Corpus small_corpus(const fs::path& dir) {
    simulate::ArchetypeOptions opt;
    opt.runs = 2;
    opt.families = 10;
    opt.seed = 4;
    const auto specs = simulate::default_archetypes();
    simulate::write_corpus(simulate::simulate_archetypes(specs, opt), specs, dir.string());
    InputPaths p;
    p.config = (dir / "config.json").string();
    p.traces = (dir / "traces.jsonl").string();
    p.events = (dir / "events.jsonl").string();
    p.checkpoints = (dir / "checkpoints.jsonl").string();
    p.evidence = (dir / "evidence.json").string();
    return load_corpus(p);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("bundle is identical across thread counts and carries a valid checksum") {
    const auto dir = scratch("det");
    const auto corpus = small_corpus(dir);
    Options opt;
    opt.seed = 9;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(4);
    const auto first = bundle_json(analyze(corpus, opt), corpus, opt);
    omp_set_num_threads(1);
    const auto second = bundle_json(analyze(corpus, opt), corpus, opt);
    omp_set_num_threads(saved);
    CHECK(canonical(first) == canonical(second));

    auto stripped = first;
    stripped.erase("bundle_sha256");
    CHECK(first.at("bundle_sha256") == sha256_hex(canonical(stripped)));
    CHECK(first.at("inputs").at("traces").at("sha256") == sha256_file((dir / "traces.jsonl").string()));
    CHECK(first.at("engine").at("name") == kEngineName);

    const auto out = dir / "report";
    (void)write_report(first, analyze(corpus, opt), out.string());
    CHECK(slurp(out / "bundle.json") == canonical(first));
    CHECK(fs::exists(out / "tables" / "axes.csv"));
    CHECK(fs::exists(out / "plots" / "frontier.svg"));
    fs::remove_all(dir);
}

TEST_CASE("plots without data are skipped with a note") {
    const auto dir = scratch("skip");
    Corpus c;
    c.battery = aai::testing::small_battery();
    c.config = battery_to_json(c.battery);
    for (const auto& f : c.battery.families)
        for (const auto& t : f.tasks) c.traces.push_back(aai::testing::trace(t, 0.7));
    Options opt;
    opt.gates = false;
    const auto a = analyze(c, opt);
    const auto notes = write_report(bundle_json(a, c, opt), a, dir.string());
    const auto text = slurp(dir / "plots" / "NOTES.txt");
    CHECK(text.find("frontier plot skipped") != std::string::npos);
    CHECK(text.find("retention plot skipped") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "plots" / "retention.svg"));
    CHECK(notes.size() >= 2);
    fs::remove_all(dir);
}

TEST_CASE("svg output is well formed") {
    const auto svg = frontier_svg({{"a", {{0, 0.9}, {1, 0.5}}}, {"b", {{0, 0.95}, {1, 0.7}}}}, 0.65);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
}

}
