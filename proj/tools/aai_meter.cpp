// aai-meter: command-line front end for the measurement engine.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aai/composite.hpp"
#include "aai/error.hpp"
#include "aai/report.hpp"
#include "aai/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;

struct Global {
    std::string config;
    std::string traces;
    std::string events;
    std::string checkpoints;
    std::string evidence;
    std::string out = "aai-out";
    std::string preset;
    std::uint64_t seed = 0;
};

aai::report::InputPaths paths(const Global& g) {
    if (g.config.empty()) throw aai::Error("cli", "--config is required");
    if (g.traces.empty()) throw aai::Error("cli", "--traces is required");
    aai::report::InputPaths p{g.config, g.traces, std::nullopt, std::nullopt, std::nullopt};
    if (!g.events.empty()) p.events = g.events;
    if (!g.checkpoints.empty()) p.checkpoints = g.checkpoints;
    if (!g.evidence.empty()) p.evidence = g.evidence;
    return p;
}

aai::report::Options options(const Global& g) {
    aai::report::Options o;
    o.seed = g.seed;
    if (!g.preset.empty()) o.preset = g.preset;
    return o;
}

void write_json(const std::string& dir, const std::string& name, const aai::json& j) {
    std::filesystem::create_directories(dir);
    const auto p = std::filesystem::path(dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw aai::Error("cli", "cannot write " + p.string());
    out << aai::report::canonical(j);
}

std::map<aai::Axis, double> parse_scores(const std::string& text) {
    std::map<aai::Axis, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw aai::Error("cli", "score '" + item + "' is not AXIS=value");
        try {
            out[aai::parse_axis(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
        } catch (const std::invalid_argument&) {
            throw aai::Error("cli", "score '" + item + "' has a non-numeric value");
        }
    }
    return out;
}

int run_stage(const std::string& stage, const Global& g, int require_level, const std::string& scores) {
    using namespace aai::report;
    if (stage == "index" && !scores.empty()) {
        const auto v = aai::axes::vector_from_scores(parse_scores(scores));
        const std::string preset = g.preset.empty() ? "default" : g.preset;
        aai::json j;
        for (auto p : {aai::composite::ZeroPolicy::strict, aai::composite::ZeroPolicy::floor})
            j[aai::composite::policy_name(p)] =
                aai::composite::composite_to_json(aai::composite::compose(v, aai::preset_weights(preset), preset, p));
        write_json(g.out, "composite.json", j);
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }

    const Corpus corpus = load_corpus(paths(g));
    for (const auto& w : corpus.warnings.messages) std::cerr << "warning: " << w << "\n";
    if (stage == "validate") {
        bool pass = false;
        const auto j = validation_json(corpus, &pass);
        write_json(g.out, "validation.json", j);
        std::cout << "admissibility: " << (pass ? "pass" : "fail") << "\n";
        for (const auto& item : j.at("items"))
            std::cout << "  (" << item.at("item").get<std::string>() << ") " << (item.at("pass").get<bool>() ? "ok  " : "FAIL")
                      << " " << item.at("message").get<std::string>() << "\n";
        return pass ? kExitOk : kExitValidation;
    }

    Options opt = options(g);
    opt.dynamics = stage == "dynamics" || stage == "gates" || stage == "report";
    opt.gates = stage == "gates" || stage == "report";
    opt.frontier = stage == "frontier" || stage == "report";
    const Analysis a = analyze(corpus, opt);

    if (stage == "axes") {
        write_json(g.out, "axes.json", axes_json(a));
        for (const auto& ag : a.agents) {
            std::cout << ag.agent << " (runs=" << ag.runs << ")\n";
            for (const auto& [axis, s] : ag.axes.axes)
                std::cout << "  " << aai::axis_key(axis) << " "
                          << (s.score ? aai::json(*s.score).dump() : "no data: " + s.reason) << "\n";
        }
    } else if (stage == "index") {
        write_json(g.out, "composite.json", composite_json(a, corpus));
        for (const auto& ag : a.agents)
            std::cout << ag.agent << " strict=" << ag.strict.index << " floor=" << ag.floor.index << "\n";
    } else if (stage == "dynamics") {
        write_json(g.out, "dynamics.json", dynamics_json(a));
        for (const auto& ag : a.agents)
            for (const auto& f : ag.dynamics)
                std::cout << ag.agent << " " << f.family << " kappa=" << f.kappa.theil_sen << "\n";
    } else if (stage == "frontier") {
        write_json(g.out, "frontier.json", frontier_json(a));
        for (const auto& ag : a.agents)
            if (ag.delegability_summary)
                std::cout << ag.agent << " FD=" << ag.delegability_summary->fd << " AUF=" << ag.delegability_summary->auf
                          << "\n";
            else
                std::cout << ag.agent << " frontier unavailable: " << ag.frontier_note << "\n";
    } else if (stage == "gates") {
        write_json(g.out, "gates.json", gates_json(a));
        bool below = false;
        for (const auto& ag : a.agents) {
            const int level = ag.level ? ag.level->level : -1;
            std::cout << ag.agent << " " << (level < 0 ? "unrated" : "AAI-" + std::to_string(level)) << "\n";
            if (level < require_level) below = true;
        }
        if (below) {
            std::cerr << "level below required AAI-" << require_level << "\n";
            return kExitValidation;
        }
    } else if (stage == "report") {
        const auto bundle = bundle_json(a, corpus, opt);
        for (const auto& note : write_report(bundle, a, g.out)) std::cout << "note: " << note << "\n";
        std::cout << "bundle " << bundle.at("bundle_sha256").get<std::string>() << " -> " << g.out << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aai-meter: autonomy and self-improvement measurement engine"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--config", g.config, "Battery and engine configuration (JSON)");
    app.add_option("--traces", g.traces, "Episode traces (JSONL)");
    app.add_option("--events", g.events, "Revision events (JSONL)");
    app.add_option("--checkpoints", g.checkpoints, "Capability checkpoints (JSONL)");
    app.add_option("--evidence", g.evidence, "Gate evidence document (JSON)");
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--preset", g.preset, "Weight preset")->check(CLI::IsMember({"default", "software", "robotics"}));

    int require_level = -1;
    std::string scores;
    std::string stage;
    const std::pair<const char*, const char*> stages[] = {
        {"validate", "Check battery admissibility and trace schema"},
        {"axes", "Per-axis raw and normalized scores with CIs"},
        {"index", "Composite index under both zero policies"},
        {"dynamics", "Self-improvement rate, curvature and Lambda per family"},
        {"gates", "Closure checks and AAI level assignment"},
        {"frontier", "Quality and delegability frontiers"},
        {"report", "Full bundle with tables, plots and checksums"},
    };
    for (const auto& [name, help] : stages) {
        auto* sub = app.add_subcommand(name, help);
        sub->callback([&stage, name] { stage = name; });
        if (std::string(name) == "gates")
            sub->add_option("--require-level", require_level, "Exit 2 unless every agent reaches this level");
        if (std::string(name) == "index")
            sub->add_option("--scores", scores, "Normalized scores as AXIS=value,... instead of traces");
    }

    auto* sim = app.add_subcommand("simulate", "Synthetic corpora and progression runs");
    sim->require_subcommand(1);
    aai::simulate::ArchetypeOptions arch;
    auto* archetypes = sim->add_subcommand("archetypes", "Four-archetype trace corpus");
    archetypes->add_option("--runs", arch.runs, "Pseudo-runs per archetype")->check(CLI::PositiveNumber);
    archetypes->add_option("--noise", arch.noise, "Half-width of target perturbations")->check(CLI::NonNegativeNumber);
    archetypes->callback([&stage] { stage = "simulate-archetypes"; });
    aai::simulate::ProgressionSpec prog = aai::simulate::default_progression();
    auto* progression = sim->add_subcommand("progression", "Integrate the AAI-3 to AAI-5 progression");
    progression->add_option("--a", prog.a, "Rate-escape gain");
    progression->add_option("--beta", prog.beta, "Rate-escape exponent in (0,1)");
    progression->add_option("--budget", prog.budget, "Resource budget");
    progression->add_option("--max-step", prog.max_step, "Largest integration step");
    progression->callback([&stage] { stage = "simulate-progression"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (stage == "simulate-archetypes") {
            arch.seed = g.seed;
            const auto specs = aai::simulate::default_archetypes();
            const auto corpus = aai::simulate::simulate_archetypes(specs, arch);
            aai::simulate::write_corpus(corpus, specs, g.out);
            std::cout << "wrote " << corpus.traces.size() << " traces, " << corpus.events.size() << " events, "
                      << corpus.checkpoints.size() << " checkpoints to " << g.out << "\n";
            return kExitOk;
        }
        if (stage == "simulate-progression") {
            const auto r = aai::simulate::simulate_progression(prog);
            write_json(g.out, "progression.json", aai::simulate::progression_to_json(r));
            std::ofstream(std::filesystem::path(g.out) / "progression.csv", std::ios::binary)
                << aai::simulate::progression_csv(r);
            std::cout << aai::simulate::progression_to_json(r).dump(2) << "\n";
            return kExitOk;
        }
        return run_stage(stage, g, require_level, scores);
    } catch (const aai::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
