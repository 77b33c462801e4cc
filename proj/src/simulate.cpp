#include "aai/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "aai/error.hpp"
#include "aai/gates.hpp"
#include "aai/stats.hpp"

namespace aai::simulate {

namespace {

constexpr const char* kModule = "simulate";
constexpr std::array<const char*, 3> kDrifts{"none", "mild", "strong"};
constexpr double kCovSuccess = 0.8, kCovFail = 0.45, kUncovSuccess = 0.6, kUncovFail = 0.05;
constexpr int kUncoveredSuccessSlots = 3;
constexpr std::array<double, 5> kLags{0.0, 1.0, 7.0, 14.0, 30.0};

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Symmetric uniform perturbation truncated so the target stays in [0,1].
double perturb(double x, double noise, std::mt19937_64& rng) {
    const double u = 2.0 * unit(rng) - 1.0;
    const double hw = std::min({noise, x, 1.0 - x});
    return x + u * hw;
}

// Error diffusion: integer count whose running total tracks the running sum of wants.
long diffuse(double& carry, double want) {
    carry += want;
    const auto k = static_cast<long>(std::floor(carry + 0.5));
    carry -= static_cast<double>(k);
    return k;
}

// Integers summing to total, spread as evenly as possible over n slots.
std::vector<long> spread(long total, std::size_t n) {
    std::vector<long> out(n, total / static_cast<long>(n));
    const auto rem = static_cast<std::size_t>(total % static_cast<long>(n));
    for (std::size_t i = 0; i < rem; ++i) ++out[i];
    return out;
}

std::string task_id(int f, int k) { return "F" + std::to_string(f) + "-t" + std::to_string(k); }

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(kModule, "cannot write " + p.string());
    out << text;
}

}  // namespace

std::vector<ArchetypeSpec> default_archetypes() {
    using enum Axis;
    auto row = [](double a, double g, double p, double m, double t, double r, double s, double w, double d) {
        return std::map<Axis, double>{{A, a}, {G, g}, {P, p}, {M, m}, {T, t}, {R, r}, {S, s}, {W, w}, {Dollar, d}};
    };
    return {
        {"rpa", row(0.98, 0.06, 0.03, 0.12, 0.12, 0.0, 0.0, 0.32, 0.41), 0.13, 0.0, std::nullopt, 1, false, 0},
        {"agentic-llm", row(0.64, 0.33, 0.47, 0.43, 0.59, 0.0, 0.18, 0.58, 0.37), 0.40, 0.0, std::nullopt, 6, false, 1},
        {"self-improving", row(0.68, 0.36, 0.54, 0.51, 0.63, 0.27, 0.23, 0.61, 0.42), 0.47, 0.007,
         std::pair{0.004, 0.010}, 6, true, 2},
        {"orchestrator", row(0.73, 0.41, 0.66, 0.60, 0.76, 0.38, 0.46, 0.65, 0.48), 0.59, 0.012,
         std::pair{0.009, 0.015}, 8, true, 2},
    };
}

Battery archetype_battery(const ArchetypeOptions& opt) {
    if (opt.families < 2 || opt.tasks_per_family < 5) throw Error(kModule, "archetype battery needs >= 2 families of >= 5 tasks");
    Battery b;
    for (int f = 0; f < opt.families; ++f) {
        FamilySpec fs;
        fs.name = "F" + std::to_string(f);
        fs.threshold = 0.4;
        fs.human_threshold = 0.7;
        for (int k = 0; k < opt.tasks_per_family; ++k) {
            TaskSpec t;
            t.id = task_id(f, k);
            t.family = fs.name;
            t.q_star = 0.6;
            t.required_tools = {"tool" + std::to_string((f * opt.tasks_per_family + k) % 10)};
            t.reference_prob = 0.5;
            fs.tasks.push_back(t.id);
            b.tasks.push_back(std::move(t));
        }
        b.families.push_back(std::move(fs));
    }
    b.drift_catalog = {{"none", 0.0}, {"mild", 0.1}, {"strong", 0.3}};
    b.resource_schema = {{"tokens", 1.0}, {"tool_calls", 1.0}};
    for (Axis a : kAllAxes) b.anchors[a] = Anchor{0.0, 1.0};
    b.weights = preset_weights("default");
    b.horizon_cap = 100;
    b.depth_anchor = 100;
    b.size_prior_max = 10.0;
    b.revision_scale = 0.1;
    b.target_quality = 0.6;
    b.proper_scoring_declared = true;
    for (const auto& s : default_archetypes())
        for (int r = 0; r < opt.runs; ++r) b.seed_manifest.push_back(s.name + "-r" + std::to_string(r));
    return b;
}

SimulatedCorpus simulate_archetypes(const std::vector<ArchetypeSpec>& specs, const ArchetypeOptions& opt) {
    if (opt.runs < 1) throw Error(kModule, "runs must be >= 1");
    if (!(opt.noise >= 0.0)) throw Error(kModule, "noise must be >= 0");
    Battery b = archetype_battery(opt);
    b.seed_manifest.clear();
    for (const auto& s : specs)
        for (int r = 0; r < opt.runs; ++r) b.seed_manifest.push_back(s.name + "-r" + std::to_string(r));
    const std::string hash = schema_hash(b.resource_schema);

    SimulatedCorpus out;
    out.config = {{"battery", battery_to_json(b)},
                  {"gates", {{"kappa_star", opt.kappa_star}}},
                  {"frontier", {{"h_max", opt.h_max}, {"q_star", 0.4}}},
                  {"bootstrap", {{"replicates", 1000}, {"level", 0.95}}}};
    out.evidence = {{"agents", json::object()}};

    const int F = opt.families, K = opt.tasks_per_family;
    const int reserved = F - 1;
    const std::size_t n_main = static_cast<std::size_t>(F) * static_cast<std::size_t>(K);
    const std::size_t n = n_main + 1;

    for (std::size_t ai = 0; ai < specs.size(); ++ai) {
        const auto& spec = specs[ai];
        for (const auto& [a, x] : spec.targets)
            if (!(x >= 0.0 && x <= 1.0)) throw Error(kModule, "target outside [0,1] for " + spec.name);
        if (spec.tool_categories < 1 || spec.tool_categories > 10) throw Error(kModule, "tool categories must be 1..10");
        std::mt19937_64 rng(stats::replicate_seed(opt.seed, ai));
        double g_carry = 0.0, s_carry = 0.0;
        const double cov = spec.tool_categories / 10.0;
        const double size = std::log1p(spec.tool_categories) / std::log1p(b.size_prior_max);

        for (int r = 0; r < opt.runs; ++r) {
            std::map<Axis, double> x;
            for (const auto& [a, t] : spec.targets) x[a] = perturb(t, opt.noise, rng);
            const std::string run = spec.name + "-r" + std::to_string(r);
            const std::string policy = spec.name + "-p" + std::to_string(r % 4);

            const int covered = static_cast<int>(std::clamp<long>(diffuse(g_carry, x[Axis::G] * F), 0, F - 1));
            const long capacity = static_cast<long>(covered) * K + static_cast<long>(F - 1 - covered) * kUncoveredSuccessSlots;
            const double succ = std::pow(x[Axis::T], 3.0) / (cov * size);
            const long successes = std::clamp<long>(diffuse(s_carry, succ * static_cast<double>(n)), 0, capacity);

            std::vector<bool> success(n_main, false);
            {
                std::vector<std::size_t> slots;
                for (int f = 0; f < F - 1; ++f)
                    for (int k = 0; k < K; ++k)
                        if (f < covered || (k >= 1 && k <= kUncoveredSuccessSlots))
                            slots.push_back(static_cast<std::size_t>(f * K + k));
                for (long i = 0; i < successes; ++i) {
                    const auto pos = static_cast<std::size_t>((static_cast<double>(i) + 0.5) *
                                                              static_cast<double>(slots.size()) / static_cast<double>(successes));
                    success[slots[pos]] = true;
                }
            }

            const auto a_vals = spread(std::llround(x[Axis::A] * b.horizon_cap * static_cast<double>(n)), n);
            const auto d_vals = spread(std::llround(x[Axis::P] * b.depth_anchor * static_cast<double>(n)), n);
            const double wd = 0.5 * std::sqrt(1.0 - x[Axis::W]);
            const double cost = x[Axis::Dollar] > 0.0
                                    ? static_cast<double>(successes) / (x[Axis::Dollar] * static_cast<double>(n))
                                    : 1.0;

            auto base_trace = [&](std::size_t i) {
                EpisodeTrace t;
                t.seed_id = run;
                t.agent_id = spec.name;
                t.run_id = run;
                t.policy_id = policy;
                t.schema_hash = hash;
                t.human_interventions = r % 4;
                t.uninterrupted_actions = a_vals[i];
                t.plan_depth = d_vals[i];
                t.cost = cost;
                t.timestamp = 36.0 * static_cast<double>(i);
                t.verified_actions = 1;
                const int y = static_cast<int>(i % 2);
                t.truth = y;
                t.stated_prob = y ? 1.0 - wd : wd;
                return t;
            };

            long k_success = 0;
            for (std::size_t i = 0; i < n_main; ++i) {
                const int f = static_cast<int>(i) / K, k = static_cast<int>(i) % K;
                EpisodeTrace t = base_trace(i);
                t.task_id = task_id(f, k);
                const bool cov_f = f < covered;
                if (success[i]) {
                    t.quality = cov_f ? kCovSuccess : kUncovSuccess;
                    t.drift_tag = kDrifts[static_cast<std::size_t>(k_success % 3)];
                    t.tool_categories_used = {"tool" + std::to_string((k_success / 3) % spec.tool_categories)};
                    ++k_success;
                } else {
                    t.quality = cov_f ? kCovFail : kUncovFail;
                    t.drift_tag = kDrifts[i % 3];
                }
                out.traces.push_back(std::move(t));
            }
            {
                EpisodeTrace t = base_trace(n_main);
                t.task_id = task_id(reserved, 0);
                t.drift_tag = "none";
                t.concurrency = 2;
                t.quality = kUncovFail + x[Axis::S] * (1.0 - kUncovFail);
                out.traces.push_back(std::move(t));
            }

            const double m = std::max(x[Axis::M], 1e-6);
            const double lambda = -b.lambda_max * std::log(m);
            for (int k = 0; k < K; ++k)
                for (double lag : kLags) {
                    EpisodeTrace t;
                    t.task_id = task_id(0, k);
                    t.seed_id = run;
                    t.agent_id = spec.name;
                    t.run_id = run;
                    t.policy_id = policy;
                    t.schema_hash = hash;
                    t.drift_tag = "none";
                    t.lag_days = lag;
                    t.quality = 0.9 * std::exp(-lambda * lag);
                    t.recall_at_k = x[Axis::M];
                    out.traces.push_back(std::move(t));
                }

            if (x[Axis::R] > 0.0) {
                RevisionEvent e;
                const double dc = x[Axis::R] * b.revision_scale;
                e.event_id = run + "-e0";
                e.window_id = "w0";
                e.agent_id = spec.name;
                e.run_id = run;
                e.c_rev_pre = 0.5;
                e.c_rev_post = 0.5 + dc;
                e.c_ctrl_pre = 0.5;
                e.c_ctrl_post = 0.5;
                e.stage_autonomy = {1.0, 1.0, 1.0};
                e.ablation_result = 0.5;
                e.change_kind = "tool-family";
                for (int h = 0; h < 10; ++h) e.holdout_did.push_back(dc + (h % 2 ? 0.005 : -0.005));
                out.events.push_back(std::move(e));
            }
        }

        for (int fam = 0; fam < 2; ++fam)
            for (int j = 0; j < 15; ++j) {
                Checkpoint c;
                c.family = "F" + std::to_string(fam);
                c.agent_id = spec.name;
                c.t = j;
                c.R = j;
                c.C = spec.index + spec.kappa * j + 0.0005 * (2.0 * unit(rng) - 1.0);
                out.checkpoints.push_back(c);
            }

        json ref = {{"index", spec.index}, {"kappa", spec.kappa}, {"expected_level", spec.expected_level}};
        if (spec.kappa_ci) ref["kappa_ci"] = {spec.kappa_ci->first, spec.kappa_ci->second};
        for (const auto& [a, t] : spec.targets) ref["axes"][axis_key(a)] = t;
        out.config["reference"][spec.name] = ref;

        json ev = json::object();
        if (spec.maintenance_evidence) {
            json days = json::array();
            for (int d = 0; d < 7; ++d) days.push_back({{"day", d}, {"index", 0.95 * spec.index}, {"human_patch", false}});
            ev["maintenance"] = {{"baseline", spec.index}, {"days", days}};
        }
        out.evidence["agents"][spec.name] = ev;
    }
    return out;
}

void write_corpus(const SimulatedCorpus& corpus, const std::vector<ArchetypeSpec>& specs, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path d(dir);
    write_text(d / "config.json", corpus.config.dump(2) + "\n");
    write_text(d / "evidence.json", corpus.evidence.dump(2) + "\n");
    std::ostringstream tr, ev, cp;
    for (const auto& t : corpus.traces) tr << trace_to_json(t).dump() << "\n";
    for (const auto& e : corpus.events) ev << event_to_json(e).dump() << "\n";
    for (const auto& c : corpus.checkpoints) cp << checkpoint_to_json(c).dump() << "\n";
    write_text(d / "traces.jsonl", tr.str());
    write_text(d / "events.jsonl", ev.str());
    write_text(d / "checkpoints.jsonl", cp.str());
    std::ostringstream csv;
    csv << "agent,A,G,P,M,T,R,S,W,$,index,kappa,expected_level\n";
    for (const auto& s : specs) {
        csv << s.name;
        for (Axis a : {Axis::A, Axis::G, Axis::P, Axis::M, Axis::T, Axis::R, Axis::S, Axis::W, Axis::Dollar})
            csv << "," << s.targets.at(a);
        csv << "," << s.index << "," << s.kappa << "," << s.expected_level << "\n";
    }
    write_text(d / "expected.csv", csv.str());
}

ProgressionSpec default_progression() {
    ProgressionSpec s;
    const auto table = gates::default_table();
    s.axes0 = table.at(3);
    s.axes0[Axis::R] = 0.4;
    s.theta4 = table.at(4);
    s.theta4[Axis::P] = std::max(s.theta4[Axis::P], 0.9);
    s.theta4[Axis::S] = std::max(s.theta4[Axis::S], 0.7);
    s.theta5 = {{Axis::S, 0.9}, {Axis::W, 0.9}, {Axis::Dollar, 0.9}};
    for (const auto& [a, x] : s.axes0) {
        s.rho4[a] = 0.1;
        s.rho5[a] = 0.05;
    }
    s.margins0.assign(5, 0.0);
    s.mu.assign(5, 1.0);
    s.step = {dynamics::Link::surprisal, dynamics::StepMode::additive, 1.0, 2.0};
    return s;
}

namespace {

struct State {
    double k = 0.0;
    double y = 0.0;
};

struct Model {
    const ProgressionSpec& s;
    double m_floor;

    [[nodiscard]] double kappa(double k) const {
        const double capped = std::min(k, 1.0 - s.kbar_cap_eps);
        if (s.normalizer.kind == dynamics::Normalizer::Kind::michaelis_menten)
            return dynamics::normalize_rate_inverse(std::max(capped, 0.0), s.normalizer);
        return dynamics::normalize_rate_inverse(std::max(capped, 1e-12), s.normalizer);
    }
    [[nodiscard]] double dk(double k) const { return s.a * std::pow(std::max(1.0 - k, 0.0), s.beta); }
    [[nodiscard]] State rhs(const State& x) const { return {dk(x.k), m_floor * kappa(x.k)}; }

    [[nodiscard]] State rk4(const State& x, double h) const {
        auto add = [](const State& a, const State& b, double c) { return State{a.k + c * b.k, a.y + c * b.y}; };
        const State k1 = rhs(x);
        const State k2 = rhs(add(x, k1, h / 2));
        const State k3 = rhs(add(x, k2, h / 2));
        const State k4 = rhs(add(x, k3, h));
        State out{x.k + h / 6 * (k1.k + 2 * k2.k + 2 * k3.k + k4.k), x.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y)};
        out.k = std::min(out.k, 1.0);
        return out;
    }

    // Step doubling; returns accepted state and step taken, adapting h.
    State advance(const State& x, double& h, double limit, double& taken) const {
        for (;;) {
            const double step = std::min(h, limit);
            const State full = rk4(x, step);
            const State half = rk4(rk4(x, step / 2), step / 2);
            const double err = std::max(std::abs(full.k - half.k), std::abs(full.y - half.y) / std::max(1.0, std::abs(half.y)));
            if (err <= s.tol || step <= 1e-12) {
                taken = step;
                if (err < s.tol / 32) h = std::min(2 * h, s.max_step);
                return half;
            }
            h = step / 2;
        }
    }
};

double axis_at(const ProgressionSpec& s, Axis a, double R) {
    const double x0 = s.axes0.count(a) ? s.axes0.at(a) : 0.0;
    const double r4 = s.rho4.count(a) ? s.rho4.at(a) : 0.0;
    const double r5 = s.rho5.count(a) ? s.rho5.at(a) : 0.0;
    const double t4 = s.theta4.count(a) ? s.theta4.at(a) : 0.0;
    const double t5 = std::max(t4, s.theta5.count(a) ? s.theta5.at(a) : 0.0);
    double phase_start = 0.0, base = x0;
    if (x0 < t4) {
        if (r4 <= 0.0) return x0;
        const double hit = (t4 - x0) / r4;
        if (R <= hit) return x0 + r4 * R;
        phase_start = hit;
        base = t4;
    }
    if (base >= t5) return std::min(base, 1.0);
    return std::min({base + r5 * (R - phase_start), t5, 1.0});
}

void check_spec(const ProgressionSpec& s) {
    if (!(s.beta > 0.0 && s.beta < 1.0)) throw Error(kModule, "beta must lie strictly inside (0,1)");
    if (!(s.a > 0.0)) throw Error(kModule, "rate-escape a must be positive");
    if (!(s.r_min > 0.0)) throw Error(kModule, "r_min must be positive");
    if (!(s.kbar0 >= 0.0 && s.kbar0 < 1.0)) throw Error(kModule, "kbar0 must be in [0,1)");
    if (!(s.c0 > 0.0 && s.c0 < 1.0)) throw Error(kModule, "c0 must be in (0,1)");
    if (s.margins0.size() != s.mu.size()) throw Error(kModule, "margins0 and mu lengths differ");
    if (!(s.max_step > 0.0 && s.budget > 0.0 && s.tol > 0.0)) throw Error(kModule, "step, budget and tol must be positive");
    for (const auto& [a, v] : s.rho4)
        if (v < 0.0) throw Error(kModule, "negative responsiveness slope");
    for (const auto& [a, v] : s.rho5)
        if (v < 0.0) throw Error(kModule, "negative responsiveness slope");
}

double min_link_derivative(double c0, dynamics::Link l) {
    if (l == dynamics::Link::surprisal) return 1.0 / (1.0 - c0);
    return c0 <= 0.5 ? 4.0 : 1.0 / (c0 * (1.0 - c0));
}

}  // namespace

double rate_escape_closed_form(double a, double beta, double kbar0, double threshold) {
    if (!(beta > 0.0 && beta < 1.0)) throw Error(kModule, "beta must lie strictly inside (0,1)");
    return (std::pow(1.0 - kbar0, 1.0 - beta) - std::pow(1.0 - threshold, 1.0 - beta)) / (a * (1.0 - beta));
}

std::optional<double> rate_escape_hit(double a, double beta, double kbar0, double threshold, double budget,
                                      double max_step, double tol) {
    ProgressionSpec s;
    s.a = a;
    s.beta = beta;
    s.kbar0 = kbar0;
    s.max_step = max_step;
    s.tol = tol;
    s.budget = budget;
    check_spec(s);
    const Model model{s, 1.0};
    State x{kbar0, 0.0};
    if (x.k >= threshold) return 0.0;
    double R = 0.0, h = max_step;
    while (R < budget) {
        double taken = 0.0;
        const State next = model.advance(x, h, budget - R, taken);
        if (next.k >= threshold) {
            double lo = 0.0, hi = taken;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                (model.rk4(x, mid).k >= threshold ? hi : lo) = mid;
            }
            return R + hi;
        }
        x = next;
        R += taken;
    }
    return std::nullopt;
}

ProgressionResult simulate_progression(const ProgressionSpec& s) {
    check_spec(s);
    ProgressionResult res;
    res.m_floor = min_link_derivative(s.c0, s.link);
    res.innovation = std::min(1.0, s.alpha_tool * s.lambda_tool + s.alpha_rev * s.lambda_rev);
    const Model model{s, res.m_floor};
    std::optional<double> y_target;

    auto gate4 = [&](double R, const State& x) {
        for (const auto& [a, t] : s.theta4)
            if (axis_at(s, a, R) < t) return false;
        return res.m_floor * model.kappa(x.k) >= s.kappa_star;
    };
    auto gate5 = [&](double R, const State& x) {
        if (!y_target) return false;
        for (const auto& [a, t] : s.theta5)
            if (axis_at(s, a, R) < t) return false;
        std::size_t covered = 0;
        for (std::size_t i = 0; i < s.margins0.size(); ++i)
            if (s.margins0[i] + s.mu[i] * R >= s.zeta) ++covered;
        const double gamma = s.margins0.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(s.margins0.size());
        if (covered != s.margins0.size() || gamma < s.coverage_floor) return false;
        if (res.innovation < s.innovation_floor - 1e-12) return false;
        if (model.dk(x.k) < 0.0) return false;
        return x.y >= *y_target;
    };
    auto record = [&](double R, const State& x, bool g4, bool g5) {
        res.rows.push_back({R, x.k, model.kappa(x.k), dynamics::link_inverse(x.y, s.link), x.y, g4, g5});
    };
    auto locate = [&](const State& x, double R, double taken, auto pred) {
        double lo = 0.0, hi = taken;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (pred(R + mid, model.rk4(x, mid)) ? hi : lo) = mid;
        }
        return R + hi;
    };
    auto set_target = [&](const State& x4) {
        const double y4 = x4.y;
        if (s.step.mode == dynamics::StepMode::additive) y_target = y4 + 2.0 * s.step.delta;
        else y_target = s.step.multiplier * s.step.multiplier * y4;
        res.C4 = dynamics::link_inverse(y4, s.link);
    };

    State x{s.kbar0, dynamics::link(s.c0, s.link)};
    double R = 0.0, h = s.max_step;
    if (gate4(R, x)) {
        res.R4 = 0.0;
        set_target(x);
    }
    record(R, x, res.R4.has_value(), false);
    while (R < s.budget && !res.R5) {
        double taken = 0.0;
        const State next = model.advance(x, h, s.budget - R, taken);
        if (!res.R4 && gate4(R + taken, next)) {
            res.R4 = locate(x, R, taken, gate4);
            set_target(model.rk4(x, *res.R4 - R));
        }
        if (res.R4 && gate5(R + taken, next)) res.R5 = std::max(*res.R4, locate(x, R, taken, gate5));
        x = next;
        R += taken;
        record(R, x, res.R4 && R >= *res.R4, res.R5.has_value());
    }
    if (res.R4) res.T4 = *res.R4 / s.r_min;
    if (res.R5) res.T5 = *res.R5 / s.r_min;
    res.status = res.R4 && res.R5 ? "ok" : "budget exceeded";
    return res;
}

json progression_to_json(const ProgressionResult& r) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {{"R4", opt(r.R4)}, {"R5", opt(r.R5)}, {"T4", opt(r.T4)}, {"T5", opt(r.T5)}, {"C4", opt(r.C4)},
            {"innovation", r.innovation}, {"m_floor", r.m_floor}, {"status", r.status}, {"coupling", r.coupling},
            {"steps", r.rows.size()}};
}

std::string progression_csv(const ProgressionResult& r) {
    std::ostringstream out;
    out.precision(10);
    out << "R,kbar,kappa,C,y,aai4,aai5\n";
    for (const auto& row : r.rows)
        out << row.R << "," << row.kbar << "," << row.kappa << "," << row.C << "," << row.y << "," << row.aai4 << ","
            << row.aai5 << "\n";
    return out.str();
}

}  // namespace aai::simulate
