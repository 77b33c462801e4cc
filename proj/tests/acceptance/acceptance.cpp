// One PASS/FAIL line per acceptance criterion; exit status is the failure count.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "../helpers.hpp"
#include "aai/axes.hpp"
#include "aai/composite.hpp"
#include "aai/dynamics.hpp"
#include "aai/frontier.hpp"
#include "aai/gates.hpp"
#include "aai/report.hpp"
#include "aai/simulate.hpp"
#include "aai/stats.hpp"

using namespace aai;
using aai::testing::Gen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

struct Criterion {
    std::string name;
    double budget_s;  // runtime ceiling; 0 means none
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Outcome calibration() {
    Outcome o;
    const Anchor an{10.0, 30.0};
    o.require(axes::calibrate(10.0, an) == 0.0, "L -> 0");
    o.require(axes::calibrate(30.0, an) == 1.0, "U -> 1");
    o.require(axes::calibrate(20.0, an) == 0.5, "midpoint -> 0.5");
    o.require(axes::calibrate(10.0 - 2.0, an) == 0.0, "clip 10% below L");
    o.require(axes::calibrate(30.0 + 2.0, an) == 1.0, "clip 10% above U");
    if (o.pass) o.detail = "anchors exact, clipping at +-10%";
    return o;
}

Outcome composite_properties() {
    Outcome o;
    Gen g(1000);
    double worst_fd = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::map<Axis, double> s, w;
        for (Axis a : kAllAxes) {
            s[a] = g.uniform(0.05, 1.0);
            w[a] = g.uniform(0.1, 2.0);
        }
        const double c = composite::aai_index(s, w).value;
        auto scaled = w;
        const double k = g.uniform(0.1, 10.0);
        for (auto& [a, x] : scaled) x *= k;
        o.require(std::abs(composite::aai_index(s, scaled).value - c) <= 1e-12, "weight-scale invariance");
        const double v = g.uniform(0.01, 1.0);
        std::map<Axis, double> flat;
        for (Axis a : kAllAxes) flat[a] = v;
        o.require(std::abs(composite::aai_index(flat, w).value - v) <= 1e-15, "equal-value identity");
        auto zeroed = s;
        zeroed[kAllAxes[static_cast<std::size_t>(g.integer(0, 9))]] = 0.0;
        o.require(composite::aai_index(zeroed, w).value == 0.0, "zero annihilation");
        const auto grad = composite::index_gradient(s, w);
        for (Axis a : kAllAxes) {
            const double h = 1e-6;
            auto lo = s, hi = s;
            lo[a] -= h;
            hi[a] += h;
            if (hi[a] > 1.0) continue;
            const double fd = (composite::aai_index(hi, w).value - composite::aai_index(lo, w).value) / (2 * h);
            worst_fd = std::max(worst_fd, std::abs(*grad.at(a) - fd));
        }
    }
    o.require(worst_fd < 1e-6, "gradient vs finite difference " + fmt(worst_fd));
    if (o.pass) o.detail = "1000 vectors, max |grad - fd| = " + fmt(worst_fd);
    return o;
}

Outcome memory_anchors() {
    Outcome o;
    const double lmax = std::log(2.0) / 7.0;
    const double one = axes::retention_score(0.0, lmax);
    const double e1 = axes::retention_score(std::log(2.0) / 7.0, lmax);
    const double e12 = axes::retention_score(std::log(2.0) / 14.0, lmax);
    o.require(one == 1.0, "lambda 0 -> 1");
    o.require(std::abs(e1 - std::exp(-1.0)) <= 1e-9, "t_half = t_min -> e^-1");
    o.require(std::abs(e12 - std::exp(-0.5)) <= 1e-9, "t_half = 2 t_min -> e^-1/2");
    o.require(std::abs(e1 - 0.37) < 0.005 && std::abs(e12 - 0.61) < 0.005, "0.37 / 0.61 readings");
    o.detail = "1, " + fmt(e1) + ", " + fmt(e12);
    return o;
}

Outcome revision_example() {
    Outcome o;
    RevisionEvent e;
    e.event_id = "e";
    e.c_rev_pre = 0.78;
    e.c_rev_post = 0.84;
    e.c_ctrl_pre = 0.78;
    e.c_ctrl_post = 0.80;
    e.stage_autonomy = {0.9, 0.9, 0.9};
    const std::vector<RevisionEvent> ev{e};
    const auto r = axes::axis_R(ev, 0.10, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    o.require(std::abs(r.events.at(0).delta - 0.04) <= 1e-12, "delta C = 0.04");
    o.require(std::abs(r.events.at(0).contribution - 0.036) <= 1e-12, "contribution 0.036");
    o.require(std::abs(r.raw - 0.36) <= 1e-12, "R = 0.36");
    o.detail = "dC " + fmt(r.events.at(0).delta) + ", contribution " + fmt(r.events.at(0).contribution) + ", R " +
               fmt(r.raw);
    return o;
}

Outcome step_operators() {
    using namespace dynamics;
    Outcome o;
    const double add = step_operator(0.5, {Link::surprisal, StepMode::additive, 1.0, 2.0});
    const double mul = step_operator(0.5, {Link::surprisal, StepMode::multiplicative, 1.0, std::exp(1.0)});
    o.require(add >= 0.816 - 1e-3, "additive >= 0.816");
    o.require(std::abs(mul - 0.848) <= 1e-3, "multiplicative ~ 0.848");
    Gen g(5);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double c = g.uniform(0.01, 0.99), A = g.uniform(1.01, 10.0);
        const double next = step_operator(c, {Link::surprisal, StepMode::additive, std::log(A), 2.0});
        worst = std::max(worst, std::abs((1.0 - next) - (1.0 - c) / A));
    }
    o.require(worst <= 1e-12, "shortfall identity");
    o.detail = "additive " + fmt(add) + ", multiplicative " + fmt(mul) + ", identity err " + fmt(worst);
    return o;
}

Outcome rate_escape() {
    Outcome o;
    const auto hit = simulate::rate_escape_hit(1.0, 0.5, 0.0, 1.0 - 1e-6, 10.0, 0.01);
    const double closed = simulate::rate_escape_closed_form(1.0, 0.5, 0.0, 1.0 - 1e-6);
    o.require(hit.has_value(), "threshold reached");
    if (!hit) return o;
    o.require(std::abs(*hit - closed) <= 1e-3, "agrees with closed form");
    o.require(*hit <= 2.0, "threshold reached by R = 2");
    auto spec = simulate::default_progression();
    const auto coarse = simulate::simulate_progression(spec);
    spec.max_step /= 2;
    const auto fine = simulate::simulate_progression(spec);
    o.require(coarse.R4 && fine.R4, "R4 attained");
    if (!coarse.R4 || !fine.R4) return o;
    const double rel = std::abs(*fine.R4 - *coarse.R4) / *coarse.R4;
    o.require(rel < 1e-3, "step halving changes R4 by " + fmt(rel));
    o.detail = "R = " + fmt(*hit) + " (closed " + fmt(closed) + "), halving rel change " + fmt(rel);
    return o;
}

Outcome progression() {
    Outcome o;
    const auto spec = simulate::default_progression();
    const auto r = simulate::simulate_progression(spec);
    o.require(r.R4 && r.R5, "finite R4 and R5");
    if (!o.pass) return o;
    o.require(*r.R4 <= *r.R5, "R4 <= R5");
    std::size_t blocked = 0;
    for (const auto& [axis, rho] : spec.rho4) {
        auto zero = spec;
        zero.rho4[axis] = 0.0;
        if (spec.rho5.count(axis)) zero.rho5[axis] = 0.0;
        const auto z = simulate::simulate_progression(zero);
        if (!z.R4 && z.status == "budget exceeded") ++blocked;
        else o.require(false, std::string("rho_") + axis_key(axis) + " = 0 still attains AAI-4");
    }
    o.detail = "R4 " + fmt(*r.R4) + ", R5 " + fmt(*r.R5) + ", " + std::to_string(blocked) + "/" +
               std::to_string(spec.rho4.size()) + " zero-rho specs blocked";
    return o;
}

double brute_theil_sen(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> s;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (x[j] != x[i]) s.push_back((y[j] - y[i]) / (x[j] - x[i]));
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    return n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

std::vector<double> brute_isotonic(const std::vector<double>& v, const std::vector<double>& w) {
    const std::size_t n = v.size();
    std::vector<double> best;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<double> fit(n);
        std::size_t start = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != n - 1 && !(mask >> i & 1u)) continue;
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

Outcome oracles() {
    Outcome o;
    Gen g(200);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(g.integer(3, 50));
        auto x = g.vec(n, -5, 5);
        const auto y = g.vec(n, -5, 5);
        if (trial % 4 == 0) x[2] = x[0];
        o.require(stats::theil_sen(x, y) == brute_theil_sen(x, y), "Theil-Sen case " + std::to_string(trial));
    }
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::size_t>(g.integer(1, 12));
        const auto v = g.vec(n, 0, 1), w = g.vec(n, 0.1, 2);
        const auto fit = stats::isotonic_fit(v, w);
        const auto ref = brute_isotonic(v, w);
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(fit[i] - ref[i]));
    }
    o.require(worst <= 1e-12, "isotonic deviation " + fmt(worst));
    if (o.pass) o.detail = "200 + 200 cases, isotonic max dev " + fmt(worst);
    return o;
}

Outcome bootstrap() {
    Outcome o;
    Gen g(77);
    const auto v = g.vec(200, 0, 1);
    stats::ResamplePlan plan;
    plan.seed = 2024;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(4);
    const auto par = stats::bootstrap_ci(v, plan);
    omp_set_num_threads(1);
    const auto one = stats::bootstrap_ci(v, plan);
    omp_set_num_threads(saved);
    const stats::Statistic mean = [&](std::span<const std::size_t> idx) {
        double s = 0;
        for (auto i : idx) s += v[i];
        return s / static_cast<double>(idx.size());
    };
    o.require(*par.lo == *one.lo && *par.hi == *one.hi, "CI differs across thread counts");
    o.require(stats::bootstrap_replicates(v.size(), mean, plan) == stats::serial::bootstrap_replicates(v.size(), mean, plan),
              "parallel and serial replicates differ");
    int covered = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> sample(100);
        for (auto& x : sample) x = g.uniform() < 0.5 ? 1.0 : 0.0;
        stats::ResamplePlan p;
        p.seed = static_cast<std::uint64_t>(trial);
        const auto iv = stats::bootstrap_ci(sample, p);
        if (*iv.lo <= 0.5 && 0.5 <= *iv.hi) ++covered;
    }
    o.require(covered >= 180, "coverage " + std::to_string(covered) + "/200");
    o.detail = "deterministic across modes, Bernoulli coverage " + std::to_string(covered) + "/200";
    return o;
}

// Inputs that satisfy every non-axis gate through AAI-4.
gates::GateInputs strong_inputs(const std::map<Axis, double>& scores) {
    gates::GateInputs in;
    in.axes = axes::vector_from_scores(scores);
    in.axes.tools_mild_ok = 3;
    in.axes.memory_lag_span = 30.0;
    for (int f = 0; f < 2; ++f) {
        dynamics::FamilyDynamics d;
        d.family = "F" + std::to_string(f);
        d.kappa.theil_sen = 0.02;
        d.kappa.lo = 0.01;
        d.span_days = 14;
        d.sustained = true;
        in.families.push_back(d);
    }
    RevisionEvent e;
    e.event_id = "e";
    e.c_rev_pre = 0.78;
    e.c_rev_post = 0.84;
    e.c_ctrl_pre = 0.78;
    e.c_ctrl_post = 0.80;
    e.did_ci = std::array<double, 2>{0.01, 0.07};
    e.ablation_result = 0.78;
    in.events = {e};
    in.evidence.maintenance_baseline = 0.8;
    for (int d = 0; d < 7; ++d) in.evidence.maintenance_days.push_back({d, 0.7, false});
    in.human_parity = true;
    return in;
}

Outcome gate_table() {
    Outcome o;
    gates::GateConfig cfg;
    cfg.table = gates::default_table();
    cfg.kappa_star = 0.01;
    stats::ResamplePlan plan;
    plan.replicates = 100;
    int cases = 0;
    auto expect = [&](const gates::GateInputs& in, int want, const std::string& what) {
        ++cases;
        const int got = gates::assign_level(in, cfg, plan).level;
        o.require(got == want, what + ": level " + std::to_string(got) + ", expected " + std::to_string(want));
    };
    constexpr double d = 1e-6;

    // AAI-0 and AAI-1 boundaries.
    for (const auto& [off, want] : {std::pair{0.0, 0}, {-d, -1}, {d, 0}}) {
        gates::GateInputs in;
        in.axes = axes::vector_from_scores({{Axis::A, 0.95 + off}});
        expect(in, want, "AAI-0 A " + fmt(off));
    }
    for (Axis x : {Axis::A, Axis::P})
        for (const auto& [off, want] : {std::pair{0.0, 1}, {-d, -1}, {d, 1}}) {
            std::map<Axis, double> s{{Axis::A, 0.5}, {Axis::P, 0.3}};
            s[x] += off;
            gates::GateInputs in;
            in.axes = axes::vector_from_scores(s);
            in.axes.tools_mild_ok = 3;
            expect(in, want, std::string("AAI-1 ") + axis_key(x) + " " + fmt(off));
        }

    // Table rows 2..4: every axis at, just below and just above its threshold.
    for (int level = 2; level <= 4; ++level) {
        const auto& row = cfg.table.at(level);
        for (const auto& [x, t] : row) {
            for (const auto& [off, drop] : {std::pair{0.0, false}, {-d, true}, {d, false}}) {
                auto s = row;
                for (auto& [a, v] : s)
                    if (v == 0.0) v = 0.01;
                s[x] = t + off;
                const bool strict_zero = t == 0.0;
                if (strict_zero && off < 0.0) continue;
                const bool fails = drop || (strict_zero && off == 0.0);
                expect(strong_inputs(s), fails ? level - 1 : level,
                       "row " + std::to_string(level) + " " + axis_key(x) + " " + fmt(off));
            }
        }
    }

    Gen g(500);
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::map<Axis, double> s;
        for (Axis a : kAllAxes) s[a] = g.uniform();
        auto in = strong_inputs(s);
        in.axes.tools_mild_ok = g.integer(0, 5);
        const int before = gates::assign_level(in, cfg, plan).level;
        const Axis up = kAllAxes[static_cast<std::size_t>(g.integer(0, 9))];
        auto& score = in.axes.axes[up].score;
        *score = std::min(1.0, *score + g.uniform(0.0, 0.5));
        if (gates::assign_level(in, cfg, plan).level < before) ++violations;
    }
    o.require(violations == 0, std::to_string(violations) + " monotonicity violations");
    if (o.pass) o.detail = std::to_string(cases) + " boundary cases, 500 monotone trials";
    return o;
}

Outcome closures() {
    Outcome o;
    RevisionEvent e;
    e.event_id = "e";
    e.c_rev_pre = 0.78;
    e.c_rev_post = 0.84;
    e.c_ctrl_pre = 0.78;
    e.c_ctrl_post = 0.80;
    e.did_ci = std::array<double, 2>{0.01, 0.07};
    e.ablation_result = 0.78;
    stats::ResamplePlan plan;
    const auto ok = gates::expansion_closure(e, 0.01, plan);
    e.ablation_result = 0.84;
    const auto persistent = gates::expansion_closure(e, 0.01, plan);
    o.require(ok.pass, "reverting ablation passes: " + ok.reason);
    o.require(!persistent.pass, "persistent gain fails");
    o.detail = "DiD " + fmt(*ok.did) + "; persistent: " + persistent.reason;
    return o;
}

Outcome frontier_checks() {
    Outcome o;
    stats::ResamplePlan plan;
    plan.replicates = 100;
    const auto bins = frontier::default_bins();
    std::vector<PolicyRun> flat;
    for (int i = 0; i < 4; ++i) flat.push_back({"p" + std::to_string(i), "", 0.9, 0.0});
    const auto e = frontier::delegability_frontier(flat, 3.0, bins, plan);
    const auto s = frontier::frontier_summaries(e, 0.65);
    o.require(std::abs(s.fd - 1.0) <= 1e-9, "FD = 1");
    o.require(std::abs(s.auf - 0.25) <= 1e-9, "AUF = 0.25");

    Gen g(200);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<PolicyRun> a, b;
        for (int i = 0; i < 6; ++i) {
            const double q = g.uniform(0.2, 0.9), h = g.uniform(0.0, 3.0);
            a.push_back({"p" + std::to_string(i), "", q, h});
            b.push_back({"p" + std::to_string(i), "", std::min(1.0, q + g.uniform(0.0, 0.1)), h});
        }
        a.push_back({"z", "", 0.1, 0.0});
        b.push_back({"z", "", 0.1, 0.0});
        const auto fa = frontier::delegability_frontier(a, 3.0, bins, plan, false);
        const auto fb = frontier::delegability_frontier(b, 3.0, bins, plan, false);
        const double q_star = g.uniform(0.2, 0.8);
        const auto sa = frontier::frontier_summaries(fa, q_star), sb = frontier::frontier_summaries(fb, q_star);
        if (sb.auf < sa.auf || sb.fd < sa.fd) ++violations;
    }
    o.require(violations == 0, std::to_string(violations) + " dominance violations");

    std::vector<EpisodeTrace> ts;
    for (int k = 0; k < 5; ++k) ts.push_back(aai::testing::trace("F0-t" + std::to_string(k), 0.8));
    const auto r = refs(ts);
    const frontier::QualityFrontier qf(r);
    o.require(std::abs(qf.auf() - 0.8) <= 1e-12, "step-function AUF = 0.8");
    if (o.pass) o.detail = "FD " + fmt(s.fd) + ", AUF " + fmt(s.auf) + ", 200 dominance pairs, step AUF " + fmt(qf.auf());
    return o;
}

struct EndToEnd {
    fs::path dir;
    report::Corpus corpus;
    report::Options options;
};

EndToEnd& end_to_end_fixture() {
    static EndToEnd fx = [] {
        EndToEnd f;
        f.dir = fs::temp_directory_path() / "aai_acceptance";
        fs::remove_all(f.dir);
        simulate::ArchetypeOptions opt;
        opt.seed = 20260101;
        const auto specs = simulate::default_archetypes();
        simulate::write_corpus(simulate::simulate_archetypes(specs, opt), specs, (f.dir / "corpus").string());
        report::InputPaths p;
        const auto c = f.dir / "corpus";
        p.config = (c / "config.json").string();
        p.traces = (c / "traces.jsonl").string();
        p.events = (c / "events.jsonl").string();
        p.checkpoints = (c / "checkpoints.jsonl").string();
        p.evidence = (c / "evidence.json").string();
        f.corpus = report::load_corpus(p);
        f.options.seed = 7;
        return f;
    }();
    return fx;
}

Outcome end_to_end() {
    Outcome o;
    auto& fx = end_to_end_fixture();
    const auto analysis = report::analyze(fx.corpus, fx.options);
    const auto bundle = report::bundle_json(analysis, fx.corpus, fx.options);
    double worst = 0.0;
    int kappas = 0;
    for (const auto& spec : simulate::default_archetypes()) {
        const auto it = std::find_if(analysis.agents.begin(), analysis.agents.end(),
                                     [&](const auto& a) { return a.agent == spec.name; });
        o.require(it != analysis.agents.end(), "agent " + spec.name + " missing");
        if (it == analysis.agents.end()) continue;
        for (const auto& [axis, target] : spec.targets) {
            const auto s = it->axes.score(axis);
            o.require(s.has_value(), spec.name + " axis " + axis_key(axis) + " has no data");
            if (s) worst = std::max(worst, std::abs(*s - target));
        }
        if (spec.kappa_ci)
            for (const auto& f : it->dynamics) {
                ++kappas;
                const double k = f.kappa.theil_sen;
                o.require(k >= spec.kappa_ci->first && k <= spec.kappa_ci->second,
                          spec.name + " kappa " + fmt(k) + " outside stated CI");
            }
        const auto& comp = bundle.at("composite").at(spec.name);
        o.require(comp.contains("strict") && comp.contains("floor"), "both zero policies reported");
        o.require(comp.contains("reference") && comp.at("reference").contains("strict_minus_reference") &&
                      comp.at("reference").contains("note"),
                  "strict-vs-table discrepancy documented");
    }
    o.require(worst <= 0.03, "axis deviation " + fmt(worst));
    if (o.pass)
        o.detail = "max axis deviation " + fmt(worst) + ", " + std::to_string(kappas) + " kappa points in CI, " +
                   std::to_string(fx.corpus.traces.size()) + " traces";
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    Outcome o;
    auto& fx = end_to_end_fixture();
    std::vector<fs::path> outs{fx.dir / "report_a", fx.dir / "report_b"};
    const int saved = omp_get_max_threads();
    for (std::size_t i = 0; i < outs.size(); ++i) {
        omp_set_num_threads(i == 0 ? 4 : 1);
        const auto a = report::analyze(fx.corpus, fx.options);
        (void)report::write_report(report::bundle_json(a, fx.corpus, fx.options), a, outs[i].string());
    }
    omp_set_num_threads(saved);
    int files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(outs[0])) {
        if (!entry.is_regular_file()) continue;
        ++files;
        const auto rel = fs::relative(entry.path(), outs[0]);
        o.require(slurp(entry.path()) == slurp(outs[1] / rel), rel.string() + " differs");
    }
    o.require(files > 0, "no report files written");
    if (o.pass) o.detail = std::to_string(files) + " files byte-identical (4 threads vs 1)";
    fs::remove_all(fx.dir);
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"calibration map anchors and clipping", 1.0, calibration},
        {"composite geometric-mean properties x1000", 5.0, composite_properties},
        {"memory axis anchors", 0.0, memory_anchors},
        {"R axis worked example", 0.0, revision_example},
        {"step operators", 0.0, step_operators},
        {"rate-escape integrator", 2.0, rate_escape},
        {"progression milestones", 0.0, progression},
        {"Theil-Sen and isotonic oracles", 30.0, oracles},
        {"bootstrap determinism and coverage", 60.0, bootstrap},
        {"gate table boundaries and monotonicity", 0.0, gate_table},
        {"expansion closure scenarios", 0.0, closures},
        {"frontier integrals and dominance", 0.0, frontier_checks},
        {"end-to-end archetype reproduction", 120.0, end_to_end},
        {"report determinism", 0.0, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0.0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += "; runtime " + fmt(secs) + " s exceeds " + fmt(c.budget_s) + " s";
        }
        if (!o.pass) ++failures;
        std::printf("%s  %-42s %s [%.3f s]\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), secs);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
