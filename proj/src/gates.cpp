#include "aai/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aai/composite.hpp"
#include "aai/error.hpp"

namespace aai::gates {

namespace {

constexpr const char* kModule = "gates";
constexpr const char* kInsufficient = "insufficient evidence";

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

class VerdictSink {
public:
    explicit VerdictSink(std::vector<Verdict>& out) : out_(out) {}

    void add(int level, std::string gate, bool pass, std::string detail, std::string status = {}) {
        if (status.empty()) status = pass ? "pass" : "fail";
        out_.push_back({level, std::move(gate), pass, std::move(status), std::move(detail)});
    }

    void insufficient(int level, std::string gate, std::string detail) {
        add(level, std::move(gate), false, std::move(detail), kInsufficient);
    }

    // Axis lower bound; threshold 0 reads as strictly positive.
    void axis_min(int level, const axes::AxisVector& v, Axis a, double threshold, const std::string& gate = {}) {
        const std::string name = gate.empty() ? std::string(axis_key(a)) + (threshold == 0.0 ? " > 0" : " >= " + fmt(threshold)) : gate;
        const auto s = v.score(a);
        if (!s) {
            add(level, name, false, std::string("axis ") + axis_key(a) + " has no data", "no data");
            return;
        }
        const bool ok = threshold == 0.0 ? *s > 0.0 : *s >= threshold;
        add(level, name, ok, std::string(axis_key(a)) + " = " + fmt(*s));
    }

private:
    std::vector<Verdict>& out_;
};

double num(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

std::map<int, std::map<Axis, double>> default_table() {
    using enum Axis;
    return {
        {2, {{A, 0.6}, {G, 0.3}, {P, 0.5}, {M, 0.5}, {T, 0.5}, {R, 0.0}, {S, 0.2}, {W, 0.6}, {Dollar, 0.4}}},
        {3, {{A, 0.75}, {G, 0.5}, {P, 0.7}, {M, 0.7}, {T, 0.7}, {R, 0.4}, {S, 0.5}, {W, 0.75}, {Dollar, 0.6}}},
        {4, {{A, 0.9}, {G, 0.9}, {P, 0.9}, {M, 0.85}, {T, 0.8}, {R, 0.6}, {S, 0.7}, {W, 0.85}, {Dollar, 0.8}}},
    };
}

GateConfig load_gate_config(const json& doc) {
    if (!doc.contains("gates") || !doc.at("gates").contains("kappa_star"))
        throw Error(kModule, "missing config field gates.kappa_star (required for gate evaluation)");
    const auto& g = doc.at("gates");
    GateConfig c;
    c.table = default_table();
    try {
        c.kappa_star = g.at("kappa_star").get<double>();
        if (g.contains("table"))
            for (const auto& [lvl, row] : g.at("table").items())
                for (const auto& [axis, v] : row.items()) c.table[std::stoi(lvl)][parse_axis(axis)] = v.get<double>();
        c.maintenance_alpha = num(g, "maintenance_alpha", c.maintenance_alpha);
        c.maintenance_days = static_cast<int>(num(g, "maintenance_days", c.maintenance_days));
        c.expansion_eps = num(g, "expansion_eps", c.expansion_eps);
        c.accel_alpha = num(g, "accel_alpha", c.accel_alpha);
        c.gamma = num(g, "gamma", c.gamma);
        c.zeta = num(g, "zeta", c.zeta);
        c.coverage_floor = num(g, "coverage_floor", c.coverage_floor);
        c.g2_fraction = num(g, "g2_fraction", c.g2_fraction);
        c.alpha_tool = num(g, "alpha_tool", c.alpha_tool);
        c.alpha_rev = num(g, "alpha_rev", c.alpha_rev);
        c.innovation_floor = num(g, "innovation_floor", c.innovation_floor);
        c.g3_floor = num(g, "g3_floor", c.g3_floor);
        c.g3_software_floor = num(g, "g3_software_floor", c.g3_software_floor);
        c.g4_floor = num(g, "g4_floor", c.g4_floor);
        c.aai0_a = num(g, "aai0_a", c.aai0_a);
        c.aai0_p_max = num(g, "aai0_p_max", c.aai0_p_max);
        c.aai0_t_max = static_cast<int>(num(g, "aai0_t_max", c.aai0_t_max));
        c.aai1_a = num(g, "aai1_a", c.aai1_a);
        c.aai1_p = num(g, "aai1_p", c.aai1_p);
        c.aai1_tools = static_cast<int>(num(g, "aai1_tools", c.aai1_tools));
        c.aai2_days = num(g, "aai2_days", c.aai2_days);
        c.aai3_p = num(g, "aai3_p", c.aai3_p);
        c.aai3_s = num(g, "aai3_s", c.aai3_s);
        c.aai3_m_span_days = num(g, "aai3_m_span_days", c.aai3_m_span_days);
        c.aai3_families = static_cast<int>(num(g, "aai3_families", c.aai3_families));
        c.aai4_p = num(g, "aai4_p", c.aai4_p);
        c.aai4_s = num(g, "aai4_s", c.aai4_s);
        c.aai4_families = static_cast<int>(num(g, "aai4_families", c.aai4_families));
        c.chc_tau_v = num(g, "chc_tau_v", c.chc_tau_v);
        c.chc_tau_h = num(g, "chc_tau_h", c.chc_tau_h);
        if (g.contains("chc_tau_w")) c.chc_tau_w = g.at("chc_tau_w").get<double>();
        if (g.contains("chc_tau_ms")) c.chc_tau_ms = g.at("chc_tau_ms").get<double>();
        c.core_gamma = num(g, "core_gamma", c.core_gamma);
        c.require_chc = g.value("require_chc", false);
        const auto mode = g.value("mode", std::string("base"));
        if (mode == "base") c.mode = GateMode::base;
        else if (mode == "curvature") c.mode = GateMode::curvature;
        else throw Error(kModule, "unknown gates.mode '" + mode + "'");
    } catch (const json::exception& e) {
        throw Error(kModule, std::string("invalid gates config: ") + e.what());
    }
    c.step = dynamics::load_dynamics_config(doc).step;
    if (!(c.kappa_star > 0.0)) throw Error(kModule, "gates.kappa_star must be positive");
    for (const auto& [lvl, row] : c.table)
        for (const auto& [a, v] : row)
            if (!(v >= 0.0 && v <= 1.0))
                throw Error(kModule, "threshold for " + std::string(axis_key(a)) + " at level " +
                                         std::to_string(lvl) + " outside [0,1]");
    if (!(c.maintenance_alpha > 0.0 && c.maintenance_alpha <= 1.0))
        throw Error(kModule, "gates.maintenance_alpha must be in (0,1]");
    if (c.maintenance_days < 1) throw Error(kModule, "gates.maintenance_days must be >= 1");
    if (!(c.gamma >= 0.0)) throw Error(kModule, "gates.gamma must be >= 0");
    if (!(c.zeta > 0.0)) throw Error(kModule, "gates.zeta must be positive");
    return c;
}

ClosureResult maintenance_closure(double baseline, std::span<const DayRecord> days, double alpha, int window_days) {
    ClosureResult r;
    if (static_cast<int>(days.size()) < window_days) {
        r.insufficient = true;
        r.reason = "fewer than " + std::to_string(window_days) + " daily measurements";
        return r;
    }
    std::vector<DayRecord> sorted(days.begin(), days.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.day < b.day; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].day != sorted[i - 1].day + 1) {
            r.reason = "window broken at day " + std::to_string(sorted[i].day);
            return r;
        }
    const double floor = alpha * baseline;
    r.margin = std::numeric_limits<double>::infinity();
    for (const auto& d : sorted) {
        if (d.human_patch) {
            r.reason = "human patch on day " + std::to_string(d.day);
            r.margin = std::min(r.margin, d.index - floor);
            return r;
        }
        r.margin = std::min(r.margin, d.index - floor);
    }
    r.pass = r.margin >= 0.0;
    if (!r.pass) r.reason = "index below alpha * baseline";
    return r;
}

ClosureResult expansion_closure(const RevisionEvent& e, double eps, const stats::ResamplePlan& plan) {
    ClosureResult r;
    r.event_id = e.event_id;
    if (!e.complete()) {
        r.insufficient = true;
        r.reason = "event lacks pre/post or control capability";
        return r;
    }
    r.did = stats::did_delta(*e.c_rev_pre, *e.c_rev_post, *e.c_ctrl_pre, *e.c_ctrl_post);
    if (e.did_ci) {
        r.lo = (*e.did_ci)[0];
        r.hi = (*e.did_ci)[1];
    } else if (e.holdout_did.size() >= 2) {
        const auto iv = stats::bootstrap_ci(e.holdout_did, plan);
        r.lo = iv.lo;
        r.hi = iv.hi;
    } else {
        r.insufficient = true;
        r.reason = "no DiD confidence interval or holdout values";
        return r;
    }
    if (!e.ablation_result) {
        r.reason = "ablation missing";
        return r;
    }
    const double ctrl_abl = e.c_ctrl_abl.value_or(*e.c_ctrl_pre);
    r.ablation_gap = std::abs(*e.ablation_result - *e.c_rev_pre);
    r.ablation_did = (*e.ablation_result - *e.c_rev_pre) - (ctrl_abl - *e.c_ctrl_pre);
    const bool significant = *r.did > 0.0 && r.lo && *r.lo > 0.0;
    const bool reverts = *r.ablation_gap <= eps + 1e-12;
    const bool vanishes = std::abs(*r.ablation_did) <= eps + 1e-12;
    r.pass = significant && reverts && vanishes;
    r.margin = *r.did;
    if (!significant) r.reason = "DiD not significantly positive";
    else if (!reverts) r.reason = "gain persists after ablation";
    else if (!vanishes) r.reason = "ablated DiD not within eps of 0";
    return r;
}

CurvatureVerdicts curvature_gates(std::span<const dynamics::FamilyDynamics> families, const GateConfig& cfg) {
    CurvatureVerdicts v;
    int kappa_ge = 0, kappa_15 = 0, prob90 = 0;
    bool elasticity_ok = true, any_fit = false;
    v.diminishing_all = true;
    for (const auto& f : families) {
        if (!f.midpoint_kappa || !f.midpoint_dkappa) continue;
        any_fit = true;
        ++v.families;
        if (*f.midpoint_kappa >= cfg.kappa_star) ++kappa_ge;
        if (*f.midpoint_kappa >= 1.5 * cfg.kappa_star) ++kappa_15;
        if (f.prob_dkappa_nonneg && *f.prob_dkappa_nonneg >= 1.0 - cfg.accel_alpha) ++v.accel_families;
        if (f.prob_dkappa_nonneg && *f.prob_dkappa_nonneg >= 0.9) ++prob90;
        if (*f.midpoint_dkappa < -cfg.gamma) v.diminishing_all = false;
        if (f.elasticity && *f.elasticity < 0.0) elasticity_ok = false;
    }
    if (!any_fit) {
        v.insufficient = true;
        v.diminishing_all = false;
        return v;
    }
    v.m1 = kappa_ge >= 2;
    v.m2 = kappa_ge >= 3 && prob90 >= 2;
    v.m3 = kappa_15 >= 4 && elasticity_ok;
    return v;
}

double superhuman_margin(std::span<const PairedQuality> pairs) {
    if (pairs.size() < 2) throw Error(kModule, "superhuman margin needs at least two paired tasks");
    std::vector<double> diffs;
    double qa = 0.0, qh = 0.0;
    for (const auto& p : pairs) {
        diffs.push_back(p.agent - p.human);
        qa += p.agent;
        qh += p.human;
    }
    const double n = static_cast<double>(pairs.size());
    const double gap = qa / n - qh / n;
    const double sigma = stats::sample_sd(diffs) / std::sqrt(n);
    if (sigma == 0.0) {
        if (gap == 0.0) return 0.0;
        return gap > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    return gap / sigma;
}

Evidence load_evidence(const json& doc) {
    Evidence e;
    try {
        if (doc.contains("maintenance")) {
            const auto& m = doc.at("maintenance");
            if (m.contains("baseline")) e.maintenance_baseline = m.at("baseline").get<double>();
            for (const auto& d : m.value("days", json::array()))
                e.maintenance_days.push_back(
                    {d.at("day").get<int>(), d.at("index").get<double>(), d.value("human_patch", false)});
        }
        if (doc.contains("human_pairs"))
            for (const auto& [fam, arr] : doc.at("human_pairs").items())
                for (const auto& p : arr) e.human_pairs[fam].push_back({p.at("agent").get<double>(), p.at("human").get<double>()});
        if (doc.contains("innovation")) {
            const auto& i = doc.at("innovation");
            if (i.contains("lambda_tool")) e.lambda_tool = i.at("lambda_tool").get<double>();
            if (i.contains("lambda_rev")) e.lambda_rev = i.at("lambda_rev").get<double>();
            e.innovation_ablation_verified = i.value("ablation_verified", false);
        }
        if (doc.contains("c_prev")) e.c_prev = doc.at("c_prev").get<double>();
        if (doc.contains("c_aai4")) e.c_aai4 = doc.at("c_aai4").get<double>();
        if (doc.contains("chc")) {
            const auto& c = doc.at("chc");
            if (c.contains("vrp")) e.vrp_bits = c.at("vrp").get<std::vector<std::vector<int>>>();
            for (const auto& t : c.value("wm", json::array()))
                e.wm_trials.push_back({t.value("seed", 0), t.at("length").get<int>(), t.at("accuracy").get<double>()});
            if (c.contains("wm_theta")) e.wm_theta = c.at("wm_theta").get<double>();
            if (c.contains("recall")) e.recall_fractions = c.at("recall").get<std::vector<double>>();
            if (c.contains("cores")) e.core_scores = c.at("cores").get<std::map<std::string, double>>();
        }
    } catch (const json::exception& ex) {
        throw Error(kModule, std::string("invalid evidence document: ") + ex.what());
    }
    return e;
}

json evidence_to_json(const Evidence& e) {
    json j = json::object();
    if (e.maintenance_baseline || !e.maintenance_days.empty()) {
        json days = json::array();
        for (const auto& d : e.maintenance_days)
            days.push_back({{"day", d.day}, {"index", d.index}, {"human_patch", d.human_patch}});
        j["maintenance"] = {{"baseline", opt(e.maintenance_baseline)}, {"days", days}};
    }
    if (!e.human_pairs.empty()) {
        json hp = json::object();
        for (const auto& [f, v] : e.human_pairs) {
            json arr = json::array();
            for (const auto& p : v) arr.push_back({{"agent", p.agent}, {"human", p.human}});
            hp[f] = arr;
        }
        j["human_pairs"] = hp;
    }
    if (e.lambda_tool || e.lambda_rev)
        j["innovation"] = {{"lambda_tool", opt(e.lambda_tool)}, {"lambda_rev", opt(e.lambda_rev)},
                           {"ablation_verified", e.innovation_ablation_verified}};
    if (e.c_prev) j["c_prev"] = *e.c_prev;
    if (e.c_aai4) j["c_aai4"] = *e.c_aai4;
    return j;
}

double vrp_at_k(const std::vector<std::vector<int>>& bits) {
    if (bits.empty()) throw NoData(kModule, "no retrieval items");
    const std::size_t k = bits.front().size();
    if (k == 0) throw Error(kModule, "retrieval item with k = 0");
    double total = 0.0;
    for (const auto& item : bits) {
        if (item.size() != k) throw Error(kModule, "k mismatch across retrieval items");
        total += static_cast<double>(std::accumulate(item.begin(), item.end(), 0)) / static_cast<double>(k);
    }
    return total / static_cast<double>(bits.size());
}

double wm_span(std::span<const Evidence::WmTrial> trials, double theta) {
    if (trials.empty()) throw NoData(kModule, "no working-memory trials");
    std::map<int, int> span_by_seed;
    for (const auto& t : trials) {
        auto& s = span_by_seed[t.seed];
        if (t.accuracy >= theta) s = std::max(s, t.length);
    }
    std::vector<double> spans;
    for (const auto& [seed, s] : span_by_seed) spans.push_back(s);
    return stats::median(std::move(spans));
}

ChcResult chc_gates(const Evidence& e, const GateConfig& cfg) {
    ChcResult r;
    if (!e.vrp_bits.empty()) {
        r.vrp = vrp_at_k(e.vrp_bits);
        r.hall = 1.0 - *r.vrp;
    }
    if (!e.wm_trials.empty() && e.wm_theta) r.wm_span = wm_span(e.wm_trials, *e.wm_theta);
    if (!e.recall_fractions.empty()) r.delayed_recall = stats::mean(e.recall_fractions);
    if (!r.vrp || !r.wm_span || !r.delayed_recall || !cfg.chc_tau_w || !cfg.chc_tau_ms) {
        r.insufficient = true;
        r.reason = "CHC probes or human-median thresholds missing";
        return r;
    }
    r.pass = *r.vrp >= cfg.chc_tau_v && *r.hall <= cfg.chc_tau_h && *r.wm_span >= *cfg.chc_tau_w &&
             *r.delayed_recall >= *cfg.chc_tau_ms;
    if (!r.pass) r.reason = "CHC threshold not met";
    return r;
}

Allocation suggest_allocation(const std::map<Axis, double>& weights, const std::map<Axis, double>& eta,
                              double budget) {
    if (!(budget > 0.0)) throw Error(kModule, "allocation budget must be positive");
    if (eta.empty()) throw Error(kModule, "allocation needs at least one elasticity");
    Allocation out;
    double total = 0.0;
    std::map<Axis, double> share;
    for (const auto& [a, e] : eta) {
        if (!(e >= 0.0)) throw Error(kModule, std::string("negative elasticity for axis ") + axis_key(a));
        auto it = weights.find(a);
        const double w = it == weights.end() ? 0.0 : it->second;
        share[a] = w * e;
        total += w * e;
    }
    if (total == 0.0) {
        out.uniform_fallback = true;
        for (auto& [a, s] : share) s = 1.0;
        total = static_cast<double>(share.size());
    }
    double assigned = 0.0;
    for (auto it = share.begin(); it != share.end(); ++it) {
        if (std::next(it) == share.end()) {
            out.amounts[it->first] = budget - assigned;
        } else {
            const double r = budget * it->second / total;
            out.amounts[it->first] = r;
            assigned += r;
        }
    }
    return out;
}

LevelReport assign_level(const GateInputs& in, const GateConfig& cfg, const stats::ResamplePlan& plan) {
    LevelReport rep;
    VerdictSink sink(rep.verdicts);
    const auto& v = in.axes;
    const bool curvature_mode = cfg.mode == GateMode::curvature;

    // Profile descriptors, reported only.
    rep.descriptors = {{"P_near_zero", v.score(Axis::P) ? json(*v.score(Axis::P) <= cfg.aai0_p_max) : json(nullptr)},
                       {"tool_count", v.tool_count},
                       {"tool_count_le_max", static_cast<int>(v.tool_count) <= cfg.aai0_t_max},
                       {"R_zero", v.score(Axis::R) ? json(*v.score(Axis::R) == 0.0) : json(nullptr)}};

    // Shared evidence.
    if (in.evidence.maintenance_baseline)
        rep.maintenance = maintenance_closure(*in.evidence.maintenance_baseline, in.evidence.maintenance_days,
                                              cfg.maintenance_alpha, cfg.maintenance_days);
    for (const auto& e : in.events) {
        auto r = expansion_closure(e, cfg.expansion_eps, plan);
        if (!rep.expansion || (r.pass && !rep.expansion->pass) ||
            (!rep.expansion->pass && rep.expansion->insufficient && !r.insufficient))
            rep.expansion = r;
        if (rep.expansion->pass) break;
    }
    rep.curvature = curvature_gates(in.families, cfg);
    rep.chc = chc_gates(in.evidence, cfg);
    if (in.evidence.c_prev) {
        rep.step_target = dynamics::step_operator(*in.evidence.c_prev, cfg.step);
        rep.double_step_target = dynamics::step_operator(*rep.step_target, cfg.step);
    }

    auto closure_verdict = [&](int level, const char* name, const std::optional<ClosureResult>& c) {
        if (!c) sink.insufficient(level, name, "no closure evidence");
        else if (c->insufficient) sink.insufficient(level, name, c->reason);
        else sink.add(level, name, c->pass, c->pass ? "margin " + fmt(c->margin) : c->reason);
    };
    auto step_verdict = [&](int level, const char* name, const std::optional<double>& target) {
        if (!target || !in.composite) sink.insufficient(level, name, "prior milestone or composite missing");
        else sink.add(level, name, *in.composite >= *target, "C = " + fmt(*in.composite) + ", target " + fmt(*target));
    };
    auto chc_verdict = [&](int level) {
        if (!cfg.require_chc) return;
        if (rep.chc.insufficient) sink.insufficient(level, "CHC gates", rep.chc.reason);
        else sink.add(level, "CHC gates", rep.chc.pass, rep.chc.reason);
    };
    auto family_count = [&](auto pred) {
        int n = 0;
        for (const auto& f : in.families)
            if (pred(f)) ++n;
        return n;
    };
    const bool have_dynamics = !in.families.empty();

    // AAI-0
    sink.axis_min(0, v, Axis::A, cfg.aai0_a);

    // AAI-1
    sink.axis_min(1, v, Axis::A, cfg.aai1_a);
    sink.axis_min(1, v, Axis::P, cfg.aai1_p);
    sink.add(1, ">= " + std::to_string(cfg.aai1_tools) + " tools at >= 60% success under mild drift",
             v.tools_mild_ok >= cfg.aai1_tools, std::to_string(v.tools_mild_ok) + " tools");

    // AAI-2
    if (!have_dynamics) {
        sink.insufficient(2, "kappa > 0 for >= 7 days", "no checkpoint series");
    } else {
        const int n = family_count([&](const dynamics::FamilyDynamics& f) {
            return f.kappa.lo && *f.kappa.lo > 0.0 && f.span_days >= cfg.aai2_days;
        });
        sink.add(2, "kappa > 0 for >= 7 days", n >= 1, std::to_string(n) + " families with CI excluding 0");
    }
    sink.axis_min(2, v, Axis::R, 0.0);
    closure_verdict(2, "maintenance closure", rep.maintenance);
    for (const auto& [a, t] : cfg.table.at(2)) sink.axis_min(2, v, a, t, std::string("row ") + axis_key(a));
    chc_verdict(2);

    // AAI-3
    if (!have_dynamics) {
        sink.insufficient(3, "kappa >= kappa* on multiple families", "no checkpoint series");
    } else {
        const int n = family_count([&](const dynamics::FamilyDynamics& f) { return f.kappa.theil_sen >= cfg.kappa_star; });
        sink.add(3, "kappa >= kappa* on multiple families", n >= cfg.aai3_families, std::to_string(n) + " families");
    }
    sink.axis_min(3, v, Axis::P, cfg.aai3_p);
    sink.axis_min(3, v, Axis::S, cfg.aai3_s);
    if (!v.score(Axis::M)) sink.add(3, "M over >= 30 days", false, "axis M has no data", "no data");
    else
        sink.add(3, "M over >= 30 days", v.memory_lag_span >= cfg.aai3_m_span_days,
                 "lag span " + fmt(v.memory_lag_span) + " days");
    closure_verdict(3, "expansion closure", rep.expansion);
    for (const auto& [a, t] : cfg.table.at(3)) sink.axis_min(3, v, a, t, std::string("row ") + axis_key(a));
    chc_verdict(3);
    if (cfg.require_chc) {
        const auto core = composite::aai_core(in.evidence.core_scores, cfg.core_gamma);
        if (!core.value) sink.insufficient(3, "AAI_core >= gamma", core.reason);
        else sink.add(3, "AAI_core >= gamma", core.eligible, "AAI_core = " + fmt(*core.value));
    }
    if (curvature_mode) {
        if (rep.curvature.insufficient) sink.insufficient(3, "acceleration gate", "no curvature fits");
        else
            sink.add(3, "acceleration gate", rep.curvature.accel_families >= 2,
                     std::to_string(rep.curvature.accel_families) + " families");
        step_verdict(3, "level step", rep.step_target);
    }

    // AAI-4
    if (!in.human_parity) sink.insufficient(4, "human parity on all families", "human thresholds missing");
    else sink.add(4, "human parity on all families", *in.human_parity, "");
    sink.axis_min(4, v, Axis::P, cfg.aai4_p);
    sink.axis_min(4, v, Axis::S, cfg.aai4_s);
    if (!have_dynamics) {
        sink.insufficient(4, "sustained kappa >= kappa*", "no checkpoint series");
    } else {
        const int n = family_count([](const dynamics::FamilyDynamics& f) { return f.sustained && *f.sustained; });
        sink.add(4, "sustained kappa >= kappa*", n >= cfg.aai4_families, std::to_string(n) + " families");
    }
    closure_verdict(4, "maintenance closure", rep.maintenance);
    closure_verdict(4, "expansion closure", rep.expansion);
    for (const auto& [a, t] : cfg.table.at(4)) sink.axis_min(4, v, a, t, std::string("row ") + axis_key(a));
    if (curvature_mode) {
        if (rep.curvature.insufficient) sink.insufficient(4, "diminishing-returns bound", "no curvature fits");
        else sink.add(4, "diminishing-returns bound", rep.curvature.diminishing_all, "");
        step_verdict(4, "two level steps", rep.double_step_target);
    }

    // AAI-5
    auto& g = rep.aai5;
    if (in.evidence.human_pairs.empty()) {
        g.detail[0] = kInsufficient;
        sink.insufficient(5, "G1 superhuman coverage", "no human-paired data");
    } else {
        bool all = true;
        int covered = 0;
        for (const auto& [fam, pairs] : in.evidence.human_pairs) {
            const double m = superhuman_margin(pairs);
            g.margins[fam] = m;
            if (m >= cfg.zeta) ++covered;
            else all = false;
        }
        g.coverage = static_cast<double>(covered) / static_cast<double>(in.evidence.human_pairs.size());
        g.pass[0] = *g.coverage >= cfg.coverage_floor && all;
        g.detail[0] = "Gamma = " + fmt(*g.coverage);
        sink.add(5, "G1 superhuman coverage", g.pass[0], g.detail[0]);
    }
    {
        std::size_t fits = 0, nonneg = 0;
        bool floor_ok = true;
        for (const auto& f : in.families) {
            if (!f.midpoint_dkappa) continue;
            ++fits;
            if (*f.midpoint_dkappa >= 0.0) ++nonneg;
            else if (*f.midpoint_dkappa < -cfg.gamma) floor_ok = false;
        }
        if (fits == 0) {
            g.detail[1] = kInsufficient;
            sink.insufficient(5, "G2 curvature", "no curvature fits");
        } else {
            const double frac = static_cast<double>(nonneg) / static_cast<double>(fits);
            g.pass[1] = frac >= cfg.g2_fraction && floor_ok;
            g.detail[1] = fmt(frac) + " of families with nonnegative curvature";
            sink.add(5, "G2 curvature", g.pass[1], g.detail[1]);
        }
    }
    {
        const bool software = in.preset == "software";
        const double floor = software ? cfg.g3_software_floor : cfg.g3_floor;
        const auto s = v.score(Axis::S), w = v.score(Axis::W), e = v.score(Axis::E);
        bool ok = s && w && *s >= floor && *w >= floor;
        if (!software && e) ok = ok && *e >= cfg.g3_floor;
        g.pass[2] = ok;
        g.detail[2] = std::string(software ? "software preset: S, W >= " : "S, E, W >= ") + fmt(floor);
        sink.add(5, "G3 coordination/embodiment", ok, g.detail[2]);
    }
    {
        const auto d = v.score(Axis::Dollar);
        g.pass[3] = d && *d >= cfg.g4_floor;
        g.detail[3] = d ? "$ = " + fmt(*d) : "axis $ has no data";
        sink.add(5, "G4 economic dominance", g.pass[3], g.detail[3]);
    }
    if (!in.evidence.lambda_tool || !in.evidence.lambda_rev || !in.evidence.innovation_ablation_verified) {
        g.detail[4] = kInsufficient;
        sink.insufficient(5, "G5 innovation", "ablation-verified innovation rates missing");
    } else {
        g.innovation = std::min(1.0, cfg.alpha_tool * *in.evidence.lambda_tool + cfg.alpha_rev * *in.evidence.lambda_rev);
        g.pass[4] = *g.innovation >= cfg.innovation_floor - 1e-12;
        g.detail[4] = "I = " + fmt(*g.innovation);
        sink.add(5, "G5 innovation", g.pass[4], g.detail[4]);
    }
    if (!in.evidence.c_aai4 || !in.composite) {
        g.detail[5] = kInsufficient;
        sink.insufficient(5, "G6 link-step leaps", "AAI-4 reference capability missing");
    } else {
        g.step_target = dynamics::step_operator(dynamics::step_operator(*in.evidence.c_aai4, cfg.step), cfg.step);
        g.pass[5] = *in.composite >= *g.step_target;
        g.detail[5] = "C = " + fmt(*in.composite) + ", target " + fmt(*g.step_target);
        sink.add(5, "G6 link-step leaps", g.pass[5], g.detail[5]);
    }

    rep.level_pass.fill(true);
    for (const auto& verdict : rep.verdicts)
        if (!verdict.pass) rep.level_pass[static_cast<std::size_t>(verdict.level)] = false;
    for (int n = 5; n >= 0; --n)
        if (rep.level_pass[static_cast<std::size_t>(n)]) {
            rep.level = n;
            break;
        }
    return rep;
}

json level_report_to_json(const LevelReport& r) {
    auto closure = [](const std::optional<ClosureResult>& c) -> json {
        if (!c) return nullptr;
        return {{"pass", c->pass},
                {"status", c->pass ? "pass" : c->insufficient ? kInsufficient : "fail"},
                {"reason", c->reason},
                {"margin", c->margin},
                {"did", opt(c->did)},
                {"ci", {opt(c->lo), opt(c->hi)}},
                {"ablation_gap", opt(c->ablation_gap)},
                {"ablation_did", opt(c->ablation_did)},
                {"event_id", c->event_id}};
    };
    json verdicts = json::array();
    for (const auto& v : r.verdicts)
        verdicts.push_back({{"level", v.level}, {"gate", v.gate}, {"pass", v.pass}, {"status", v.status},
                            {"detail", v.detail}});
    json levels = json::object();
    for (std::size_t n = 0; n < r.level_pass.size(); ++n) levels[std::to_string(n)] = r.level_pass[n];
    json margins = json::object();
    for (const auto& [f, m] : r.aai5.margins) margins[f] = std::isfinite(m) ? json(m) : json(m > 0 ? "inf" : "-inf");
    return {{"level", r.level},
            {"label", r.level < 0 ? std::string("unrated") : "AAI-" + std::to_string(r.level)},
            {"levels", levels},
            {"verdicts", verdicts},
            {"descriptors", r.descriptors},
            {"maintenance_closure", closure(r.maintenance)},
            {"expansion_closure", closure(r.expansion)},
            {"curvature", {{"accel_families", r.curvature.accel_families},
                           {"diminishing_all", r.curvature.diminishing_all},
                           {"M1", r.curvature.m1},
                           {"M2", r.curvature.m2},
                           {"M3", r.curvature.m3},
                           {"insufficient", r.curvature.insufficient}}},
            {"step_target", opt(r.step_target)},
            {"double_step_target", opt(r.double_step_target)},
            {"aai5", {{"margins", margins}, {"Gamma", opt(r.aai5.coverage)}, {"I", opt(r.aai5.innovation)},
                      {"step_target", opt(r.aai5.step_target)}, {"pass", r.aai5.pass}, {"detail", r.aai5.detail}}},
            {"chc", {{"VRP", opt(r.chc.vrp)}, {"Hall", opt(r.chc.hall)}, {"WM_span", opt(r.chc.wm_span)},
                     {"delayed_recall", opt(r.chc.delayed_recall)}, {"pass", r.chc.pass},
                     {"insufficient", r.chc.insufficient}, {"reason", r.chc.reason}}}};
}

}  // namespace aai::gates
