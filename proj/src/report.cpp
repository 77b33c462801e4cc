#include "aai/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "aai/checksum.hpp"
#include "aai/error.hpp"

namespace aai::report {

namespace {

constexpr const char* kModule = "report";
constexpr const char* kDefaultAgent = "agent";
constexpr std::array<const char*, 6> kPalette{"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string agent_of(const std::string& id) { return id.empty() ? kDefaultAgent : id; }

std::string num(double x) { return std::isfinite(x) ? json(x).dump() : (std::isnan(x) ? "" : (x > 0 ? "inf" : "-inf")); }
std::string num(const std::optional<double>& x) { return x ? num(*x) : ""; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(kModule, "cannot write " + p.string());
    out << text;
}

std::optional<bool> human_parity(std::span<const EpisodeTrace* const> traces, const Battery& b) {
    for (const auto& f : b.families)
        if (!f.human_threshold) return std::nullopt;
    const auto agg = family_aggregate(traces, b, true);
    if (agg.empty()) return std::nullopt;
    for (const auto& f : agg)
        if (!f.has_data || !f.covered) return false;
    return true;
}

gates::Evidence evidence_for(const json& doc, const std::string& agent) {
    if (doc.contains("agents")) {
        const auto& agents = doc.at("agents");
        return agents.contains(agent) ? gates::load_evidence(agents.at(agent)) : gates::Evidence{};
    }
    return gates::load_evidence(doc);
}

double frontier_h_max(const json& config, std::span<const PolicyRun> runs) {
    if (config.contains("frontier") && config.at("frontier").contains("h_max"))
        return config.at("frontier").at("h_max").get<double>();
    double h = 1.0;
    for (const auto& r : runs) h = std::max(h, r.mean_interventions);
    return h;
}

struct Frame {
    double x0, x1, y0, y1;
    static constexpr double kW = 480, kH = 360, kL = 56, kR = 16, kT = 28, kB = 44;
    [[nodiscard]] double px(double x) const { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); }
    [[nodiscard]] double py(double y) const { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); }
};

std::string svg_number(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

std::string polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts, const std::string& color,
                     const std::string& extra = "") {
    std::ostringstream o;
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"" << extra << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
        o << (i ? " " : "") << svg_number(f.px(pts[i].first)) << "," << svg_number(f.py(pts[i].second));
    o << "\"/>\n";
    return o.str();
}

std::string frame_svg(const Frame& f, const std::string& title, const std::string& xl, const std::string& yl,
                      const std::string& body, const std::vector<SvgSeries>& series) {
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Frame::kW << "\" height=\"" << Frame::kH
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << Frame::kW / 2 << "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(title)
      << "</text>\n";
    o << "<line x1=\"" << f.px(f.x0) << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << f.px(f.x1) << "\" y2=\"" << f.py(f.y0)
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << f.px(f.x0) << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << f.px(f.x0) << "\" y2=\"" << f.py(f.y1)
      << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0, yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        o << "<text x=\"" << svg_number(f.px(xv)) << "\" y=\"" << f.py(f.y0) + 14 << "\" text-anchor=\"middle\">"
          << svg_number(xv) << "</text>\n";
        o << "<text x=\"" << f.px(f.x0) - 4 << "\" y=\"" << svg_number(f.py(yv) + 4) << "\" text-anchor=\"end\">"
          << svg_number(yv) << "</text>\n";
    }
    o << "<text x=\"" << Frame::kW / 2 << "\" y=\"" << Frame::kH - 8 << "\" text-anchor=\"middle\">" << xml_escape(xl)
      << "</text>\n";
    o << "<text x=\"12\" y=\"" << Frame::kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 12 "
      << Frame::kH / 2 << ")\">" << xml_escape(yl) << "</text>\n";
    o << body;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = Frame::kT + 8 + 14.0 * static_cast<double>(i);
        o << "<rect x=\"" << Frame::kW - 150 << "\" y=\"" << y - 8 << "\" width=\"10\" height=\"10\" fill=\""
          << kPalette[i % kPalette.size()] << "\"/>\n";
        o << "<text x=\"" << Frame::kW - 136 << "\" y=\"" << y + 1 << "\">" << xml_escape(series[i].name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(kModule, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(kModule, std::string("malformed JSON: ") + e.what(), path);
    }
}

Corpus load_corpus(const InputPaths& paths) {
    Corpus c;
    c.config = read_json_file(paths.config);
    c.checksums["config"] = sha256_file(paths.config);
    c.battery = load_battery(c.config);
    c.traces = load_traces(paths.traces, &c.warnings);
    c.checksums["traces"] = sha256_file(paths.traces);
    for (const auto& t : c.traces) check_trace(t, c.battery);
    if (paths.events) {
        c.events = load_events(*paths.events, &c.warnings);
        c.checksums["events"] = sha256_file(*paths.events);
    }
    if (paths.checkpoints) {
        c.checkpoints = load_checkpoints(*paths.checkpoints);
        c.checksums["checkpoints"] = sha256_file(*paths.checkpoints);
    }
    if (paths.evidence) {
        c.evidence = read_json_file(*paths.evidence);
        c.checksums["evidence"] = sha256_file(*paths.evidence);
    }
    return c;
}

stats::ResamplePlan plan_from_config(const json& config, std::uint64_t seed) {
    stats::ResamplePlan plan;
    plan.seed = seed;
    if (config.contains("bootstrap")) {
        const auto& b = config.at("bootstrap");
        plan.replicates = b.value("replicates", plan.replicates);
        plan.level = b.value("level", plan.level);
        plan.block_length = b.value("block_length", plan.block_length);
    }
    return plan;
}

std::vector<std::string> agent_ids(const Corpus& c) {
    std::set<std::string> ids;
    for (const auto& t : c.traces) ids.insert(agent_of(t.agent_id));
    for (const auto& k : c.checkpoints) ids.insert(agent_of(k.agent_id));
    return {ids.begin(), ids.end()};
}

Analysis analyze(const Corpus& c, const Options& opt) {
    const auto plan = plan_from_config(c.config, opt.seed);
    Analysis out;
    out.preset = opt.preset.value_or(c.battery.preset);
    const auto weights = opt.preset ? preset_weights(*opt.preset) : c.battery.weights;
    out.q_star = c.battery.target_quality;
    if (c.config.contains("frontier")) out.q_star = c.config.at("frontier").value("q_star", out.q_star);

    std::optional<gates::GateConfig> gate_cfg;
    if (opt.gates) gate_cfg = gates::load_gate_config(c.config);
    if (opt.dynamics || opt.gates) out.dynamics_config = dynamics::load_dynamics_config(c.config);

    for (const auto& id : agent_ids(c)) {
        AgentAnalysis a;
        a.agent = id;
        std::map<std::string, std::vector<const EpisodeTrace*>> by_run;
        std::vector<const EpisodeTrace*> all, battery_traces, persistence;
        for (const auto& t : c.traces) {
            if (agent_of(t.agent_id) != id) continue;
            by_run[t.run_id].push_back(&t);
            all.push_back(&t);
            (t.lag_days ? persistence : battery_traces).push_back(&t);
        }
        std::vector<RevisionEvent> agent_events;
        for (const auto& e : c.events)
            if (agent_of(e.agent_id) == id) agent_events.push_back(e);

        a.runs = by_run.size();
        if (!all.empty()) {
            if (by_run.size() == 1) {
                a.axes = axes::compute_axes(all, agent_events, c.battery, plan, true);
            } else {
                std::vector<std::pair<std::string, std::vector<const EpisodeTrace*>>> runs(by_run.begin(), by_run.end());
                std::vector<axes::AxisVector> vectors(runs.size());
                const auto n = static_cast<std::int64_t>(runs.size());
#pragma omp parallel for schedule(dynamic)
                for (std::int64_t i = 0; i < n; ++i) {
                    const auto& [run, traces] = runs[static_cast<std::size_t>(i)];
                    std::vector<RevisionEvent> ev;
                    for (const auto& e : agent_events)
                        if (e.run_id.empty() || e.run_id == run) ev.push_back(e);
                    vectors[static_cast<std::size_t>(i)] = axes::compute_axes(traces, ev, c.battery, plan, false);
                }
                a.axes = axes::average_runs(vectors, plan);
            }
            a.strict = composite::compose(a.axes, weights, out.preset, composite::ZeroPolicy::strict);
            a.floor = composite::compose(a.axes, weights, out.preset, composite::ZeroPolicy::floor);
            if (!persistence.empty()) {
                a.memory = axes::axis_M(persistence, c.battery);
                a.has_memory = true;
            }
            if (!battery_traces.empty()) a.tools = axes::axis_T(battery_traces, c.battery);
        }

        if (out.dynamics_config) {
            std::vector<Checkpoint> cps;
            for (const auto& k : c.checkpoints)
                if (agent_of(k.agent_id) == id) cps.push_back(k);
            if (!cps.empty())
                for (const auto& [family, series] : dynamics::build_series(cps))
                    a.dynamics.push_back(dynamics::analyze_family(series, *out.dynamics_config, plan));
        }

        if (gate_cfg && !all.empty()) {
            gates::GateInputs in;
            in.axes = a.axes;
            in.families = a.dynamics;
            in.events = agent_events;
            in.evidence = evidence_for(c.evidence, id);
            in.composite = a.strict.index;
            in.human_parity = human_parity(battery_traces, c.battery);
            in.preset = out.preset;
            a.level = gates::assign_level(in, *gate_cfg, plan);
        }

        if (opt.frontier && !battery_traces.empty()) {
            const frontier::QualityFrontier qf(battery_traces);
            a.quality_auf = qf.auf();
            a.quality_curve = qf.curve();
            const auto runs = policy_runs_from_traces(battery_traces);
            if (runs.empty()) {
                a.frontier_note = "no policy runs";
            } else {
                try {
                    const auto bins = frontier::default_bins();
                    a.delegability = frontier::delegability_frontier(runs, frontier_h_max(c.config, runs), bins, plan);
                    a.delegability_summary = frontier::frontier_summaries(*a.delegability, out.q_star);
                } catch (const Error& e) {
                    a.frontier_note = e.what();
                }
            }
        }
        out.agents.push_back(std::move(a));
    }
    return out;
}

json validation_json(const Corpus& c, bool* pass) {
    const auto adm = validate_admissibility(c.battery, c.traces);
    if (pass) *pass = adm.pass();
    json j = admissibility_to_json(adm);
    j["traces"] = c.traces.size();
    j["events"] = c.events.size();
    j["checkpoints"] = c.checkpoints.size();
    j["warnings"] = c.warnings.messages;
    return j;
}

json axes_json(const Analysis& a) {
    json j = json::object();
    for (const auto& g : a.agents) {
        j[g.agent] = axes::axis_vector_to_json(g.axes);
        j[g.agent]["runs"] = g.runs;
    }
    return j;
}

json composite_json(const Analysis& a, const Corpus& c) {
    json j = json::object();
    const json* ref = c.config.contains("reference") ? &c.config.at("reference") : nullptr;
    for (const auto& g : a.agents) {
        json r{{"strict", composite::composite_to_json(g.strict)}, {"floor", composite::composite_to_json(g.floor)},
               {"policies_diverge", std::abs(g.strict.index - g.floor.index) > 1e-12}};
        if (ref && ref->contains(g.agent) && ref->at(g.agent).contains("index")) {
            const double table = ref->at(g.agent).at("index").get<double>();
            r["reference"] = {{"index", table},
                              {"strict_minus_reference", g.strict.index - table},
                              {"floor_minus_reference", g.floor.index - table},
                              {"note", g.strict.index == 0.0
                                           ? "strict policy annihilates the index on a zero axis; reference value is "
                                             "not reproducible from its own axis row"
                                           : "reference index compared against the geometric mean of recovered axes"}};
        }
        j[g.agent] = r;
    }
    return j;
}

json dynamics_json(const Analysis& a) {
    json j = json::object();
    if (!a.dynamics_config) return j;
    for (const auto& g : a.agents) {
        json fams = json::array();
        for (const auto& f : g.dynamics) fams.push_back(dynamics::family_dynamics_to_json(f, *a.dynamics_config));
        j[g.agent] = fams;
    }
    return j;
}

json gates_json(const Analysis& a) {
    json j = json::object();
    for (const auto& g : a.agents)
        if (g.level) j[g.agent] = gates::level_report_to_json(*g.level);
    return j;
}

json frontier_json(const Analysis& a) {
    json agents = json::object();
    for (const auto& g : a.agents) {
        json r = json::object();
        r["quality_auf"] = g.quality_auf ? json(*g.quality_auf) : json(nullptr);
        if (g.delegability && g.delegability_summary)
            r["delegability"] = frontier::frontier_to_json(*g.delegability, *g.delegability_summary, a.q_star);
        else
            r["delegability"] = nullptr;
        if (!g.frontier_note.empty()) r["note"] = g.frontier_note;
        if (!g.quality_curve.empty()) {
            const auto it = std::min_element(g.quality_curve.begin(), g.quality_curve.end(), [&](auto& x, auto& y) {
                return std::abs(x.first - a.q_star) < std::abs(y.first - a.q_star);
            });
            r["quality_at_q_star"] = it->second;
        }
        agents[g.agent] = r;
    }
    json delta = json::object();
    for (std::size_t i = 0; i < a.agents.size(); ++i)
        for (std::size_t k = i + 1; k < a.agents.size(); ++k) {
            const auto& x = a.agents[i];
            const auto& y = a.agents[k];
            if (!x.delegability_summary || !y.delegability_summary) continue;
            delta[y.agent + " vs " + x.agent] = {
                {"delta_auf", y.delegability_summary->auf - x.delegability_summary->auf},
                {"delta_fd", y.delegability_summary->fd - x.delegability_summary->fd}};
        }
    return {{"agents", agents}, {"q_star", a.q_star}, {"delta", delta}};
}

json bundle_json(const Analysis& a, const Corpus& c, const Options& opt) {
    json inputs = json::object();
    for (const auto& [role, sha] : c.checksums) inputs[role] = {{"sha256", sha}};
    json b{{"engine", {{"name", kEngineName}, {"version", kEngineVersion}}},
           {"seed", opt.seed},
           {"preset", a.preset},
           {"config", c.config},
           {"inputs", inputs},
           {"agents", agent_ids(c)},
           {"axes", axes_json(a)},
           {"composite", composite_json(a, c)},
           {"dynamics", dynamics_json(a)},
           {"gates", gates_json(a)},
           {"frontier", frontier_json(a)},
           {"warnings", c.warnings.messages}};
    b["bundle_sha256"] = sha256_hex(canonical(b));
    return b;
}

std::string frontier_svg(const std::vector<SvgSeries>& series, double q_star) {
    const Frame f{0.0, 1.0, 0.0, 1.0};
    std::ostringstream body;
    if (series.size() >= 2) {
        const auto& lo = series.front().points;
        const auto& hi = series.back().points;
        std::map<double, double> low(lo.begin(), lo.end());
        for (std::size_t i = 0; i + 1 < hi.size(); ++i) {
            const auto p0 = hi[i], p1 = hi[i + 1];
            if (!low.count(p0.first) || !low.count(p1.first)) continue;
            const double l0 = low[p0.first], l1 = low[p1.first];
            if (p0.second <= l0 && p1.second <= l1) continue;
            body << "<polygon fill=\"" << kPalette[(series.size() - 1) % kPalette.size()]
                 << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"" << svg_number(f.px(p0.first)) << ","
                 << svg_number(f.py(std::max(p0.second, l0))) << " " << svg_number(f.px(p1.first)) << ","
                 << svg_number(f.py(std::max(p1.second, l1))) << " " << svg_number(f.px(p1.first)) << ","
                 << svg_number(f.py(l1)) << " " << svg_number(f.px(p0.first)) << "," << svg_number(f.py(l0)) << "\"/>\n";
        }
    }
    body << "<line x1=\"" << f.px(0) << "\" y1=\"" << svg_number(f.py(q_star)) << "\" x2=\"" << f.px(1) << "\" y2=\""
         << svg_number(f.py(q_star)) << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/>\n";
    body << "<text x=\"" << f.px(0) + 4 << "\" y=\"" << svg_number(f.py(q_star) - 4) << "\" fill=\"gray\">Q* = "
         << svg_number(q_star) << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) body << polyline(f, series[i].points, kPalette[i % kPalette.size()]);
    return frame_svg(f, "Delegability frontier", "autonomy demand a", "achievable quality q*(a)", body.str(), series);
}

std::string line_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series) {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 1.0;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
        }
    if (x1 <= x0) x1 = x0 + 1.0;
    const Frame f{x0, x1, y0, y1};
    std::ostringstream body;
    for (std::size_t i = 0; i < series.size(); ++i) body << polyline(f, series[i].points, kPalette[i % kPalette.size()]);
    return frame_svg(f, title, x_label, y_label, body.str(), series);
}

std::vector<std::string> write_report(const json& bundle, const Analysis& a, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root / "tables");
    fs::create_directories(root / "plots");
    write_text(root / "bundle.json", canonical(bundle));

    std::ostringstream axes_csv, comp_csv, dyn_csv, gate_csv, front_csv;
    axes_csv << "agent,axis,status,raw,score,lo,hi,n\n";
    comp_csv << "agent,policy,index,adjusted,uniformity,lo,hi\n";
    dyn_csv << "agent,family,n,kappa,kappa_lo,kappa_hi,midpoint_dkappa,prob_dkappa_nonneg,lambda,sustained\n";
    gate_csv << "agent,level,gate,status,detail\n";
    front_csv << "agent,a,raw,q,lo,hi\n";
    for (const auto& g : a.agents) {
        for (const auto& [axis, s] : g.axes.axes)
            axes_csv << csv_field(g.agent) << "," << axis_key(axis) << "," << (s.has_data ? "ok" : "no data") << ","
                     << num(s.raw) << "," << num(s.score) << "," << num(s.lo) << "," << num(s.hi) << "," << s.n << "\n";
        for (const auto* r : {&g.strict, &g.floor})
            comp_csv << csv_field(g.agent) << "," << composite::policy_name(r->policy) << "," << num(r->index) << ","
                     << num(r->adjusted) << "," << num(r->uniformity) << "," << num(r->lo) << "," << num(r->hi) << "\n";
        for (const auto& f : g.dynamics)
            dyn_csv << csv_field(g.agent) << "," << csv_field(f.family) << "," << f.n << "," << num(f.kappa.theil_sen)
                    << "," << num(f.kappa.lo) << "," << num(f.kappa.hi) << "," << num(f.midpoint_dkappa) << ","
                    << num(f.prob_dkappa_nonneg) << "," << (f.lambda ? num(f.lambda->value) : "") << ","
                    << (f.sustained ? (*f.sustained ? "true" : "false") : "") << "\n";
        if (g.level)
            for (const auto& v : g.level->verdicts)
                gate_csv << csv_field(g.agent) << "," << v.level << "," << csv_field(v.gate) << ","
                         << csv_field(v.status) << "," << csv_field(v.detail) << "\n";
        if (g.delegability)
            for (std::size_t j = 0; j < g.delegability->a.size(); ++j)
                front_csv << csv_field(g.agent) << "," << num(g.delegability->a[j]) << "," << num(g.delegability->raw[j])
                          << "," << num(g.delegability->q[j]) << "," << num(g.delegability->lo[j]) << ","
                          << num(g.delegability->hi[j]) << "\n";
    }
    write_text(root / "tables" / "axes.csv", axes_csv.str());
    write_text(root / "tables" / "composite.csv", comp_csv.str());
    write_text(root / "tables" / "dynamics.csv", dyn_csv.str());
    write_text(root / "tables" / "gates.csv", gate_csv.str());
    write_text(root / "tables" / "frontier.csv", front_csv.str());

    std::vector<std::string> notes;
    std::vector<SvgSeries> frontier_series, retention, tools;
    for (const auto& g : a.agents) {
        if (g.delegability) {
            SvgSeries s{g.agent, {}};
            for (std::size_t j = 0; j < g.delegability->a.size(); ++j)
                if (g.delegability->q[j]) s.points.emplace_back(g.delegability->a[j], *g.delegability->q[j]);
            if (!s.points.empty()) frontier_series.push_back(std::move(s));
        }
        if (g.has_memory)
            for (const auto& f : g.memory.families)
                if (!f.curve.empty()) retention.push_back({g.agent + ":" + f.family, f.curve});
        SvgSeries t{g.agent, {}};
        for (const auto& p : g.tools.per_delta)
            if (p.n > 0) t.points.emplace_back(p.magnitude, p.success);
        if (!t.points.empty()) tools.push_back(std::move(t));
    }
    if (frontier_series.empty()) notes.push_back("frontier plot skipped: no delegability frontier estimate");
    else write_text(root / "plots" / "frontier.svg", frontier_svg(frontier_series, a.q_star));
    if (retention.empty()) notes.push_back("retention plot skipped: no persistence data");
    else write_text(root / "plots" / "retention.svg", line_svg("Retention curves", "lag (days)", "mean quality", retention));
    if (tools.empty()) notes.push_back("tool plot skipped: no drift-tagged traces");
    else write_text(root / "plots" / "tools.svg", line_svg("Tool success by drift", "drift magnitude", "success rate", tools));
    std::ostringstream nt;
    for (const auto& n : notes) nt << n << "\n";
    write_text(root / "plots" / "NOTES.txt", nt.str());
    return notes;
}

}  // namespace aai::report
