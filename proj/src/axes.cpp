#include "aai/axes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "aai/error.hpp"

namespace aai::axes {

namespace {

constexpr const char* kModule = "axes";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const TaskSpec& task_of(const EpisodeTrace& t, const Battery& b) {
    const auto* task = b.find_task(t.task_id);
    if (!task) throw Error(kModule, "trace references unknown task '" + t.task_id + "'", t.locus);
    return *task;
}

bool succeeded(const EpisodeTrace& t, const Battery& b) { return t.quality >= task_of(t, b).q_star; }

double comms_per_action(const EpisodeTrace& t) {
    return static_cast<double>(t.comm_tokens) / static_cast<double>(std::max<long>(t.verified_actions, 1));
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Mild drift: smallest positive cataloged magnitude, else the smallest magnitude.
double mild_magnitude(const Battery& b) {
    double best_pos = std::numeric_limits<double>::infinity();
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& d : b.drift_catalog) {
        smallest = std::min(smallest, d.magnitude);
        if (d.magnitude > 0.0) best_pos = std::min(best_pos, d.magnitude);
    }
    return std::isfinite(best_pos) ? best_pos : smallest;
}

}  // namespace

double calibrate(double raw, Anchor anchor) {
    if (!(anchor.lo < anchor.hi)) throw Error(kModule, "degenerate anchor");
    return stats::clip((raw - anchor.lo) / (anchor.hi - anchor.lo), 0.0, 1.0);
}

double axis_A(TraceSpan traces, int horizon_cap) {
    if (traces.empty()) throw NoData(kModule, "A has no traces");
    if (horizon_cap < 1) throw Error(kModule, "horizon cap must be >= 1");
    double s = 0.0;
    for (const auto* t : traces)
        s += std::min(static_cast<double>(t->uninterrupted_actions) / horizon_cap, 1.0);
    return s / static_cast<double>(traces.size());
}

double axis_G(std::span<const FamilyAggregate> families) {
    std::size_t with_data = 0, covered = 0;
    for (const auto& f : families) {
        if (!f.has_data) continue;
        ++with_data;
        if (f.covered) ++covered;
    }
    if (with_data == 0) throw NoData(kModule, "G has no family with data");
    return static_cast<double>(covered) / static_cast<double>(with_data);
}

double axis_P(TraceSpan traces, int depth_anchor) {
    if (traces.empty()) throw NoData(kModule, "P has no traces");
    if (depth_anchor < 1) throw Error(kModule, "depth anchor must be >= 1");
    double s = 0.0;
    for (const auto* t : traces) s += std::min(static_cast<double>(t->plan_depth) / depth_anchor, 1.0);
    return s / static_cast<double>(traces.size());
}

double retention_score(double lambda, double lambda_max) {
    if (!(lambda_max > 0.0)) throw Error(kModule, "lambda_max must be positive");
    return std::exp(-std::max(lambda, 0.0) / lambda_max);
}

MemoryResult axis_M(TraceSpan persistence, const Battery& b) {
    std::map<std::string, std::vector<const EpisodeTrace*>> by_family;
    for (const auto* t : persistence) {
        if (!t->lag_days) continue;
        by_family[task_of(*t, b).family].push_back(t);
    }
    std::optional<double> global_recall;
    {
        double s = 0.0;
        std::size_t n = 0;
        for (const auto* t : persistence)
            if (t->recall_at_k) {
                s += *t->recall_at_k;
                ++n;
            }
        if (n > 0) global_recall = s / static_cast<double>(n);
        else if (b.recall_at_k) global_recall = *b.recall_at_k;
    }

    MemoryResult out;
    std::vector<double> per_family;
    for (const auto& [family, traces] : by_family) {
        std::map<double, std::pair<double, std::size_t>> lags;
        for (const auto* t : traces) {
            auto& a = lags[*t->lag_days];
            a.first += t->quality;
            ++a.second;
        }
        if (lags.size() < 2) {
            out.skipped.push_back(family + ": single lag");
            continue;
        }
        // OLS of log q on lag.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(traces.size());
        double recall_sum = 0.0;
        std::size_t recall_n = 0;
        for (const auto* t : traces) {
            const double x = *t->lag_days;
            const double y = std::log(std::max(t->quality, 1e-6));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            if (t->recall_at_k) {
                recall_sum += *t->recall_at_k;
                ++recall_n;
            }
        }
        const double denom = n * sxx - sx * sx;
        const double slope = (n * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / n;

        RetentionFit fit;
        fit.family = family;
        fit.n = traces.size();
        fit.lambda = std::max(0.0, -slope);
        fit.q0 = std::exp(intercept);
        fit.m1 = retention_score(fit.lambda, b.lambda_max);
        if (recall_n > 0) fit.m2 = recall_sum / static_cast<double>(recall_n);
        else if (global_recall) fit.m2 = *global_recall;
        else throw NoData(kModule, "M has no Rec@K outcomes and no configured recall_at_k");
        fit.m = 0.5 * (fit.m1 + fit.m2);
        if (fit.lambda > 0.0) fit.half_life_fit = std::log(2.0) / fit.lambda;
        for (const auto& [lag, acc] : lags) fit.curve.emplace_back(lag, acc.first / static_cast<double>(acc.second));
        const double half = fit.curve.front().second / 2.0;
        for (std::size_t k = 1; k < fit.curve.size(); ++k) {
            const auto [x0, y0] = fit.curve[k - 1];
            const auto [x1, y1] = fit.curve[k];
            if (y1 <= half) {
                fit.half_life_empirical = y0 == y1 ? x1 : x0 + (y0 - half) * (x1 - x0) / (y0 - y1);
                break;
            }
        }
        out.lag_span_days = std::max(out.lag_span_days, fit.curve.back().first - fit.curve.front().first);
        out.n += fit.n;
        per_family.push_back(fit.m);
        out.families.push_back(std::move(fit));
    }
    if (per_family.empty()) throw NoData(kModule, "M has no persistence family with two or more lags");
    out.raw = stats::median(per_family);
    return out;
}

double tool_score(double cov, double succ, double used, double s_max) {
    if (!(s_max > 0.0)) throw Error(kModule, "size_prior_max must be positive");
    const double size = std::min(1.0, std::log1p(used) / std::log1p(s_max));
    return std::cbrt(cov * succ * size);
}

ToolResult axis_T(TraceSpan traces, const Battery& b) {
    const auto required = b.required_tool_set();
    if (required.empty()) throw NoData(kModule, "T has no required tool categories");
    if (traces.empty()) throw NoData(kModule, "T has no traces");

    ToolResult out;
    out.required_count = required.size();
    out.mild_magnitude = mild_magnitude(b);
    std::set<std::string> used;
    std::map<double, std::pair<std::size_t, std::size_t>> by_mag;  // successes, count
    std::map<double, std::string> mag_tag;
    std::map<std::string, std::pair<std::size_t, std::size_t>> mild;
    std::size_t successes = 0;
    for (const auto* t : traces) {
        const auto* drift = b.find_drift(t->drift_tag);
        if (!drift) throw Error(kModule, "drift tag '" + t->drift_tag + "' not cataloged", t->locus);
        const bool ok = succeeded(*t, b);
        if (ok) {
            ++successes;
            used.insert(t->tool_categories_used.begin(), t->tool_categories_used.end());
        }
        auto& m = by_mag[drift->magnitude];
        m.first += ok ? 1 : 0;
        ++m.second;
        if (!mag_tag.count(drift->magnitude)) mag_tag[drift->magnitude] = drift->name;
        if (drift->magnitude == out.mild_magnitude)
            for (const auto& c : t->tool_categories_used) {
                auto& a = mild[c];
                a.first += ok ? 1 : 0;
                ++a.second;
            }
    }
    out.n = traces.size();
    std::size_t used_required = 0;
    for (const auto& c : used)
        if (required.count(c)) ++used_required;
    out.used_count = used.size();
    out.cov = static_cast<double>(used_required) / static_cast<double>(required.size());
    out.succ = static_cast<double>(successes) / static_cast<double>(traces.size());
    out.size_factor = std::min(1.0, std::log1p(static_cast<double>(used.size())) / std::log1p(b.size_prior_max));
    out.raw = tool_score(out.cov, out.succ, static_cast<double>(used.size()), b.size_prior_max);
    for (const auto& [mag, acc] : by_mag)
        out.per_delta.push_back({mag_tag[mag], mag, static_cast<double>(acc.first) / static_cast<double>(acc.second),
                                 acc.second});
    for (const auto& [c, acc] : mild) {
        const double rate = static_cast<double>(acc.first) / static_cast<double>(acc.second);
        out.category_success_mild[c] = rate;
        if (rate >= 0.6) ++out.tools_mild_ok;
    }
    return out;
}

RevisionResult axis_R(std::span<const RevisionEvent> events, double revision_scale,
                      const std::array<double, 3>& stage_weights) {
    if (!(revision_scale > 0.0)) throw Error(kModule, "revision scale must be positive");
    RevisionResult out;
    double total = 0.0;
    for (const auto& e : events) {
        if (!e.complete()) {
            out.excluded.push_back(e.event_id + ": missing pre/post or control capability");
            continue;
        }
        if (!e.holdout_matched) {
            out.excluded.push_back(e.event_id + ": holdout mismatch");
            continue;
        }
        EventContribution c;
        c.event_id = e.event_id;
        c.delta = stats::did_delta(*e.c_rev_pre, *e.c_rev_post, *e.c_ctrl_pre, *e.c_ctrl_post);
        c.rho = stage_weights[0] * e.stage_autonomy[0] + stage_weights[1] * e.stage_autonomy[1] +
                stage_weights[2] * e.stage_autonomy[2];
        c.contribution = c.rho * std::max(c.delta, 0.0);
        total += c.contribution;
        out.events.push_back(c);
    }
    out.raw = stats::clip(total / revision_scale, 0.0, 1.0);
    return out;
}

SocialResult axis_S(TraceSpan traces, const Battery& b) {
    struct Cell {
        double q = 0.0;
        double cpa = 0.0;
        std::size_t n = 0;
    };
    std::map<std::string, std::map<long, Cell>> cells;
    std::vector<double> solo_cpa;
    for (const auto* t : traces) {
        auto& c = cells[t->task_id][t->concurrency];
        c.q += t->quality;
        c.cpa += comms_per_action(*t);
        ++c.n;
        if (t->concurrency == 1) solo_cpa.push_back(comms_per_action(*t));
    }
    SocialResult out;
    if (!solo_cpa.empty()) out.tau_comm = stats::median(solo_cpa);

    std::map<std::string, long> best_m;
    double lift_sum = 0.0;
    for (const auto& [task, by_m] : cells) {
        auto solo = by_m.find(1);
        if (solo == by_m.end() || by_m.size() < 2) continue;
        const double c1 = solo->second.q / static_cast<double>(solo->second.n);
        long m_star = 0;
        double best = -1.0, best_cpa = 0.0;
        for (const auto& [m, cell] : by_m) {
            if (m == 1) continue;
            const double cm = cell.q / static_cast<double>(cell.n);
            const double cpa = cell.cpa / static_cast<double>(cell.n);
            if (cm > best || (cm == best && cpa < best_cpa)) {
                best = cm;
                best_cpa = cpa;
                m_star = m;
            }
        }
        lift_sum += std::max(best - c1, 0.0) / (1.0 - c1 + 1e-9);
        best_m[task] = m_star;
        ++out.tasks;
    }
    if (out.tasks == 0) throw NoData(kModule, "S has no task with both m=1 and m>1 traces");
    out.lift = lift_sum / static_cast<double>(out.tasks);

    std::size_t conflict = 0, chatter = 0, collapse = 0;
    for (const auto* t : traces) {
        auto it = best_m.find(t->task_id);
        if (it == best_m.end() || t->concurrency != it->second) continue;
        ++out.penalty_episodes;
        if (t->flags.unresolved_conflict || t->flags.loop) ++conflict;
        const bool chat = t->flags.chatter || (out.tau_comm && comms_per_action(*t) > *out.tau_comm);
        if (chat) ++chatter;
        if (t->flags.mode_collapse) ++collapse;
    }
    const double n = static_cast<double>(out.penalty_episodes);
    out.pi_conflict = conflict / n;
    out.pi_deadlock = stats::clip(out.pi_conflict + b.comm_penalty_weights[0] * (chatter / n) +
                                      b.comm_penalty_weights[1] * (collapse / n),
                                  0.0, 1.0);
    out.raw = stats::clip(out.lift * (1.0 - out.pi_deadlock), 0.0, 1.0);
    return out;
}

bool is_embodied(const EpisodeTrace& t) {
    return t.exposure_hours.has_value() || t.incident_counts.has_value() || t.sim_flag;
}

EmbodiedResult axis_E(TraceSpan embodied, const Battery& b) {
    EmbodiedResult out;
    std::size_t real_ok = 0, sim_ok = 0;
    std::array<double, 4> counts{};
    double repair_sum = 0.0;
    std::size_t repair_n = 0;
    for (const auto* t : embodied) {
        const bool ok = succeeded(*t, b);
        if (t->sim_flag) {
            ++out.n_sim;
            sim_ok += ok ? 1 : 0;
            continue;
        }
        ++out.n_real;
        real_ok += ok ? 1 : 0;
        if (t->exposure_hours) out.hours += *t->exposure_hours;
        if (t->incident_counts) {
            counts[0] += static_cast<double>(t->incident_counts->nm);
            counts[1] += static_cast<double>(t->incident_counts->minor);
            counts[2] += static_cast<double>(t->incident_counts->major);
            counts[3] += static_cast<double>(t->incident_counts->critical);
        }
        if (!ok && t->repair_hours) {
            repair_sum += *t->repair_hours;
            ++repair_n;
        }
    }
    if (out.n_real == 0 || !(out.hours > 0.0)) throw NoData(kModule, "E has zero real exposure hours");
    out.ar = static_cast<double>(real_ok) / static_cast<double>(out.n_real);
    double penalty = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        out.rates[k] = 100.0 * counts[k] / out.hours;
        penalty += b.ss_severity_weights[k] * out.rates[k];
    }
    out.ss = counts[3] > 0.0 ? 0.0 : 1.0 - std::min(1.0, penalty);
    const double fails = static_cast<double>(out.n_real - real_ok);
    if (fails > 0.0) out.mtbf = out.hours / fails;
    if (repair_n > 0) out.mttr = repair_sum / static_cast<double>(repair_n);
    const double incidents = counts[0] + counts[1] + counts[2] + counts[3];
    if (incidents > 0.0) out.mtbsi = out.hours / incidents;
    if (out.n_sim > 0) {
        const double ar_sim = static_cast<double>(sim_ok) / static_cast<double>(out.n_sim);
        out.s2r = 1.0 - std::abs(ar_sim - out.ar);
        out.raw = std::cbrt(out.ar * out.ss * *out.s2r);
    }
    return out;
}

RoboticsDiagnostics robotics_diagnostics(TraceSpan embodied, const Battery& b) {
    RoboticsDiagnostics out;
    long recovered = 0, total = 0;
    double qc = 0.0;
    std::size_t qc_n = 0, ok = 0;
    double hours = 0.0;
    for (const auto* t : embodied) {
        if (t->recovered_faults && t->total_faults) {
            recovered += *t->recovered_faults;
            total += *t->total_faults;
        }
        if (t->control_score) {
            qc += *t->control_score;
            ++qc_n;
        }
        if (!t->sim_flag && t->exposure_hours) {
            hours += *t->exposure_hours;
            if (t->quality >= b.target_quality) ++ok;
        }
    }
    if (total > 0) out.ra = static_cast<double>(recovered) / static_cast<double>(total);
    if (qc_n > 0) out.qc = qc / static_cast<double>(qc_n);
    if (hours > 0.0 && b.physical_cost_per_hour && *b.physical_cost_per_hour > 0.0)
        out.dollar_phys = (static_cast<double>(ok) / hours) / *b.physical_cost_per_hour;
    return out;
}

WorldModelResult axis_W(TraceSpan traces, const Battery& b) {
    WorldModelResult out;
    for (const auto* t : traces) {
        if (!t->stated_prob || !t->truth) continue;
        const auto& task = task_of(*t, b);
        if (!task.reference_prob)
            throw Error(kModule, "reference predictor missing for task '" + task.id + "'", t->locus);
        const double y = static_cast<double>(*t->truth);
        out.brier += (*t->stated_prob - y) * (*t->stated_prob - y);
        out.brier_ref += (*task.reference_prob - y) * (*task.reference_prob - y);
        ++out.n;
    }
    if (out.n == 0) throw NoData(kModule, "W has no probability episodes");
    out.brier /= static_cast<double>(out.n);
    out.brier_ref /= static_cast<double>(out.n);
    out.raw = 1.0 - std::min(1.0, out.brier / std::max(out.brier_ref, 1e-12));
    return out;
}

DollarResult axis_dollar(TraceSpan traces, std::optional<double> cost_per_hour, double q_star) {
    if (traces.empty()) throw NoData(kModule, "$ has no traces");
    DollarResult out;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, cost = 0.0;
    for (const auto* t : traces) {
        lo = std::min(lo, t->timestamp);
        hi = std::max(hi, t->timestamp);
        cost += t->cost;
        if (t->quality >= q_star) ++out.successes;
    }
    out.hours = (hi - lo) / 3600.0;
    if (!(out.hours > 0.0)) throw NoData(kModule, "$ has zero elapsed time");
    out.tph = static_cast<double>(out.successes) / out.hours;
    out.cph = cost_per_hour ? *cost_per_hour : cost / out.hours;
    if (!(out.cph > 0.0)) throw NoData(kModule, "$ has zero cost per hour");
    out.raw = out.tph / out.cph;
    return out;
}

std::optional<double> AxisVector::score(Axis a) const {
    auto it = axes.find(a);
    if (it == axes.end() || !it->second.has_data) return std::nullopt;
    return it->second.score;
}

namespace {

using RawFn = std::function<double(TraceSpan)>;

AxisScore no_data(Axis a, const std::string& reason, std::size_t n = 0) {
    AxisScore s;
    s.axis = a;
    s.reason = reason;
    s.n = n;
    return s;
}

void finish(AxisScore& s, double raw, const Battery& b) {
    s.has_data = true;
    s.raw = raw;
    s.score = calibrate(raw, b.anchor(s.axis));
}

void attach_ci(AxisScore& s, const stats::Interval& iv, const Battery& b) {
    if (!iv.has_ci()) return;
    s.lo = calibrate(*iv.lo, b.anchor(s.axis));
    s.hi = calibrate(*iv.hi, b.anchor(s.axis));
}

stats::ResamplePlan axis_plan(const stats::ResamplePlan& plan, Axis a) {
    stats::ResamplePlan p = plan;
    p.seed = stats::replicate_seed(plan.seed, 0xA000 + static_cast<std::uint64_t>(a));
    return p;
}

stats::Interval trace_ci(TraceSpan units, const RawFn& fn, const stats::ResamplePlan& plan) {
    stats::Statistic stat = [&](std::span<const std::size_t> idx) {
        std::vector<const EpisodeTrace*> sub;
        sub.reserve(idx.size());
        for (auto i : idx) sub.push_back(units[i]);
        try {
            return fn(sub);
        } catch (const NoData&) {
            return kNaN;
        }
    };
    return stats::bootstrap_ci(units.size(), stat, plan);
}

// Point estimate plus optional bootstrap CI for a trace-based axis.
template <typename Diag>
AxisScore trace_axis(Axis a, TraceSpan units, const Battery& b, const stats::ResamplePlan& plan, bool with_ci,
                     const RawFn& fn, Diag&& diagnostics) {
    AxisScore s;
    s.axis = a;
    s.n = units.size();
    try {
        finish(s, fn(units), b);
        s.diagnostics = diagnostics(units);
    } catch (const NoData& e) {
        return no_data(a, e.what(), units.size());
    }
    if (with_ci) attach_ci(s, trace_ci(units, fn, axis_plan(plan, a)), b);
    return s;
}

json no_diag(TraceSpan) { return json::object(); }

}  // namespace

AxisVector compute_axes(TraceSpan traces, std::span<const RevisionEvent> events, const Battery& b,
                        const stats::ResamplePlan& plan, bool with_ci) {
    std::vector<const EpisodeTrace*> battery_traces, persistence, probability, embodied;
    for (const auto* t : traces) {
        if (t->lag_days) persistence.push_back(t);
        else battery_traces.push_back(t);
        if (t->stated_prob) probability.push_back(t);
        if (is_embodied(*t)) embodied.push_back(t);
    }
    AxisVector v;

    v.axes[Axis::A] = trace_axis(Axis::A, battery_traces, b, plan, with_ci,
                                 [&](TraceSpan s) { return axis_A(s, b.horizon_cap); }, no_diag);
    v.axes[Axis::P] = trace_axis(Axis::P, battery_traces, b, plan, with_ci,
                                 [&](TraceSpan s) { return axis_P(s, b.depth_anchor); }, no_diag);
    v.axes[Axis::G] = trace_axis(
        Axis::G, battery_traces, b, plan, with_ci,
        [&](TraceSpan s) {
            auto fam = family_aggregate(s, b);
            return axis_G(fam);
        },
        [&](TraceSpan s) {
            json d = json::array();
            for (const auto& f : family_aggregate(s, b))
                d.push_back({{"family", f.family}, {"mean_quality", f.has_data ? json(f.mean_quality) : json(nullptr)},
                             {"covered", f.covered}, {"count", f.count}});
            return json{{"families", d}};
        });
    v.axes[Axis::M] = trace_axis(
        Axis::M, persistence, b, plan, with_ci, [&](TraceSpan s) { return axis_M(s, b).raw; },
        [&](TraceSpan s) {
            const auto r = axis_M(s, b);
            v.memory_lag_span = r.lag_span_days;
            json fams = json::array();
            for (const auto& f : r.families) {
                json curve = json::array();
                for (const auto& [lag, q] : f.curve) curve.push_back({lag, q});
                fams.push_back({{"family", f.family}, {"lambda", f.lambda}, {"q0", f.q0}, {"m1", f.m1}, {"m2", f.m2},
                                {"m", f.m}, {"half_life_fit", opt(f.half_life_fit)},
                                {"half_life_empirical", opt(f.half_life_empirical)}, {"curve", curve}, {"n", f.n}});
            }
            return json{{"families", fams}, {"skipped", r.skipped}, {"lag_span_days", r.lag_span_days}};
        });
    v.axes[Axis::T] = trace_axis(
        Axis::T, battery_traces, b, plan, with_ci, [&](TraceSpan s) { return axis_T(s, b).raw; },
        [&](TraceSpan s) {
            const auto r = axis_T(s, b);
            v.tool_count = r.used_count;
            v.tools_mild_ok = r.tools_mild_ok;
            json curve = json::array();
            for (const auto& p : r.per_delta)
                curve.push_back({{"drift", p.tag}, {"magnitude", p.magnitude}, {"success", p.success}, {"n", p.n}});
            return json{{"cov", r.cov}, {"succ", r.succ}, {"size_factor", r.size_factor},
                        {"used_categories", r.used_count}, {"required_categories", r.required_count},
                        {"per_delta", curve}, {"mild_magnitude", r.mild_magnitude},
                        {"category_success_mild", r.category_success_mild}, {"tools_mild_ok", r.tools_mild_ok}};
        });
    v.axes[Axis::S] = trace_axis(
        Axis::S, battery_traces, b, plan, with_ci, [&](TraceSpan s) { return axis_S(s, b).raw; },
        [&](TraceSpan s) {
            const auto r = axis_S(s, b);
            return json{{"lift", r.lift}, {"pi_conflict", r.pi_conflict}, {"pi_deadlock", r.pi_deadlock},
                        {"tau_comm", opt(r.tau_comm)}, {"tasks", r.tasks}, {"penalty_episodes", r.penalty_episodes}};
        });
    v.axes[Axis::E] = trace_axis(
        Axis::E, embodied, b, plan, with_ci,
        [&](TraceSpan s) {
            const auto r = axis_E(s, b);
            if (!r.raw) throw NoData(kModule, "E partial: no sim episodes for S2R");
            return *r.raw;
        },
        [&](TraceSpan s) {
            const auto r = axis_E(s, b);
            const auto rd = robotics_diagnostics(s, b);
            return json{{"AR", r.ar}, {"SS", r.ss}, {"S2R", opt(r.s2r)}, {"MTBF", opt(r.mtbf)},
                        {"MTTR", opt(r.mttr)}, {"MTBSI", opt(r.mtbsi)}, {"hours", r.hours},
                        {"RA", opt(rd.ra)}, {"QC", opt(rd.qc)}, {"dollar_phys", opt(rd.dollar_phys)}};
        });
    if (!v.axes[Axis::E].has_data && !embodied.empty()) {
        // Keep partial embodiment diagnostics visible.
        try {
            const auto r = axis_E(embodied, b);
            v.axes[Axis::E].diagnostics = {{"AR", r.ar}, {"SS", r.ss}, {"S2R", opt(r.s2r)}, {"hours", r.hours}};
        } catch (const NoData&) {
        }
    }
    v.axes[Axis::W] = trace_axis(
        Axis::W, probability, b, plan, with_ci, [&](TraceSpan s) { return axis_W(s, b).raw; },
        [&](TraceSpan s) {
            const auto r = axis_W(s, b);
            return json{{"brier", r.brier}, {"brier_ref", r.brier_ref}, {"n", r.n}};
        });
    v.axes[Axis::Dollar] = trace_axis(
        Axis::Dollar, battery_traces, b, plan, with_ci,
        [&](TraceSpan s) { return axis_dollar(s, b.cost_per_hour, b.target_quality).raw; },
        [&](TraceSpan s) {
            const auto r = axis_dollar(s, b.cost_per_hour, b.target_quality);
            return json{{"tph", r.tph}, {"cph", r.cph}, {"hours", r.hours}, {"successes", r.successes}};
        });

    // R is event based.
    {
        AxisScore s;
        s.axis = Axis::R;
        s.n = events.size();
        const auto r = axis_R(events, b.revision_scale, b.stage_weights);
        finish(s, r.raw, b);
        json ev = json::array();
        for (const auto& c : r.events)
            ev.push_back({{"event_id", c.event_id}, {"delta", c.delta}, {"rho", c.rho}, {"contribution", c.contribution}});
        s.diagnostics = {{"events", ev}, {"excluded", r.excluded}};
        if (with_ci && events.size() >= 2) {
            stats::Statistic stat = [&](std::span<const std::size_t> idx) {
                std::vector<RevisionEvent> sub;
                sub.reserve(idx.size());
                for (auto i : idx) sub.push_back(events[i]);
                return axis_R(sub, b.revision_scale, b.stage_weights).raw;
            };
            attach_ci(s, stats::bootstrap_ci(events.size(), stat, axis_plan(plan, Axis::R)), b);
        }
        v.axes[Axis::R] = s;
    }
    return v;
}

AxisVector average_runs(std::span<const AxisVector> runs, const stats::ResamplePlan& plan) {
    if (runs.empty()) throw Error(kModule, "average_runs: no runs");
    AxisVector out;
    out.runs = runs.size();
    std::vector<double> tools, mild, span;
    for (const auto& r : runs) {
        tools.push_back(static_cast<double>(r.tool_count));
        mild.push_back(static_cast<double>(r.tools_mild_ok));
        span.push_back(r.memory_lag_span);
    }
    out.tool_count = static_cast<std::size_t>(stats::lower_median(tools));
    out.tools_mild_ok = static_cast<int>(stats::lower_median(mild));
    out.memory_lag_span = stats::lower_median(span);

    for (Axis a : kAllAxes) {
        std::vector<double> raws, scores;
        std::size_t n = 0;
        for (const auto& r : runs) {
            const auto& s = r.axes.at(a);
            if (!s.has_data) continue;
            raws.push_back(*s.raw);
            scores.push_back(*s.score);
            n += s.n;
        }
        AxisScore s;
        s.axis = a;
        s.n = n;
        if (scores.empty()) {
            s.reason = runs.front().axes.at(a).reason;
            out.axes[a] = s;
            continue;
        }
        s.has_data = true;
        s.raw = stats::mean(raws);
        s.score = stats::mean(scores);
        const auto iv = stats::bootstrap_ci(scores, axis_plan(plan, a));
        if (iv.has_ci()) {
            s.lo = iv.lo;
            s.hi = iv.hi;
        }
        s.diagnostics = {{"runs_with_data", scores.size()}, {"per_run_scores", scores}};
        out.axes[a] = s;
    }
    return out;
}

AxisVector vector_from_scores(const std::map<Axis, double>& scores) {
    AxisVector v;
    for (Axis a : kAllAxes) {
        AxisScore s;
        s.axis = a;
        auto it = scores.find(a);
        if (it != scores.end()) {
            s.has_data = true;
            s.raw = it->second;
            s.score = stats::clip(it->second, 0.0, 1.0);
        } else {
            s.reason = "not supplied";
        }
        v.axes[a] = s;
    }
    return v;
}

json axis_vector_to_json(const AxisVector& v) {
    json j = json::object();
    for (const auto& [a, s] : v.axes) {
        j[axis_key(a)] = {{"status", s.has_data ? "ok" : "no-data"},
                          {"raw", opt(s.raw)},
                          {"score", opt(s.score)},
                          {"ci", {opt(s.lo), opt(s.hi)}},
                          {"n", s.n},
                          {"reason", s.reason},
                          {"diagnostics", s.diagnostics}};
    }
    return j;
}

}  // namespace aai::axes
