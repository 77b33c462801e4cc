#include "aai/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aai/error.hpp"

namespace aai::frontier {

namespace {

constexpr const char* kModule = "frontier";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::optional<double>> bin_maxima(std::span<const PolicyRun> runs, std::span<const std::size_t> idx,
                                              std::span<const double> bins, double h_max) {
    std::vector<std::optional<double>> out(bins.size());
    for (std::size_t j = 0; j < bins.size(); ++j) {
        const double budget = intervention_budget(bins[j], h_max);
        for (auto i : idx) {
            const auto& r = runs[i];
            if (r.mean_interventions <= budget + 1e-12 && (!out[j] || r.mean_quality > *out[j])) out[j] = r.mean_quality;
        }
    }
    return out;
}

// Nonincreasing projection over the non-empty bins.
std::vector<std::optional<double>> project(const std::vector<std::optional<double>>& raw) {
    std::vector<double> vals;
    for (const auto& v : raw)
        if (v) vals.push_back(*v);
    std::vector<std::optional<double>> out(raw.size());
    if (vals.empty()) return out;
    const auto fit = stats::isotonic_fit(vals, false);
    std::size_t k = 0;
    for (std::size_t j = 0; j < raw.size(); ++j)
        if (raw[j]) out[j] = fit[k++];
    return out;
}

}  // namespace

QualityFrontier::QualityFrontier(std::span<const EpisodeTrace* const> traces,
                                 const std::map<std::string, double>& weights) {
    if (traces.empty()) throw Error(kModule, "quality frontier needs traces");
    std::map<std::string, std::vector<double>> by_task;
    for (const auto* t : traces) by_task[t->task_id].push_back(t->quality);
    double total = 0.0;
    for (auto& [task, qs] : by_task) {
        double w = 1.0;
        if (!weights.empty()) {
            auto it = weights.find(task);
            w = it == weights.end() ? 0.0 : it->second;
            if (!(w >= 0.0)) throw Error(kModule, "negative task weight for '" + task + "'");
        }
        std::sort(qs.begin(), qs.end());
        tasks_.emplace_back(w, std::move(qs));
        total += w;
    }
    if (!(total > 0.0)) throw Error(kModule, "task weights sum to zero");
    for (auto& [w, qs] : tasks_) {
        w /= total;
        double s = 0.0;
        for (double q : qs) s += q;
        auf_ += w * s / static_cast<double>(qs.size());
    }
}

double QualityFrontier::at(double tau) const {
    double f = 0.0;
    for (const auto& [w, qs] : tasks_) {
        const auto it = std::lower_bound(qs.begin(), qs.end(), tau);
        f += w * static_cast<double>(qs.end() - it) / static_cast<double>(qs.size());
    }
    return f;
}

std::vector<std::pair<double, double>> QualityFrontier::curve(std::size_t points) const {
    if (points < 2) throw Error(kModule, "frontier grid needs at least two points");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < points; ++i) {
        const double tau = static_cast<double>(i) / static_cast<double>(points - 1);
        out.emplace_back(tau, at(tau));
    }
    return out;
}

double delta_f(const QualityFrontier& a, const QualityFrontier& b, double tau_star) {
    return a.at(tau_star) - b.at(tau_star);
}

double intervention_budget(double a, double h_max) {
    if (!(h_max > 0.0)) throw Error(kModule, "h_max must be positive");
    if (!(a >= 0.0 && a <= 1.0)) throw Error(kModule, "autonomy demand outside [0,1]");
    return (1.0 - a) * h_max;
}

std::vector<double> default_bins(std::size_t count) {
    if (count < 2) throw Error(kModule, "need at least two bins");
    std::vector<double> out;
    for (std::size_t j = 0; j < count; ++j) out.push_back(static_cast<double>(j) / static_cast<double>(count - 1));
    return out;
}

FrontierEstimate delegability_frontier(std::span<const PolicyRun> runs, double h_max, std::span<const double> bins,
                                       const stats::ResamplePlan& plan, bool with_ci) {
    if (runs.empty()) throw Error(kModule, "delegability frontier needs policy runs");
    if (bins.size() < 2) throw Error(kModule, "need at least two bins");
    FrontierEstimate e;
    e.h_max = h_max;
    e.a.assign(bins.begin(), bins.end());
    std::vector<std::size_t> all(runs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    e.raw = bin_maxima(runs, all, bins, h_max);
    e.q = project(e.raw);
    e.lo.resize(bins.size());
    e.hi.resize(bins.size());
    for (const auto& v : e.raw)
        if (!v) e.coverage_complete = false;
    if (!with_ci || runs.size() < 2) return e;

    stats::ResamplePlan block = plan;
    block.mode = stats::ResampleMode::block;
    const auto reps = static_cast<std::int64_t>(plan.replicates);
    const std::size_t m = bins.size();
    std::vector<double> values(static_cast<std::size_t>(reps) * m, kNaN);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < reps; ++b) {
        const auto idx = stats::resample_indices(runs.size(), block, static_cast<std::uint64_t>(b));
        const auto proj = project(bin_maxima(runs, idx, bins, h_max));
        for (std::size_t j = 0; j < m; ++j)
            if (proj[j]) values[static_cast<std::size_t>(b) * m + j] = *proj[j];
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!e.q[j]) continue;
        std::vector<double> col;
        for (std::int64_t b = 0; b < reps; ++b) col.push_back(values[static_cast<std::size_t>(b) * m + j]);
        const auto iv = stats::percentile_interval(*e.q[j], col, plan.level);
        e.lo[j] = iv.lo;
        e.hi[j] = iv.hi;
    }
    return e;
}

std::vector<double> trapezoid_nu(const FrontierEstimate& e) {
    const std::size_t m = e.a.size();
    std::vector<double> nu(m, 0.0);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double h = e.a[j + 1] - e.a[j];
        nu[j] += 0.5 * h;
        nu[j + 1] += 0.5 * h;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (!e.q[j]) nu[j] = 0.0;
        total += nu[j];
    }
    if (!(total > 0.0)) throw Error(kModule, "no non-empty bins");
    for (double& w : nu) w /= total;
    return nu;
}

FrontierSummary frontier_summaries(const FrontierEstimate& e, double q_star, std::optional<std::vector<double>> nu) {
    std::size_t nonempty = 0;
    for (const auto& v : e.q)
        if (v) ++nonempty;
    if (nonempty < 2) throw Error(kModule, "frontier summaries need at least two non-empty bins");
    FrontierSummary s;
    if (nu) {
        if (nu->size() != e.a.size()) throw Error(kModule, "nu length does not match bins");
        double total = 0.0;
        for (std::size_t j = 0; j < nu->size(); ++j) {
            if (!((*nu)[j] >= 0.0)) throw Error(kModule, "negative nu weight");
            if (!e.q[j]) (*nu)[j] = 0.0;
            total += (*nu)[j];
        }
        if (!(total > 0.0)) throw Error(kModule, "nu has no mass on non-empty bins");
        for (double& w : *nu) w /= total;
        s.nu = std::move(*nu);
    } else {
        s.nu = trapezoid_nu(e);
    }
    for (std::size_t j = 0; j < e.a.size(); ++j) {
        if (!e.q[j]) continue;
        if (*e.q[j] >= q_star) s.fd += s.nu[j];
        s.auf += s.nu[j] * std::max(*e.q[j] - q_star, 0.0);
    }
    s.fd = stats::clip(s.fd, 0.0, 1.0);
    return s;
}

double frontier_shift(const FrontierEstimate& later, const FrontierEstimate& earlier, double q_star) {
    if (later.a != earlier.a) throw Error(kModule, "mismatched bins across frontier estimates");
    return frontier_summaries(later, q_star).auf - frontier_summaries(earlier, q_star).auf;
}

SlopeVerdict frontier_slope(std::span<const double> R, std::span<const double> auf, double floor,
                            const stats::ResamplePlan& plan) {
    if (R.size() != auf.size()) throw Error(kModule, "R and AUF lengths differ");
    if (R.size() < 2) throw Error(kModule, "frontier slope needs at least two points");
    if (std::all_of(R.begin(), R.end(), [&](double r) { return r == R.front(); }))
        throw Error(kModule, "frontier slope undefined: constant R");
    SlopeVerdict v;
    v.slope = stats::theil_sen(R, auf);
    stats::Statistic stat = [&](std::span<const std::size_t> idx) {
        std::vector<double> x, y;
        for (auto i : idx) {
            x.push_back(R[i]);
            y.push_back(auf[i]);
        }
        try {
            return stats::serial::theil_sen(x, y);
        } catch (const Error&) {
            return kNaN;
        }
    };
    const auto iv = stats::bootstrap_ci(R.size(), stat, plan);
    v.lo = iv.lo;
    v.hi = iv.hi;
    v.pass = v.slope >= floor;
    return v;
}

json frontier_to_json(const FrontierEstimate& e, const FrontierSummary& s, double q_star) {
    json bins = json::array();
    for (std::size_t j = 0; j < e.a.size(); ++j)
        bins.push_back({{"a", e.a[j]},
                        {"H_max", intervention_budget(e.a[j], e.h_max)},
                        {"q_raw", opt(e.raw[j])},
                        {"q_star", opt(e.q[j])},
                        {"ci", {opt(e.lo[j]), opt(e.hi[j])}},
                        {"empty", !e.raw[j].has_value()},
                        {"nu", s.nu[j]}});
    return {{"bins", bins}, {"h_max", e.h_max}, {"Q_star", q_star}, {"FD", s.fd}, {"AUF", s.auf},
            {"coverage_complete", e.coverage_complete}, {"label", e.label}};
}

}  // namespace aai::frontier
