#include "aai/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "aai/error.hpp"

namespace aai::dynamics {

namespace {

constexpr const char* kModule = "dynamics";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<double> pick(std::span<const double> v, std::span<const std::size_t> idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(v[i]);
    return out;
}

double tricube(double u) {
    const double a = std::abs(u);
    if (a >= 1.0) return 0.0;
    const double c = 1.0 - a * a * a;
    return c * c * c;
}

// Returns nullopt when the weighted design is rank deficient at bandwidth h.
std::optional<LocalFit> try_local_fit(std::span<const double> R, std::span<const double> y, double r0, double h) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < R.size(); ++i)
        if (tricube((R[i] - r0) / h) > 0.0) rows.push_back(i);
    if (rows.size() < 3) return std::nullopt;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), 3);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double d = R[rows[k]] - r0;
        const double sw = std::sqrt(tricube(d / h));
        const auto r = static_cast<Eigen::Index>(k);
        X(r, 0) = sw;
        X(r, 1) = sw * d;
        X(r, 2) = sw * 0.5 * d * d;
        b(r) = sw * y[rows[k]];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < 3) return std::nullopt;
    const Eigen::Vector3d beta = qr.solve(b);
    return LocalFit{beta(1), beta(2), h};
}

// Points with t in [t0, t0 + span], inclusive up to rounding.
std::pair<std::vector<double>, std::vector<double>> window_points(const Series& s, double t0, double span) {
    std::vector<double> r, c;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.t[i] >= t0 - 1e-9 && s.t[i] <= t0 + span + 1e-9) {
            r.push_back(s.R[i]);
            c.push_back(s.C[i]);
        }
    return {r, c};
}

}  // namespace

const char* link_name(Link l) noexcept { return l == Link::logit ? "logit" : "surprisal"; }

Link parse_link(const std::string& name) {
    if (name == "logit") return Link::logit;
    if (name == "surprisal") return Link::surprisal;
    throw Error(kModule, "unknown link '" + name + "'");
}

double clamp_capability(double c, bool* clamped) {
    const double out = std::clamp(c, kClampMargin, 1.0 - kClampMargin);
    if (clamped && out != c) *clamped = true;
    return out;
}

double link(double c, Link l) {
    if (!(c > 0.0 && c < 1.0)) throw Error(kModule, "link argument outside (0,1)");
    return l == Link::logit ? std::log(c / (1.0 - c)) : -std::log1p(-c);
}

double link_inverse(double y, Link l) {
    if (l == Link::logit) return 1.0 / (1.0 + std::exp(-y));
    if (y < 0.0) throw Error(kModule, "surprisal inverse needs y >= 0");
    return -std::expm1(-y);
}

double link_derivative(double c, Link l) {
    if (!(c > 0.0 && c < 1.0)) throw Error(kModule, "link argument outside (0,1)");
    return l == Link::logit ? 1.0 / (c * (1.0 - c)) : 1.0 / (1.0 - c);
}

LinkValue link_transform(double c, Link l, double eps0) {
    if (!(eps0 > 0.0 && eps0 <= 0.5)) throw Error(kModule, "eps0 must be in (0, 1/2]");
    LinkValue out;
    const double cc = clamp_capability(c, &out.clamped);
    out.g = link(cc, l);
    out.uniformity = out.g / link(1.0 - eps0, l);
    return out;
}

double normalize_rate(double kappa, const Normalizer& n) {
    if (!(n.param > 0.0)) throw Error(kModule, "normalizer parameter must be positive");
    if (n.kind == Normalizer::Kind::michaelis_menten) {
        if (kappa < 0.0) throw Error(kModule, "Michaelis-Menten normalizer needs kappa >= 0");
        return kappa / (kappa + n.param);
    }
    return 1.0 / (1.0 + std::exp(-kappa / n.param));
}

double normalize_rate_inverse(double kbar, const Normalizer& n) {
    if (!(n.param > 0.0)) throw Error(kModule, "normalizer parameter must be positive");
    if (n.kind == Normalizer::Kind::michaelis_menten) {
        if (!(kbar >= 0.0 && kbar < 1.0)) throw Error(kModule, "normalized rate outside [0,1)");
        return n.param * kbar / (1.0 - kbar);
    }
    if (!(kbar > 0.0 && kbar < 1.0)) throw Error(kModule, "normalized rate outside (0,1)");
    return n.param * std::log(kbar / (1.0 - kbar));
}

std::map<std::string, Series> build_series(std::span<const Checkpoint> checkpoints, const ResourceLedger* ledger) {
    std::map<std::string, std::vector<const Checkpoint*>> grouped;
    for (const auto& c : checkpoints) grouped[c.family].push_back(&c);
    std::map<std::string, Series> out;
    for (auto& [family, cps] : grouped) {
        std::stable_sort(cps.begin(), cps.end(), [](const auto* a, const auto* b) { return a->t < b->t; });
        Series s;
        s.family = family;
        for (const auto* c : cps) {
            if (!s.t.empty() && !(c->t > s.t.back()))
                throw Error(kModule, "checkpoint times must be strictly increasing in family '" + family + "'",
                            c->locus);
            const double r = c->R ? *c->R : ledger ? ledger->cumulative(c->t) : c->t;
            if (!s.R.empty() && r < s.R.back())
                throw Error(kModule, "cumulative resource decreased in family '" + family + "'", c->locus);
            s.t.push_back(c->t);
            s.R.push_back(r);
            s.C.push_back(clamp_capability(c->C, &s.clamped));
        }
        out.emplace(family, std::move(s));
    }
    return out;
}

double fd_median(std::span<const double> R, std::span<const double> C) {
    if (R.size() != C.size()) throw Error(kModule, "R and C lengths differ");
    std::vector<double> d;
    for (std::size_t j = 0; j + 1 < R.size(); ++j)
        if (R[j + 1] != R[j]) d.push_back((C[j + 1] - C[j]) / (R[j + 1] - R[j]));
    if (d.empty()) throw Error(kModule, "kappa undefined: all R equal");
    return stats::median(std::move(d));
}

KappaEstimate kappa_estimate(const Series& s, const stats::ResamplePlan& plan) {
    if (s.size() < 2) throw Error(kModule, "kappa needs at least two checkpoints");
    if (std::all_of(s.R.begin(), s.R.end(), [&](double r) { return r == s.R.front(); }))
        throw Error(kModule, "kappa undefined: all R equal in family '" + s.family + "'");
    KappaEstimate out;
    out.theil_sen = stats::theil_sen(s.R, s.C);
    out.fd_median = fd_median(s.R, s.C);
    stats::Statistic stat = [&](std::span<const std::size_t> idx) {
        try {
            return stats::serial::theil_sen(pick(s.R, idx), pick(s.C, idx));
        } catch (const Error&) {
            return kNaN;
        }
    };
    const auto iv = stats::bootstrap_ci(s.size(), stat, plan);
    out.lo = iv.lo;
    out.hi = iv.hi;
    return out;
}

std::optional<WindowRates> window_rates(const Series& s, double t1, double t2) {
    std::optional<std::size_t> i1, i2;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!i1 && s.t[i] >= t1) i1 = i;
        if (s.t[i] <= t2) i2 = i;
    }
    if (!i1 || !i2 || *i2 <= *i1) return std::nullopt;
    const double dR = s.R[*i2] - s.R[*i1];
    if (dR == 0.0) return std::nullopt;
    WindowRates w;
    w.kappa = (s.C[*i2] - s.C[*i1]) / dR;
    w.velocity = dR / (s.t[*i2] - s.t[*i1]);
    w.kappa_t = w.kappa * w.velocity;
    return w;
}

LocalFit local_quadratic(std::span<const double> R, std::span<const double> y, double r0, double bandwidth) {
    if (R.size() != y.size()) throw Error(kModule, "local_quadratic: length mismatch");
    if (R.size() < 3) throw Error(kModule, "local_quadratic needs at least three checkpoints");
    if (!(bandwidth > 0.0)) throw Error(kModule, "local_quadratic: bandwidth must be positive");
    if (auto f = try_local_fit(R, y, r0, bandwidth)) return *f;
    if (auto f = try_local_fit(R, y, r0, 2.0 * bandwidth)) return *f;
    throw Error(kModule, "local_quadratic: rank-deficient fit after widening bandwidth");
}

Curvature curvature(const Series& s, Link l, double bandwidth_fraction, const stats::ResamplePlan& plan) {
    if (s.size() < 3) throw Error(kModule, "curvature needs at least three checkpoints");
    const auto [rmin, rmax] = std::minmax_element(s.R.begin(), s.R.end());
    const double range = *rmax - *rmin;
    if (!(range > 0.0)) throw Error(kModule, "curvature undefined: all R equal");
    Curvature out;
    out.bandwidth = bandwidth_fraction * range;
    std::vector<double> y(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) y[i] = link(s.C[i], l);

    std::vector<double> eval(s.R.begin(), s.R.end());
    eval.push_back(0.5 * (*rmin + *rmax));
    for (double r0 : eval) {
        const auto f = local_quadratic(s.R, y, r0, out.bandwidth);
        CurvaturePoint p;
        p.R = r0;
        p.kappa = f.kappa;
        p.dkappa = f.dkappa;
        p.elasticity = meta_elasticity(r0, f.kappa, f.dkappa);
        out.points.push_back(p);
    }

    const std::size_t m = eval.size();
    const auto reps = static_cast<std::int64_t>(plan.replicates);
    std::vector<double> kap(static_cast<std::size_t>(reps) * m, kNaN), dk(kap.size(), kNaN);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < reps; ++b) {
        const auto idx = stats::resample_indices(s.size(), plan, static_cast<std::uint64_t>(b));
        const auto rr = pick(s.R, idx);
        const auto yy = pick(y, idx);
        for (std::size_t k = 0; k < m; ++k) {
            try {
                const auto f = local_quadratic(rr, yy, eval[k], out.bandwidth);
                kap[static_cast<std::size_t>(b) * m + k] = f.kappa;
                dk[static_cast<std::size_t>(b) * m + k] = f.dkappa;
            } catch (const Error&) {
            }
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> rk, rd;
        for (std::int64_t b = 0; b < reps; ++b) {
            rk.push_back(kap[static_cast<std::size_t>(b) * m + k]);
            rd.push_back(dk[static_cast<std::size_t>(b) * m + k]);
        }
        auto& p = out.points[k];
        const auto ik = stats::percentile_interval(p.kappa, rk, plan.level);
        const auto id = stats::percentile_interval(p.dkappa, rd, plan.level);
        p.kappa_lo = ik.lo;
        p.kappa_hi = ik.hi;
        p.dkappa_lo = id.lo;
        p.dkappa_hi = id.hi;
        if (k + 1 == m)
            for (double v : rd)
                if (std::isfinite(v)) out.midpoint_dkappa_replicates.push_back(v);
    }
    return out;
}

RateConversion convert_time_to_resource(double kappa_t, double dkappa_t, double r, double r_prime) {
    if (!(r > 0.0)) throw Error(kModule, "resource rate r must be positive");
    return {kappa_t / r, dkappa_t / (r * r) - kappa_t * r_prime / (r * r * r)};
}

std::optional<double> meta_elasticity(double R, double kappa, double dkappa) {
    if (!(kappa > 0.0)) return std::nullopt;
    return R * dkappa / kappa;
}

double step_operator(double c, const StepConfig& cfg) {
    if (!(c > 0.0 && c < 1.0)) throw Error(kModule, "step operator needs c in (0,1)");
    const double g = link(c, cfg.link);
    if (cfg.mode == StepMode::additive) {
        if (!(cfg.delta > 0.0)) throw Error(kModule, "additive step needs delta > 0");
        return link_inverse(g + cfg.delta, cfg.link);
    }
    if (!(cfg.multiplier > 1.0)) throw Error(kModule, "multiplicative step needs A > 1");
    return link_inverse(cfg.multiplier * g, cfg.link);
}

LambdaScore lambda_score(double U, double kappa, double dkappa, double kappa_star, const LambdaConfig& cfg) {
    if (!(kappa_star > 0.0)) throw Error(kModule, "kappa_star must be positive");
    if (!(cfg.eta > 0.0 && cfg.eta_prime > 0.0 && cfg.gamma_star > 0.0))
        throw Error(kModule, "Lambda sharpness and curvature scale must be positive");
    LambdaScore out;
    const double arg = 1.0 + kappa / kappa_star;
    if (arg <= 0.0) {
        out.m = -1.0;
        out.clamped = true;
    } else {
        out.m = std::tanh(cfg.eta * std::log(arg));
    }
    if (!cfg.three_term) {
        if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw Error(kModule, "Lambda alpha must be in [0,1]");
        out.value = cfg.alpha * U + (1.0 - cfg.alpha) * out.m;
        return out;
    }
    if (std::abs(cfg.w_c + cfg.w_kappa + cfg.w_delta - 1.0) > 1e-9 || cfg.w_c < 0 || cfg.w_kappa < 0 || cfg.w_delta < 0)
        throw Error(kModule, "Lambda weights must be nonnegative and sum to 1");
    double k = std::tanh(cfg.eta_prime * dkappa / cfg.gamma_star);
    if (cfg.k_plus) k = 0.5 * (k + 1.0);
    out.k = k;
    out.value = cfg.w_c * U + cfg.w_kappa * out.m + cfg.w_delta * k;
    return out;
}

EscapeBounds escape_bounds(double c0, double eps, double v_esc, std::optional<double> r_min, Link l) {
    if (!(v_esc > 0.0)) throw Error(kModule, "escape velocity must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw Error(kModule, "epsilon must be in (0,1)");
    if (r_min && !(*r_min > 0.0)) throw Error(kModule, "r_min must be positive");
    EscapeBounds out;
    if (c0 < 1.0 - eps) out.resource = (link(1.0 - eps, l) - link(clamp_capability(c0), l)) / v_esc;
    if (r_min) out.time = out.resource / *r_min;
    return out;
}

std::map<int, double> calibrate_cutpoints(std::span<const Exemplar> exemplars) {
    if (exemplars.empty()) throw Error(kModule, "no exemplars for cutpoint calibration");
    std::vector<Exemplar> ex(exemplars.begin(), exemplars.end());
    std::stable_sort(ex.begin(), ex.end(), [](const Exemplar& a, const Exemplar& b) {
        return a.lambda < b.lambda || (a.lambda == b.lambda && a.level < b.level);
    });
    std::vector<double> levels;
    int lo = ex.front().level, hi = ex.front().level;
    for (const auto& e : ex) {
        levels.push_back(static_cast<double>(e.level));
        lo = std::min(lo, e.level);
        hi = std::max(hi, e.level);
    }
    const auto fit = stats::isotonic_fit(levels);
    std::map<int, double> cut;
    std::string pooled;
    for (std::size_t i = 0; i < ex.size(); ++i) {
        const int projected = static_cast<int>(std::floor(fit[i] + 0.5));
        if (projected != ex[i].level)
            pooled += " (Lambda=" + std::to_string(ex[i].lambda) + ", level=" + std::to_string(ex[i].level) + ")";
        if (!cut.count(projected)) cut[projected] = ex[i].lambda;
    }
    for (int n = lo; n <= hi; ++n)
        if (!cut.count(n))
            throw Error(kModule, "cutpoint calibration leaves level " + std::to_string(n) +
                                     " without exemplars; offending exemplars:" + pooled);
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [n, tau] : cut) {
        if (!(tau > prev))
            throw Error(kModule, "cutpoints not strictly increasing at level " + std::to_string(n) +
                                     "; offending exemplars:" + pooled);
        prev = tau;
    }
    return cut;
}

std::optional<int> label_for(double lambda, const std::map<int, double>& cutpoints) {
    std::optional<int> out;
    for (const auto& [n, tau] : cutpoints)
        if (lambda >= tau) out = n;
    return out;
}

DynamicsConfig load_dynamics_config(const json& doc) {
    DynamicsConfig cfg;
    const json empty = json::object();
    const json& d = doc.contains("dynamics") ? doc.at("dynamics") : empty;
    try {
        if (d.contains("link")) cfg.link = parse_link(d.at("link").get<std::string>());
        cfg.eps0 = d.value("eps0", cfg.eps0);
        cfg.bandwidth_fraction = d.value("bandwidth_fraction", cfg.bandwidth_fraction);
        cfg.window_days = d.value("window_days", cfg.window_days);
        if (d.contains("normalizer")) {
            const auto& n = d.at("normalizer");
            const auto kind = n.value("kind", std::string("mm"));
            if (kind == "mm" || kind == "michaelis_menten") cfg.normalizer.kind = Normalizer::Kind::michaelis_menten;
            else if (kind == "logistic") cfg.normalizer.kind = Normalizer::Kind::logistic;
            else throw Error(kModule, "unknown normalizer '" + kind + "'");
            cfg.normalizer.param = n.value("param", cfg.normalizer.param);
        }
        if (d.contains("lambda")) {
            const auto& l = d.at("lambda");
            auto& c = cfg.lambda;
            c.alpha = l.value("alpha", c.alpha);
            c.three_term = l.value("three_term", c.three_term);
            c.w_c = l.value("w_c", c.w_c);
            c.w_kappa = l.value("w_kappa", c.w_kappa);
            c.w_delta = l.value("w_delta", c.w_delta);
            c.eta = l.value("eta", c.eta);
            c.eta_prime = l.value("eta_prime", c.eta_prime);
            c.gamma_star = l.value("gamma_star", c.gamma_star);
            c.k_plus = l.value("k_plus", c.k_plus);
        }
        if (d.contains("step")) {
            const auto& s = d.at("step");
            if (s.contains("link")) cfg.step.link = parse_link(s.at("link").get<std::string>());
            else cfg.step.link = cfg.link;
            const auto mode = s.value("mode", std::string("additive"));
            if (mode == "additive") cfg.step.mode = StepMode::additive;
            else if (mode == "multiplicative") cfg.step.mode = StepMode::multiplicative;
            else throw Error(kModule, "unknown step mode '" + mode + "'");
            cfg.step.delta = s.value("delta", cfg.step.delta);
            cfg.step.multiplier = s.value("multiplier", cfg.step.multiplier);
        } else {
            cfg.step.link = cfg.link;
        }
        if (doc.contains("gates") && doc.at("gates").contains("kappa_star"))
            cfg.kappa_star = doc.at("gates").at("kappa_star").get<double>();
        else if (d.contains("kappa_star"))
            cfg.kappa_star = d.at("kappa_star").get<double>();
    } catch (const json::exception& e) {
        throw Error(kModule, std::string("invalid dynamics config: ") + e.what());
    }
    if (!(cfg.eps0 > 0.0 && cfg.eps0 <= 0.5)) throw Error(kModule, "dynamics.eps0 must be in (0, 1/2]");
    if (!(cfg.bandwidth_fraction > 0.0)) throw Error(kModule, "dynamics.bandwidth_fraction must be positive");
    if (!(cfg.normalizer.param > 0.0)) throw Error(kModule, "dynamics.normalizer.param must be positive");
    if (!(cfg.window_days > 0.0)) throw Error(kModule, "dynamics.window_days must be positive");
    if (cfg.kappa_star && !(*cfg.kappa_star > 0.0)) throw Error(kModule, "gates.kappa_star must be positive");
    return cfg;
}

FamilyDynamics analyze_family(const Series& s, const DynamicsConfig& cfg, const stats::ResamplePlan& plan) {
    FamilyDynamics f;
    f.family = s.family;
    f.n = s.size();
    f.clamped = s.clamped;
    if (s.size() == 0) throw NoData(kModule, "family '" + s.family + "' has no checkpoints");
    f.span_days = s.t.back() - s.t.front();
    f.last_c = s.C.back();
    stats::ResamplePlan block = plan;
    block.mode = stats::ResampleMode::block;
    f.kappa = kappa_estimate(s, block);
    f.normalized_rate = normalize_rate(std::max(f.kappa.theil_sen, 0.0), cfg.normalizer);

    if (s.size() >= 3) {
        try {
            f.curvature = curvature(s, cfg.link, cfg.bandwidth_fraction, block);
            const auto& mid = f.curvature->points.back();
            f.midpoint_kappa = mid.kappa;
            f.midpoint_dkappa = mid.dkappa;
            f.elasticity = mid.elasticity;
            const auto& reps = f.curvature->midpoint_dkappa_replicates;
            if (!reps.empty()) {
                const auto nonneg = std::count_if(reps.begin(), reps.end(), [](double v) { return v >= 0.0; });
                f.prob_dkappa_nonneg = static_cast<double>(nonneg) / static_cast<double>(reps.size());
            }
        } catch (const Error& e) {
            f.curvature_error = e.what();
        }
    } else {
        f.curvature_error = "fewer than three checkpoints";
    }

    if (cfg.kappa_star) {
        const double U = link_transform(f.last_c, cfg.link, cfg.eps0).uniformity;
        const double kt = f.midpoint_kappa.value_or(link_derivative(f.last_c, cfg.link) * f.kappa.theil_sen);
        f.lambda = lambda_score(U, kt, f.midpoint_dkappa.value_or(0.0), *cfg.kappa_star, cfg.lambda);

        // Resource-based slope in every rolling window of window_days.
        bool all = true, any = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.t[i] + cfg.window_days > s.t.back() + 1e-9) break;
            const auto [r, c] = window_points(s, s.t[i], cfg.window_days);
            try {
                const double k = stats::theil_sen(r, c);
                f.window_kappas.push_back(k);
                any = true;
                if (k < *cfg.kappa_star) all = false;
            } catch (const Error&) {
            }
        }
        if (any) f.sustained = all;
    }
    return f;
}

json family_dynamics_to_json(const FamilyDynamics& f, const DynamicsConfig& cfg) {
    json j{{"family", f.family},
           {"n", f.n},
           {"span_days", f.span_days},
           {"link", link_name(cfg.link)},
           {"normalizer", cfg.normalizer.kind == Normalizer::Kind::michaelis_menten ? "mm" : "logistic"},
           {"kappa", {{"theil_sen", f.kappa.theil_sen}, {"fd_median", f.kappa.fd_median},
                      {"ci", {opt(f.kappa.lo), opt(f.kappa.hi)}}}},
           {"normalized_rate", opt(f.normalized_rate)},
           {"kappa_tilde", opt(f.midpoint_kappa)},
           {"delta_kappa_tilde", opt(f.midpoint_dkappa)},
           {"prob_delta_kappa_nonneg", opt(f.prob_dkappa_nonneg)},
           {"meta_elasticity", opt(f.elasticity)},
           {"sustained", f.sustained ? json(*f.sustained) : json(nullptr)},
           {"window_kappas", f.window_kappas},
           {"capability_clamped", f.clamped}};
    if (!f.curvature_error.empty()) j["curvature_error"] = f.curvature_error;
    if (f.curvature) {
        json pts = json::array();
        for (const auto& p : f.curvature->points)
            pts.push_back({{"R", p.R}, {"kappa_tilde", p.kappa}, {"delta_kappa_tilde", p.dkappa},
                           {"kappa_ci", {opt(p.kappa_lo), opt(p.kappa_hi)}},
                           {"delta_kappa_ci", {opt(p.dkappa_lo), opt(p.dkappa_hi)}},
                           {"meta_elasticity", opt(p.elasticity)}});
        j["curvature"] = {{"bandwidth", f.curvature->bandwidth}, {"points", pts}};
    }
    if (f.lambda) {
        j["lambda"] = {{"value", f.lambda->value}, {"M", f.lambda->m}, {"K", opt(f.lambda->k)},
                       {"clamped", f.lambda->clamped}};
    }
    return j;
}

}  // namespace aai::dynamics
