#include "aai/composite.hpp"

#include <algorithm>
#include <cmath>

#include "aai/error.hpp"
#include "aai/stats.hpp"

namespace aai::composite {

namespace {

constexpr const char* kModule = "composite";

struct Terms {
    double weight_sum = 0.0;
    double log_sum = 0.0;
};

void check_score(Axis a, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw Error(kModule, std::string("score for axis ") + axis_key(a) + " outside [0,1]");
}

double weight_of(const std::map<Axis, double>& weights, Axis a) {
    auto it = weights.find(a);
    if (it == weights.end()) return 0.0;
    if (!(it->second >= 0.0)) throw Error(kModule, std::string("negative weight for axis ") + axis_key(a));
    return it->second;
}

}  // namespace

IndexValue aai_index(const std::map<Axis, double>& scores, const std::map<Axis, double>& weights, ZeroPolicy policy,
                     double floor_eps) {
    IndexValue out;
    Terms t;
    bool zero = false;
    for (const auto& [a, x] : scores) {
        check_score(a, x);
        const double w = weight_of(weights, a);
        if (w == 0.0) continue;
        t.weight_sum += w;
        double v = x;
        if (policy == ZeroPolicy::floor && v < floor_eps) {
            v = floor_eps;
            out.floored.push_back(a);
        }
        if (v == 0.0) zero = true;
        else t.log_sum += w * std::log(v);
    }
    if (t.weight_sum == 0.0) throw Error(kModule, "no weighted axes");
    out.value = zero ? 0.0 : std::exp(t.log_sum / t.weight_sum);
    // All-equal profiles return the common value exactly.
    if (!zero && out.floored.empty()) {
        std::optional<double> common;
        bool equal = true;
        for (const auto& [a, x] : scores) {
            if (weight_of(weights, a) == 0.0) continue;
            if (!common) common = x;
            else if (*common != x) equal = false;
        }
        if (equal && common) out.value = *common;
    }
    out.value = stats::clip(out.value, 0.0, 1.0);
    return out;
}

std::map<Axis, std::optional<double>> index_gradient(const std::map<Axis, double>& scores,
                                                     const std::map<Axis, double>& weights) {
    const double c = aai_index(scores, weights).value;
    double w_sum = 0.0;
    for (const auto& [a, x] : scores) w_sum += weight_of(weights, a);
    std::map<Axis, std::optional<double>> out;
    for (const auto& [a, x] : scores) {
        const double w = weight_of(weights, a);
        if (w == 0.0) out[a] = 0.0;
        else if (x == 0.0) out[a] = std::nullopt;
        else out[a] = w / (w_sum * x) * c;
    }
    return out;
}

Jaggedness jaggedness_star(std::span<const double> scores, double index, double lambda) {
    if (scores.empty()) throw Error(kModule, "jaggedness of empty profile");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(kModule, "jaggedness lambda must be in [0,1]");
    Jaggedness out;
    const double med = stats::lower_median(std::vector<double>(scores.begin(), scores.end()));
    if (med == 0.0) {
        out.undefined = true;
        out.adjusted = 0.0;
        return out;
    }
    const double lo = *std::min_element(scores.begin(), scores.end());
    out.uniformity = lo / med;
    out.adjusted = index * std::pow(*out.uniformity, lambda);
    return out;
}

CoreScore aai_core(const std::map<std::string, double>& cores, double gamma) {
    CoreScore out;
    double log_sum = 0.0;
    bool zero = false;
    for (const char* name : kCoreDomains) {
        auto it = cores.find(name);
        if (it == cores.end()) {
            out.reason = std::string("missing core score ") + name;
            return out;
        }
        if (!(it->second >= 0.0)) throw Error(kModule, std::string("negative core score ") + name);
        if (it->second == 0.0) zero = true;
        else log_sum += std::log(it->second);
    }
    out.value = zero ? 0.0 : std::exp(log_sum / static_cast<double>(kCoreDomains.size()));
    out.eligible = *out.value >= gamma - 1e-12;
    if (!out.eligible) out.reason = "core score below gamma";
    return out;
}

CompositeResult compose(const axes::AxisVector& v, const std::map<Axis, double>& weights, const std::string& preset,
                        ZeroPolicy policy, double lambda) {
    CompositeResult r;
    r.preset = preset;
    r.policy = policy;
    std::map<Axis, double> scores;
    for (Axis a : kAllAxes) {
        if (weight_of(weights, a) == 0.0) continue;
        if (auto s = v.score(a)) {
            scores[a] = *s;
            r.used_axes.push_back(a);
        } else if (a == Axis::E) {
            r.omitted_axes.push_back(a);
        } else {
            r.missing_axes.push_back(a);
        }
    }
    if (scores.empty()) throw NoData(kModule, "no axis with data");
    const auto idx = aai_index(scores, weights, policy);
    r.index = idx.value;
    r.floored = idx.floored;
    if (policy == ZeroPolicy::strict) {
        const auto fl = aai_index(scores, weights, ZeroPolicy::floor);
        if (fl.value != idx.value) {
            r.index_floor = fl.value;
            r.floored = fl.floored;
        }
    }
    // Floor policy: gradient, profile and band use the substituted scores.
    if (policy == ZeroPolicy::floor)
        for (Axis a : idx.floored) scores[a] = kFloorEpsilon;
    r.gradient = index_gradient(scores, weights);

    std::vector<double> profile;
    for (const auto& [a, x] : scores) profile.push_back(x);
    const auto j = jaggedness_star(profile, r.index, lambda);
    r.uniformity = j.uniformity;
    r.adjusted = j.adjusted;

    // Delta-method band from per-axis CI half-widths.
    double var = 0.0;
    bool any = false;
    for (const auto& [a, x] : scores) {
        const auto& s = v.axes.at(a);
        const auto& g = r.gradient.at(a);
        if (!s.lo || !s.hi || !g) continue;
        const double h = 0.5 * (*s.hi - *s.lo);
        var += (*g * h) * (*g * h);
        any = true;
    }
    if (any) {
        const double hw = std::sqrt(var);
        r.lo = stats::clip(r.index - hw, 0.0, r.index);
        r.hi = stats::clip(r.index + hw, r.index, 1.0);
    }
    return r;
}

const char* policy_name(ZeroPolicy p) noexcept { return p == ZeroPolicy::strict ? "strict" : "floor"; }

ZeroPolicy parse_policy(const std::string& name) {
    if (name == "strict") return ZeroPolicy::strict;
    if (name == "floor") return ZeroPolicy::floor;
    throw Error(kModule, "unknown zero policy '" + name + "'");
}

json composite_to_json(const CompositeResult& r) {
    auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
    auto keys = [](const std::vector<Axis>& v) {
        json a = json::array();
        for (Axis x : v) a.push_back(axis_key(x));
        return a;
    };
    json grad = json::object();
    for (const auto& [a, g] : r.gradient) grad[axis_key(a)] = opt(g);
    json j{{"index", r.index},
           {"index_floor", opt(r.index_floor)},
           {"floored_axes", keys(r.floored)},
           {"gradient", grad},
           {"uniformity", opt(r.uniformity)},
           {"aai_star", r.adjusted},
           {"preset", r.preset},
           {"zero_policy", policy_name(r.policy)},
           {"ci", {opt(r.lo), opt(r.hi)}},
           {"used_axes", keys(r.used_axes)},
           {"omitted_axes", keys(r.omitted_axes)},
           {"missing_axes", keys(r.missing_axes)}};
    if (r.core)
        j["aai_core"] = {{"value", opt(r.core->value)}, {"eligible", r.core->eligible}, {"reason", r.core->reason}};
    return j;
}

}  // namespace aai::composite
