#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aai/axes.hpp"
#include "aai/battery.hpp"

namespace aai::composite {

enum class ZeroPolicy { strict, floor };

inline constexpr double kFloorEpsilon = 0.01;

struct IndexValue {
    double value = 0.0;
    std::vector<Axis> floored;  // axes substituted by the floor policy
};

// exp((1/W) sum w_x log x) over axes present in both maps with w_x > 0.
[[nodiscard]] IndexValue aai_index(const std::map<Axis, double>& scores, const std::map<Axis, double>& weights,
                                   ZeroPolicy policy = ZeroPolicy::strict, double floor_eps = kFloorEpsilon);

// (w_x / (W x)) * C per axis; nullopt where x = 0.
[[nodiscard]] std::map<Axis, std::optional<double>> index_gradient(const std::map<Axis, double>& scores,
                                                                   const std::map<Axis, double>& weights);

struct Jaggedness {
    std::optional<double> uniformity;  // min / lower median; absent when median = 0
    double adjusted = 0.0;             // AAI * U^lambda
    bool undefined = false;
};

[[nodiscard]] Jaggedness jaggedness_star(std::span<const double> scores, double index, double lambda = 0.5);

inline constexpr std::array<const char*, 6> kCoreDomains{"Gc", "Grw", "Gf", "Gwm", "Gls", "Glr"};

struct CoreScore {
    std::optional<double> value;
    bool eligible = false;
    std::string reason;
};

// Equal-weight geometric mean of the six cognitive-core scores.
[[nodiscard]] CoreScore aai_core(const std::map<std::string, double>& cores, double gamma = 1.0);

struct CompositeResult {
    double index = 0.0;
    std::optional<double> index_floor;  // reported when it differs from the strict value
    std::vector<Axis> floored;
    std::map<Axis, std::optional<double>> gradient;
    std::optional<double> uniformity;
    double adjusted = 0.0;
    std::optional<CoreScore> core;
    std::string preset;
    ZeroPolicy policy = ZeroPolicy::strict;
    std::optional<double> lo;
    std::optional<double> hi;
    std::vector<Axis> used_axes;
    std::vector<Axis> omitted_axes;  // no-data optional axes
    std::vector<Axis> missing_axes;  // no-data required axes
};

// Scores with data drawn from the vector; E is optional and dropped when missing.
[[nodiscard]] CompositeResult compose(const axes::AxisVector& v, const std::map<Axis, double>& weights,
                                      const std::string& preset, ZeroPolicy policy = ZeroPolicy::strict,
                                      double lambda = 0.5);

[[nodiscard]] json composite_to_json(const CompositeResult& r);
[[nodiscard]] const char* policy_name(ZeroPolicy p) noexcept;
[[nodiscard]] ZeroPolicy parse_policy(const std::string& name);

}  // namespace aai::composite
