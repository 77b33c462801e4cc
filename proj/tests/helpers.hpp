#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aai/battery.hpp"

namespace aai::testing {

// Small deterministic generator for property tests (splitmix64).
class Gen {
public:
    explicit Gen(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    std::vector<double> vec(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::uint64_t state_;
};

// Two families of `per_family` tasks, each task requiring one tool category.
inline Battery small_battery(int per_family = 5) {
    Battery b;
    for (int f = 0; f < 2; ++f) {
        FamilySpec fs;
        fs.name = "F" + std::to_string(f);
        fs.threshold = 0.5;
        fs.human_threshold = 0.7;
        for (int k = 0; k < per_family; ++k) {
            TaskSpec t;
            t.id = fs.name + "-t" + std::to_string(k);
            t.family = fs.name;
            t.q_star = 0.6;
            t.required_tools = {"tool" + std::to_string(k % 4)};
            t.reference_prob = 0.5;
            fs.tasks.push_back(t.id);
            b.tasks.push_back(t);
        }
        b.families.push_back(fs);
    }
    b.drift_catalog = {{"none", 0.0}, {"mild", 0.1}};
    b.resource_schema = {{"tokens", 1.0}};
    for (Axis a : kAllAxes) b.anchors[a] = Anchor{0.0, 1.0};
    b.weights = preset_weights("default");
    b.seed_manifest = {"s0"};
    b.proper_scoring_declared = true;
    return b;
}

inline EpisodeTrace trace(const std::string& task, double q, const std::string& drift = "none") {
    EpisodeTrace t;
    t.task_id = task;
    t.seed_id = "s0";
    t.drift_tag = drift;
    t.quality = q;
    return t;
}

}  // namespace aai::testing

#include <functional>

namespace aai::testing {

// Message of the exception thrown by fn, or empty when nothing was thrown.
inline std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace aai::testing
