#include "aai/battery.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "aai/checksum.hpp"
#include "aai/error.hpp"

namespace aai {

namespace {

constexpr const char* kModule = "battery";

const std::set<std::string> kTraceFields{
    "task_id", "seed_id", "drift_tag", "quality", "uninterrupted_actions", "plan_depth", "cost",
    "timestamp", "human_interventions", "concurrency", "comm_tokens", "verified_actions",
    "episode_flags", "lag_days", "stated_prob", "truth", "incident_counts", "exposure_hours",
    "sim_flag", "tool_categories_used", "recovered_faults", "total_faults", "control_score",
    "repair_hours", "recall_at_k", "agent_id", "run_id", "policy_id", "schema_hash"};

const std::set<std::string> kEventFields{
    "event_id", "window_id", "agent_id", "run_id", "c_rev_pre", "c_rev_post", "c_ctrl_pre",
    "c_ctrl_post", "stage_autonomy", "ablation_result", "c_ctrl_abl", "change_kind",
    "holdout_matched", "did_ci", "holdout_did", "artifacts"};

[[noreturn]] void fail(const std::string& msg, const std::string& locus = {}) {
    throw Error(kModule, msg, locus);
}

template <typename T>
T required(const json& j, const char* key, const std::string& locus) {
    if (!j.contains(key) || j.at(key).is_null()) fail(std::string("missing field '") + key + "'", locus);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(std::string("field '") + key + "' has the wrong type", locus);
    }
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key, const std::string& locus) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(std::string("field '") + key + "' has the wrong type", locus);
    }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& locus) {
    auto v = optional_field<T>(j, key, locus);
    return v ? *v : fallback;
}

void in_unit(double v, const char* what, const std::string& locus, bool open = false) {
    const bool ok = open ? (v > 0.0 && v < 1.0) : (v >= 0.0 && v <= 1.0);
    if (!ok || std::isnan(v))
        fail(std::string(what) + " must lie in " + (open ? "(0,1)" : "[0,1]"), locus);
}

void warn_unknown(const json& j, const std::set<std::string>& known, const std::string& locus,
                  IngestWarnings* warnings) {
    if (!warnings) return;
    for (const auto& [key, _] : j.items()) {
        if (known.count(key) || warnings->reported.count(key)) continue;
        warnings->reported.insert(key);
        warnings->messages.push_back(locus + ": unknown field '" + key + "' ignored");
    }
}

template <typename F>
void for_each_jsonl(const std::string& path, F&& fn) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string locus = path + ":" + std::to_string(lineno);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            fail(std::string("malformed JSON: ") + e.what(), locus);
        }
        if (!j.is_object()) fail("record is not a JSON object", locus);
        fn(j, locus);
    }
}

}  // namespace

const char* axis_key(Axis a) noexcept {
    switch (a) {
        case Axis::A: return "A";
        case Axis::G: return "G";
        case Axis::P: return "P";
        case Axis::M: return "M";
        case Axis::T: return "T";
        case Axis::R: return "R";
        case Axis::S: return "S";
        case Axis::E: return "E";
        case Axis::W: return "W";
        case Axis::Dollar: return "$";
    }
    return "?";
}

Axis parse_axis(const std::string& key) {
    for (Axis a : kAllAxes)
        if (key == axis_key(a)) return a;
    if (key == "Dollar" || key == "D$") return Axis::Dollar;
    fail("unknown axis '" + key + "'");
}

const TaskSpec* Battery::find_task(const std::string& id) const {
    for (const auto& t : tasks)
        if (t.id == id) return &t;
    return nullptr;
}

const FamilySpec* Battery::find_family(const std::string& name) const {
    for (const auto& f : families)
        if (f.name == name) return &f;
    return nullptr;
}

const DriftTag* Battery::find_drift(const std::string& name) const {
    for (const auto& d : drift_catalog)
        if (d.name == name) return &d;
    return nullptr;
}

std::set<std::string> Battery::required_tool_set() const {
    std::set<std::string> out;
    for (const auto& t : tasks) out.insert(t.required_tools.begin(), t.required_tools.end());
    return out;
}

Anchor Battery::anchor(Axis a) const {
    auto it = anchors.find(a);
    return it == anchors.end() ? Anchor{} : it->second;
}

std::map<Axis, double> preset_weights(const std::string& name) {
    std::map<Axis, double> w;
    for (Axis a : kAllAxes) w[a] = 1.0;
    if (name == "default") {
        w[Axis::R] = 1.5;
        w[Axis::E] = 0.5;
    } else if (name == "software") {
        w[Axis::P] = 1.25;
        w[Axis::M] = 1.25;
        w[Axis::T] = 1.25;
        w[Axis::R] = 1.5;
        w[Axis::E] = 0.0;
    } else if (name == "robotics") {
        w[Axis::P] = 1.1;
        w[Axis::T] = 1.1;
        w[Axis::R] = 1.5;
        w[Axis::E] = 1.25;
    } else {
        fail("unknown weight preset '" + name + "'");
    }
    return w;
}

Battery load_battery(const json& doc) {
    const json& j = doc.contains("battery") ? doc.at("battery") : doc;
    if (!j.is_object()) fail("battery config is not an object");
    const std::string loc = "battery";
    Battery b;

    for (const auto& t : required<json>(j, "tasks", loc)) {
        TaskSpec ts;
        ts.id = required<std::string>(t, "id", loc);
        ts.family = field_or<std::string>(t, "family", "", loc);
        ts.q_star = required<double>(t, "q_star", loc);
        ts.required_tools = field_or<std::vector<std::string>>(t, "required_tools", {}, loc);
        std::sort(ts.required_tools.begin(), ts.required_tools.end());
        ts.reference_prob = optional_field<double>(t, "reference_prob", loc);
        in_unit(ts.q_star, ("q_star of task " + ts.id).c_str(), loc, true);
        if (ts.reference_prob) in_unit(*ts.reference_prob, "reference_prob", loc);
        if (b.find_task(ts.id)) fail("duplicate task id '" + ts.id + "'");
        b.tasks.push_back(std::move(ts));
    }
    if (b.tasks.empty()) fail("battery has no tasks");

    for (const auto& f : required<json>(j, "families", loc)) {
        FamilySpec fs;
        fs.name = required<std::string>(f, "name", loc);
        fs.threshold = required<double>(f, "threshold", loc);
        fs.human_threshold = optional_field<double>(f, "human_threshold", loc);
        fs.tasks = field_or<std::vector<std::string>>(f, "tasks", {}, loc);
        in_unit(fs.threshold, ("threshold of family " + fs.name).c_str(), loc, true);
        if (fs.human_threshold) in_unit(*fs.human_threshold, "human_threshold", loc, true);
        if (b.find_family(fs.name)) fail("duplicate family '" + fs.name + "'");
        b.families.push_back(std::move(fs));
    }

    // Partition: explicit family task lists take precedence; tasks may also name their family.
    std::map<std::string, std::string> owner;
    for (const auto& f : b.families)
        for (const auto& id : f.tasks) {
            if (!b.find_task(id)) fail("family '" + f.name + "' lists unknown task '" + id + "'");
            if (owner.count(id)) fail("task '" + id + "' belongs to more than one family");
            owner[id] = f.name;
        }
    for (auto& t : b.tasks) {
        auto it = owner.find(t.id);
        if (it != owner.end()) {
            if (!t.family.empty() && t.family != it->second)
                fail("task '" + t.id + "' names family '" + t.family + "' but is listed under '" +
                     it->second + "'");
            t.family = it->second;
            continue;
        }
        if (t.family.empty()) fail("task '" + t.id + "' has no family");
        auto* fam = const_cast<FamilySpec*>(b.find_family(t.family));
        if (!fam) fail("task '" + t.id + "' names unknown family '" + t.family + "'");
        fam->tasks.push_back(t.id);
    }
    for (auto& f : b.families) std::sort(f.tasks.begin(), f.tasks.end());

    b.min_family_size = field_or<int>(j, "min_family_size", 5, loc);
    if (b.min_family_size < 5) fail("min_family_size must be at least 5");
    for (const auto& f : b.families)
        if (static_cast<int>(f.tasks.size()) < b.min_family_size)
            fail("family too small: '" + f.name + "' has " + std::to_string(f.tasks.size()) +
                 " tasks, minimum " + std::to_string(b.min_family_size));

    for (const auto& d : required<json>(j, "drift_catalog", loc)) {
        DriftTag tag{required<std::string>(d, "name", loc), required<double>(d, "magnitude", loc)};
        if (b.find_drift(tag.name)) fail("duplicate drift tag '" + tag.name + "'");
        b.drift_catalog.push_back(tag);
    }
    if (b.drift_catalog.empty()) fail("drift catalog is empty");

    b.resource_schema = field_or<std::map<std::string, double>>(j, "resource_schema", {}, loc);
    for (const auto& [k, v] : b.resource_schema)
        if (!(v >= 0.0)) fail("resource schema cost for '" + k + "' must be nonnegative");

    for (Axis a : kAllAxes) b.anchors[a] = Anchor{};
    if (j.contains("anchors")) {
        for (const auto& [k, v] : j.at("anchors").items()) {
            if (!v.is_array() || v.size() != 2) fail("anchor for '" + k + "' must be [L, U]");
            Anchor an{v[0].get<double>(), v[1].get<double>()};
            if (!(an.lo < an.hi)) fail("degenerate anchor for axis " + k + ": L must be < U");
            b.anchors[parse_axis(k)] = an;
        }
    }

    b.preset = field_or<std::string>(j, "preset", "default", loc);
    b.weights = preset_weights(b.preset);
    if (j.contains("weights"))
        for (const auto& [k, v] : j.at("weights").items()) b.weights[parse_axis(k)] = v.get<double>();
    for (const auto& [a, w] : b.weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            fail(std::string("weight for axis ") + axis_key(a) + " must be nonnegative");

    b.seed_manifest = field_or<std::vector<std::string>>(j, "seed_manifest", {}, loc);
    b.horizon_cap = field_or<int>(j, "horizon_cap", b.horizon_cap, loc);
    b.depth_anchor = field_or<int>(j, "depth_anchor", b.depth_anchor, loc);
    b.lambda_max = field_or<double>(j, "lambda_max", b.lambda_max, loc);
    b.recall_k = field_or<int>(j, "recall_k", b.recall_k, loc);
    b.recall_at_k = optional_field<double>(j, "recall_at_k", loc);
    b.size_prior_max = field_or<double>(j, "size_prior_max", b.size_prior_max, loc);
    b.revision_scale = field_or<double>(j, "revision_scale", b.revision_scale, loc);
    b.stage_weights = field_or<std::array<double, 3>>(j, "stage_weights", b.stage_weights, loc);
    b.comm_penalty_weights = field_or<std::array<double, 2>>(j, "comm_penalty_weights", b.comm_penalty_weights, loc);
    b.loop_thresholds = field_or<std::array<int, 2>>(j, "loop_thresholds", b.loop_thresholds, loc);
    b.ss_severity_weights = field_or<std::array<double, 4>>(j, "ss_severity_weights", b.ss_severity_weights, loc);
    b.proper_scoring_declared = field_or<bool>(j, "proper_scoring_declared", false, loc);
    b.target_quality = field_or<double>(j, "target_quality", b.target_quality, loc);
    b.cost_per_hour = optional_field<double>(j, "cost_per_hour", loc);
    b.physical_cost_per_hour = optional_field<double>(j, "physical_cost_per_hour", loc);

    if (b.horizon_cap < 1) fail("horizon_cap must be >= 1");
    if (b.depth_anchor < 1) fail("depth_anchor must be >= 1");
    if (!(b.lambda_max > 0.0)) fail("lambda_max must be positive");
    if (b.recall_k < 1) fail("recall_k must be >= 1");
    if (b.recall_at_k) in_unit(*b.recall_at_k, "recall_at_k", loc);
    if (!(b.size_prior_max > 0.0)) fail("size_prior_max must be positive");
    if (!(b.revision_scale > 0.0)) fail("revision_scale must be positive");
    double sw = 0.0;
    for (double w : b.stage_weights) {
        if (w < 0.0) fail("stage weights must be nonnegative");
        sw += w;
    }
    if (std::abs(sw - 1.0) > 1e-9) fail("stage weights must sum to 1");
    for (double w : b.ss_severity_weights)
        if (w < 0.0) fail("severity weights must be nonnegative");
    in_unit(b.target_quality, "target_quality", loc);
    if (b.cost_per_hour && !(*b.cost_per_hour > 0.0)) fail("cost_per_hour must be positive");
    return b;
}

json battery_to_json(const Battery& b) {
    json j;
    j["tasks"] = json::array();
    for (const auto& t : b.tasks) {
        json tj{{"id", t.id}, {"family", t.family}, {"q_star", t.q_star}, {"required_tools", t.required_tools}};
        if (t.reference_prob) tj["reference_prob"] = *t.reference_prob;
        j["tasks"].push_back(tj);
    }
    j["families"] = json::array();
    for (const auto& f : b.families) {
        json fj{{"name", f.name}, {"threshold", f.threshold}, {"tasks", f.tasks}};
        if (f.human_threshold) fj["human_threshold"] = *f.human_threshold;
        j["families"].push_back(fj);
    }
    j["drift_catalog"] = json::array();
    for (const auto& d : b.drift_catalog) j["drift_catalog"].push_back({{"name", d.name}, {"magnitude", d.magnitude}});
    j["resource_schema"] = b.resource_schema;
    j["anchors"] = json::object();
    for (const auto& [a, an] : b.anchors) j["anchors"][axis_key(a)] = {an.lo, an.hi};
    j["preset"] = b.preset;
    j["weights"] = json::object();
    for (const auto& [a, w] : b.weights) j["weights"][axis_key(a)] = w;
    j["min_family_size"] = b.min_family_size;
    j["seed_manifest"] = b.seed_manifest;
    j["horizon_cap"] = b.horizon_cap;
    j["depth_anchor"] = b.depth_anchor;
    j["lambda_max"] = b.lambda_max;
    j["recall_k"] = b.recall_k;
    if (b.recall_at_k) j["recall_at_k"] = *b.recall_at_k;
    j["size_prior_max"] = b.size_prior_max;
    j["revision_scale"] = b.revision_scale;
    j["stage_weights"] = b.stage_weights;
    j["comm_penalty_weights"] = b.comm_penalty_weights;
    j["loop_thresholds"] = b.loop_thresholds;
    j["ss_severity_weights"] = b.ss_severity_weights;
    j["proper_scoring_declared"] = b.proper_scoring_declared;
    j["target_quality"] = b.target_quality;
    if (b.cost_per_hour) j["cost_per_hour"] = *b.cost_per_hour;
    if (b.physical_cost_per_hour) j["physical_cost_per_hour"] = *b.physical_cost_per_hour;
    return j;
}

std::string schema_hash(const std::map<std::string, double>& schema) {
    return sha256_hex(json(schema).dump());
}

bool RevisionEvent::complete() const {
    return c_rev_pre && c_rev_post && c_ctrl_pre && c_ctrl_post;
}

ResourceLedger::ResourceLedger(double origin, std::vector<LedgerRecord> records,
                               const std::map<std::string, double>& schema)
    : origin_(origin) {
    std::stable_sort(records.begin(), records.end(),
                     [](const LedgerRecord& a, const LedgerRecord& b) { return a.timestamp < b.timestamp; });
    double total = 0.0;
    for (const auto& r : records) {
        if (!(r.timestamp > origin)) fail("ledger record at or before the origin");
        if (!(r.quantity >= 0.0)) fail("ledger quantity must be nonnegative");
        auto it = schema.find(r.kind);
        if (it == schema.end()) fail("ledger event kind '" + r.kind + "' not in resource schema");
        total += it->second * r.quantity;
        times_.push_back(r.timestamp);
        running_.push_back(total);
    }
}

double ResourceLedger::cumulative(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return running_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

EpisodeTrace parse_trace(const json& j, const std::string& locus, IngestWarnings* warnings) {
    warn_unknown(j, kTraceFields, locus, warnings);
    EpisodeTrace t;
    t.locus = locus;
    t.task_id = required<std::string>(j, "task_id", locus);
    t.seed_id = required<std::string>(j, "seed_id", locus);
    t.drift_tag = required<std::string>(j, "drift_tag", locus);
    t.quality = required<double>(j, "quality", locus);
    t.uninterrupted_actions = required<long>(j, "uninterrupted_actions", locus);
    t.plan_depth = required<long>(j, "plan_depth", locus);
    t.cost = required<double>(j, "cost", locus);
    t.timestamp = required<double>(j, "timestamp", locus);
    t.human_interventions = field_or<double>(j, "human_interventions", 0.0, locus);
    t.concurrency = field_or<long>(j, "concurrency", 1, locus);
    t.comm_tokens = field_or<long>(j, "comm_tokens", 0, locus);
    t.verified_actions = field_or<long>(j, "verified_actions", 0, locus);
    if (j.contains("episode_flags")) {
        const auto& f = j.at("episode_flags");
        t.flags.unresolved_conflict = field_or<bool>(f, "unresolved_conflict", false, locus);
        t.flags.loop = field_or<bool>(f, "loop", false, locus);
        t.flags.chatter = field_or<bool>(f, "chatter", false, locus);
        t.flags.mode_collapse = field_or<bool>(f, "mode_collapse", false, locus);
    }
    t.lag_days = optional_field<double>(j, "lag_days", locus);
    t.stated_prob = optional_field<double>(j, "stated_prob", locus);
    t.truth = optional_field<int>(j, "truth", locus);
    if (j.contains("incident_counts") && !j.at("incident_counts").is_null()) {
        const auto& c = j.at("incident_counts");
        t.incident_counts = IncidentCounts{field_or<long>(c, "nm", 0, locus), field_or<long>(c, "min", 0, locus),
                                           field_or<long>(c, "maj", 0, locus), field_or<long>(c, "crit", 0, locus)};
    }
    t.exposure_hours = optional_field<double>(j, "exposure_hours", locus);
    t.sim_flag = field_or<bool>(j, "sim_flag", false, locus);
    t.tool_categories_used = field_or<std::vector<std::string>>(j, "tool_categories_used", {}, locus);
    t.recovered_faults = optional_field<long>(j, "recovered_faults", locus);
    t.total_faults = optional_field<long>(j, "total_faults", locus);
    t.control_score = optional_field<double>(j, "control_score", locus);
    t.repair_hours = optional_field<double>(j, "repair_hours", locus);
    t.recall_at_k = optional_field<double>(j, "recall_at_k", locus);
    t.agent_id = field_or<std::string>(j, "agent_id", "", locus);
    t.run_id = field_or<std::string>(j, "run_id", "", locus);
    t.policy_id = field_or<std::string>(j, "policy_id", "", locus);
    t.schema_hash = field_or<std::string>(j, "schema_hash", "", locus);

    in_unit(t.quality, "quality", locus);
    if (t.uninterrupted_actions < 0 || t.plan_depth < 0 || t.comm_tokens < 0 || t.verified_actions < 0)
        fail("counts must be nonnegative", locus);
    if (!(t.cost >= 0.0) || !(t.human_interventions >= 0.0)) fail("cost and interventions must be nonnegative", locus);
    if (t.concurrency < 1) fail("concurrency must be >= 1", locus);
    if (t.lag_days && !(*t.lag_days >= 0.0)) fail("lag_days must be nonnegative", locus);
    if (t.stated_prob) {
        in_unit(*t.stated_prob, "stated_prob", locus);
        if (!t.truth) fail("stated_prob present without truth", locus);
    }
    if (t.truth && *t.truth != 0 && *t.truth != 1) fail("truth must be 0 or 1", locus);
    if (t.incident_counts) {
        const auto& c = *t.incident_counts;
        if (c.nm < 0 || c.minor < 0 || c.major < 0 || c.critical < 0) fail("incident counts must be nonnegative", locus);
    }
    if (t.exposure_hours && !(*t.exposure_hours >= 0.0)) fail("exposure_hours must be nonnegative", locus);
    if (t.recovered_faults && *t.recovered_faults < 0) fail("recovered_faults must be nonnegative", locus);
    if (t.total_faults && *t.total_faults < 0) fail("total_faults must be nonnegative", locus);
    if (t.recovered_faults && t.total_faults && *t.recovered_faults > *t.total_faults)
        fail("recovered_faults exceeds total_faults", locus);
    if (t.control_score) in_unit(*t.control_score, "control_score", locus);
    if (t.recall_at_k) in_unit(*t.recall_at_k, "recall_at_k", locus);
    std::sort(t.tool_categories_used.begin(), t.tool_categories_used.end());
    t.tool_categories_used.erase(std::unique(t.tool_categories_used.begin(), t.tool_categories_used.end()),
                                 t.tool_categories_used.end());
    return t;
}

json trace_to_json(const EpisodeTrace& t) {
    json j{{"task_id", t.task_id},
           {"seed_id", t.seed_id},
           {"drift_tag", t.drift_tag},
           {"quality", t.quality},
           {"uninterrupted_actions", t.uninterrupted_actions},
           {"plan_depth", t.plan_depth},
           {"cost", t.cost},
           {"timestamp", t.timestamp},
           {"human_interventions", t.human_interventions},
           {"concurrency", t.concurrency},
           {"comm_tokens", t.comm_tokens},
           {"verified_actions", t.verified_actions},
           {"episode_flags",
            {{"unresolved_conflict", t.flags.unresolved_conflict},
             {"loop", t.flags.loop},
             {"chatter", t.flags.chatter},
             {"mode_collapse", t.flags.mode_collapse}}},
           {"sim_flag", t.sim_flag},
           {"tool_categories_used", t.tool_categories_used}};
    if (t.lag_days) j["lag_days"] = *t.lag_days;
    if (t.stated_prob) j["stated_prob"] = *t.stated_prob;
    if (t.truth) j["truth"] = *t.truth;
    if (t.incident_counts) {
        const auto& c = *t.incident_counts;
        j["incident_counts"] = {{"nm", c.nm}, {"min", c.minor}, {"maj", c.major}, {"crit", c.critical}};
    }
    if (t.exposure_hours) j["exposure_hours"] = *t.exposure_hours;
    if (t.recovered_faults) j["recovered_faults"] = *t.recovered_faults;
    if (t.total_faults) j["total_faults"] = *t.total_faults;
    if (t.control_score) j["control_score"] = *t.control_score;
    if (t.repair_hours) j["repair_hours"] = *t.repair_hours;
    if (t.recall_at_k) j["recall_at_k"] = *t.recall_at_k;
    if (!t.agent_id.empty()) j["agent_id"] = t.agent_id;
    if (!t.run_id.empty()) j["run_id"] = t.run_id;
    if (!t.policy_id.empty()) j["policy_id"] = t.policy_id;
    if (!t.schema_hash.empty()) j["schema_hash"] = t.schema_hash;
    return j;
}

std::vector<EpisodeTrace> load_traces(const std::string& path, IngestWarnings* warnings) {
    std::vector<EpisodeTrace> out;
    for_each_jsonl(path, [&](const json& j, const std::string& locus) { out.push_back(parse_trace(j, locus, warnings)); });
    return out;
}

RevisionEvent parse_event(const json& j, const std::string& locus) {
    RevisionEvent e;
    e.locus = locus;
    e.event_id = required<std::string>(j, "event_id", locus);
    e.window_id = field_or<std::string>(j, "window_id", "", locus);
    e.agent_id = field_or<std::string>(j, "agent_id", "", locus);
    e.run_id = field_or<std::string>(j, "run_id", "", locus);
    e.c_rev_pre = optional_field<double>(j, "c_rev_pre", locus);
    e.c_rev_post = optional_field<double>(j, "c_rev_post", locus);
    e.c_ctrl_pre = optional_field<double>(j, "c_ctrl_pre", locus);
    e.c_ctrl_post = optional_field<double>(j, "c_ctrl_post", locus);
    e.stage_autonomy = required<std::array<double, 3>>(j, "stage_autonomy", locus);
    e.ablation_result = optional_field<double>(j, "ablation_result", locus);
    e.c_ctrl_abl = optional_field<double>(j, "c_ctrl_abl", locus);
    e.change_kind = field_or<std::string>(j, "change_kind", "patch", locus);
    e.holdout_matched = field_or<bool>(j, "holdout_matched", true, locus);
    e.did_ci = optional_field<std::array<double, 2>>(j, "did_ci", locus);
    e.holdout_did = field_or<std::vector<double>>(j, "holdout_did", {}, locus);
    e.artifacts = field_or<std::map<std::string, std::string>>(j, "artifacts", {}, locus);
    for (const auto& v : {e.c_rev_pre, e.c_rev_post, e.c_ctrl_pre, e.c_ctrl_post, e.ablation_result, e.c_ctrl_abl})
        if (v) in_unit(*v, "capability", locus);
    for (double a : e.stage_autonomy) in_unit(a, "stage autonomy", locus);
    static const std::set<std::string> kinds{"tool-family", "patch", "route", "memory"};
    if (!kinds.count(e.change_kind)) fail("unknown change_kind '" + e.change_kind + "'", locus);
    if (e.did_ci && (*e.did_ci)[0] > (*e.did_ci)[1]) fail("did_ci lower bound exceeds upper bound", locus);
    return e;
}

json event_to_json(const RevisionEvent& e) {
    json j{{"event_id", e.event_id}, {"stage_autonomy", e.stage_autonomy}, {"change_kind", e.change_kind},
           {"holdout_matched", e.holdout_matched}};
    if (!e.window_id.empty()) j["window_id"] = e.window_id;
    if (!e.agent_id.empty()) j["agent_id"] = e.agent_id;
    if (!e.run_id.empty()) j["run_id"] = e.run_id;
    if (e.c_rev_pre) j["c_rev_pre"] = *e.c_rev_pre;
    if (e.c_rev_post) j["c_rev_post"] = *e.c_rev_post;
    if (e.c_ctrl_pre) j["c_ctrl_pre"] = *e.c_ctrl_pre;
    if (e.c_ctrl_post) j["c_ctrl_post"] = *e.c_ctrl_post;
    if (e.ablation_result) j["ablation_result"] = *e.ablation_result;
    if (e.c_ctrl_abl) j["c_ctrl_abl"] = *e.c_ctrl_abl;
    if (e.did_ci) j["did_ci"] = *e.did_ci;
    if (!e.holdout_did.empty()) j["holdout_did"] = e.holdout_did;
    if (!e.artifacts.empty()) j["artifacts"] = e.artifacts;
    return j;
}

std::vector<RevisionEvent> load_events(const std::string& path, IngestWarnings* warnings) {
    std::vector<RevisionEvent> out;
    for_each_jsonl(path, [&](const json& j, const std::string& locus) {
        warn_unknown(j, kEventFields, locus, warnings);
        out.push_back(parse_event(j, locus));
    });
    return out;
}

std::vector<Checkpoint> load_checkpoints(const std::string& path) {
    std::vector<Checkpoint> out;
    for_each_jsonl(path, [&](const json& j, const std::string& locus) {
        Checkpoint c;
        c.locus = locus;
        c.family = field_or<std::string>(j, "family", "all", locus);
        c.agent_id = field_or<std::string>(j, "agent_id", "", locus);
        c.t = required<double>(j, "t", locus);
        c.R = optional_field<double>(j, "R", locus);
        c.C = required<double>(j, "C", locus);
        in_unit(c.C, "C", locus);
        out.push_back(std::move(c));
    });
    return out;
}

json checkpoint_to_json(const Checkpoint& c) {
    json j{{"family", c.family}, {"t", c.t}, {"C", c.C}};
    if (!c.agent_id.empty()) j["agent_id"] = c.agent_id;
    if (c.R) j["R"] = *c.R;
    return j;
}

std::vector<PolicyRun> load_policy_runs(const std::string& path) {
    std::vector<PolicyRun> out;
    for_each_jsonl(path, [&](const json& j, const std::string& locus) {
        PolicyRun r;
        r.policy_id = required<std::string>(j, "policy_id", locus);
        r.agent_id = field_or<std::string>(j, "agent_id", "", locus);
        r.mean_quality = required<double>(j, "mean_quality", locus);
        r.mean_interventions = required<double>(j, "mean_interventions", locus);
        in_unit(r.mean_quality, "mean_quality", locus);
        if (!(r.mean_interventions >= 0.0)) fail("mean_interventions must be nonnegative", locus);
        out.push_back(std::move(r));
    });
    return out;
}

std::vector<PolicyRun> policy_runs_from_traces(std::span<const EpisodeTrace* const> traces) {
    struct Acc {
        double q = 0.0, h = 0.0;
        std::size_t n = 0;
    };
    std::map<std::pair<std::string, std::string>, Acc> acc;
    for (const auto* t : traces) {
        if (t->policy_id.empty()) continue;
        auto& a = acc[{t->agent_id, t->policy_id}];
        a.q += t->quality;
        a.h += t->human_interventions;
        ++a.n;
    }
    std::vector<PolicyRun> out;
    for (const auto& [key, a] : acc) {
        const double n = static_cast<double>(a.n);
        out.push_back({key.second, key.first, a.q / n, a.h / n});
    }
    return out;
}

void check_trace(const EpisodeTrace& t, const Battery& b) {
    if (!b.find_task(t.task_id)) fail("trace references unknown task '" + t.task_id + "'", t.locus);
    if (!b.find_drift(t.drift_tag)) fail("drift tag '" + t.drift_tag + "' not in drift catalog", t.locus);
}

bool AdmissibilityReport::pass() const {
    return std::all_of(items.begin(), items.end(), [](const AdmissibilityItem& i) { return i.pass; });
}

AdmissibilityReport validate_admissibility(const Battery& b, std::span<const EpisodeTrace> traces) {
    AdmissibilityReport r;
    r.items.push_back({"a", b.proper_scoring_declared, true,
                       b.proper_scoring_declared ? "proper scoring declared in config"
                                                 : "proper scoring not declared in config"});

    std::string small;
    for (const auto& f : b.families)
        if (static_cast<int>(f.tasks.size()) < b.min_family_size) small += (small.empty() ? "" : ", ") + f.name;
    r.items.push_back({"b", small.empty(), false,
                       small.empty() ? "all families have >= " + std::to_string(b.min_family_size) + " tasks"
                                     : "families below minimum size: " + small});

    std::set<double> seen_mag;
    for (const auto& t : traces)
        if (const auto* d = b.find_drift(t.drift_tag)) seen_mag.insert(d->magnitude);
    std::string missing;
    for (const auto& d : b.drift_catalog)
        if (!seen_mag.count(d.magnitude)) missing += (missing.empty() ? "" : ", ") + d.name;
    r.items.push_back({"c", missing.empty(), false,
                       missing.empty() ? "every cataloged drift magnitude appears in traces"
                                       : "drift magnitudes without traces: " + missing});

    const std::string config_hash = schema_hash(b.resource_schema);
    std::set<std::string> hashes;
    for (const auto& t : traces)
        if (!t.schema_hash.empty()) hashes.insert(t.schema_hash);
    bool d_pass = hashes.size() <= 1 && (hashes.empty() || *hashes.begin() == config_hash);
    std::string d_msg = hashes.empty() ? "single schema " + config_hash.substr(0, 16) + " (config)"
                        : hashes.size() > 1 ? std::to_string(hashes.size()) + " schema hashes in one window"
                        : d_pass ? "single schema hash matches config"
                                 : "trace schema hash differs from config";
    r.items.push_back({"d", d_pass, false, d_msg});

    std::set<std::string> manifest(b.seed_manifest.begin(), b.seed_manifest.end());
    std::size_t undisclosed = 0;
    std::string first;
    for (const auto& t : traces)
        if (!manifest.count(t.seed_id)) {
            if (undisclosed++ == 0) first = t.seed_id;
        }
    r.items.push_back({"e", undisclosed == 0, false,
                       undisclosed == 0 ? "all trace seeds disclosed in manifest"
                                        : std::to_string(undisclosed) + " traces with undisclosed seeds (first '" +
                                              first + "')"});
    return r;
}

json admissibility_to_json(const AdmissibilityReport& r) {
    json j{{"pass", r.pass()}, {"items", json::array()}};
    for (const auto& i : r.items)
        j["items"].push_back({{"item", i.key}, {"pass", i.pass}, {"declared", i.declared}, {"message", i.message}});
    return j;
}

std::vector<FamilyAggregate> family_aggregate(std::span<const EpisodeTrace* const> traces, const Battery& b,
                                              bool human) {
    std::map<std::string, std::pair<double, std::size_t>> acc;
    for (const auto* t : traces) {
        const auto* task = b.find_task(t->task_id);
        if (!task) fail("trace references unknown task '" + t->task_id + "'", t->locus);
        auto& a = acc[task->family];
        a.first += t->quality;
        ++a.second;
    }
    std::vector<FamilyAggregate> out;
    for (const auto& f : b.families) {
        FamilyAggregate agg;
        agg.family = f.name;
        auto it = acc.find(f.name);
        if (it != acc.end() && it->second.second > 0) {
            agg.has_data = true;
            agg.count = it->second.second;
            agg.mean_quality = it->second.first / static_cast<double>(agg.count);
            double tau = f.threshold;
            if (human) {
                if (!f.human_threshold) fail("family '" + f.name + "' has no human_threshold");
                tau = *f.human_threshold;
            }
            agg.covered = agg.mean_quality >= tau;
        }
        out.push_back(agg);
    }
    return out;
}

std::vector<const EpisodeTrace*> refs(std::span<const EpisodeTrace> traces) {
    std::vector<const EpisodeTrace*> out;
    out.reserve(traces.size());
    for (const auto& t : traces) out.push_back(&t);
    return out;
}

}  // namespace aai
