#include "cl/cli/config.hpp"

#include "cl/common/error.hpp"
#include "cl/common/io.hpp"
#include "cl/eval/nested_cv.hpp"

#include <cstdio>
#include <set>

namespace cl::cli {

namespace {

using nlohmann::json;

template <class T>
T as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw SchemaError("run config: '" + key + "' has the wrong type");
    }
}

// Accepts a single value or a list.
template <class T>
std::vector<T> list_of(const json& j, const std::string& key) {
    std::vector<T> out;
    if (j.is_array())
        for (const auto& v : j) out.push_back(as<T>(v, key));
    else
        out.push_back(as<T>(j, key));
    if (out.empty()) throw SchemaError("run config: '" + key + "' is empty");
    return out;
}

learn::Grid parse_grid(const json& j, const std::string& key) {
    if (!j.is_object()) throw SchemaError("run config: '" + key + "' must be an object");
    learn::Grid g;
    for (const auto& [name, values] : j.items()) {
        auto& out = g[name];
        for (const auto& v : values.is_array() ? values : json::array({values})) {
            if (v.is_number()) out.push_back(v.get<double>());
            else if (v.is_string()) out.push_back(v.get<std::string>());
            else throw SchemaError("run config: " + key + "." + name + " values must be numbers or strings");
        }
        if (out.empty()) throw SchemaError("run config: " + key + "." + name + " is empty");
    }
    return g;
}

const std::set<std::string> kKeys = {"snippets", "measurements", "features", "output", "dataset",
                                     "metrics",  "setting",      "task",     "epsilon", "families",
                                     "seed",     "fractions",    "strict",   "outer_folds",
                                     "inner_folds", "grids",     "save_models"};

}  // namespace

bool RunConfig::has_task(dataset::Task t) const {
    for (auto x : tasks)
        if (x == t) return true;
    return false;
}

learn::ModelSpec RunConfig::spec_for(learn::Family f) const {
    auto spec = learn::default_spec(f, seed);
    if (auto it = grids.find(f); it != grids.end()) spec.grid = it->second;
    return spec;
}

RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw SchemaError("run config must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!kKeys.count(k)) throw SchemaError("run config: unknown key '" + k + "'");
    RunConfig c;
    auto path = [&](const char* key, std::filesystem::path& out) {
        if (j.contains(key)) out = as<std::string>(j.at(key), key);
    };
    path("snippets", c.snippets);
    path("measurements", c.measurements);
    path("features", c.features);
    path("output", c.output);
    if (j.contains("dataset")) c.dataset = as<std::string>(j.at("dataset"), "dataset");
    if (j.contains("metrics")) {
        c.metrics.clear();
        for (const auto& m : list_of<std::string>(j.at("metrics"), "metrics")) c.metrics.push_back(dataset::parse_metric(m));
    }
    if (j.contains("setting")) c.setting = dataset::parse_setting(as<std::string>(j.at("setting"), "setting"));
    if (j.contains("task")) {
        c.tasks.clear();
        for (const auto& t : list_of<std::string>(j.at("task"), "task")) c.tasks.push_back(dataset::parse_task(t));
    }
    if (j.contains("epsilon")) c.epsilons = list_of<double>(j.at("epsilon"), "epsilon");
    if (j.contains("families")) {
        c.families.clear();
        for (const auto& f : list_of<std::string>(j.at("families"), "families")) c.families.push_back(learn::parse_family(f));
    }
    if (j.contains("seed")) c.seed = as<std::uint64_t>(j.at("seed"), "seed");
    if (j.contains("fractions")) c.fractions = list_of<double>(j.at("fractions"), "fractions");
    if (j.contains("strict")) c.strict = as<bool>(j.at("strict"), "strict");
    if (j.contains("outer_folds")) c.outer_folds = as<std::size_t>(j.at("outer_folds"), "outer_folds");
    if (j.contains("inner_folds")) c.inner_folds = as<std::size_t>(j.at("inner_folds"), "inner_folds");
    if (j.contains("save_models")) c.save_models = as<bool>(j.at("save_models"), "save_models");
    if (j.contains("grids")) {
        if (!j.at("grids").is_object()) throw SchemaError("run config: 'grids' must be an object");
        for (const auto& [fam, g] : j.at("grids").items())
            c.grids[learn::parse_family(fam)] = parse_grid(g, "grids." + fam);
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    const auto text = io::read_text(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return parse_run_config(j);
}

void validate(const RunConfig& c) {
    if (c.metrics.empty()) throw InvalidArgument("no metrics selected");
    if (c.families.empty()) throw InvalidArgument("no model families selected");
    if (c.tasks.empty()) throw InvalidArgument("no task selected");
    if (c.epsilons.empty()) throw InvalidArgument("epsilon list is empty");
    for (double e : c.epsilons)
        if (!(e >= 0)) throw InvalidArgument("epsilon must be >= 0");
    const bool eps_given = c.epsilons.size() != 1 || c.epsilons[0] != 0.0;
    if (eps_given && !c.has_task(dataset::Task::RC)) throw InvalidArgument("epsilon only applies to the RC task");
    for (double f : c.fractions)
        if (!(f > 0 && f <= 1)) throw InvalidArgument("feature fractions must lie in (0, 1]");
    if (c.outer_folds < 2 || c.inner_folds < 2) throw InvalidArgument("fold counts must be at least 2");
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["snippets"] = c.snippets.generic_string();
    j["measurements"] = c.measurements.generic_string();
    j["features"] = c.features.generic_string();
    j["output"] = c.output.generic_string();
    j["dataset"] = c.dataset;
    j["metrics"] = nlohmann::ordered_json::array();
    for (auto m : c.metrics) j["metrics"].push_back(dataset::metric_name(m));
    j["setting"] = dataset::setting_name(c.setting);
    j["task"] = nlohmann::ordered_json::array();
    for (auto t : c.tasks) j["task"].push_back(dataset::task_name(t));
    j["epsilon"] = c.epsilons;
    j["families"] = nlohmann::ordered_json::array();
    for (auto f : c.families) j["families"].push_back(learn::family_name(f));
    j["seed"] = c.seed;
    j["fractions"] = c.fractions.empty() ? eval::kAllFractions : c.fractions;
    j["strict"] = c.strict;
    j["outer_folds"] = c.outer_folds;
    j["inner_folds"] = c.inner_folds;
    auto& grids = j["grids"] = nlohmann::ordered_json::object();
    for (const auto& [f, g] : c.grids) {
        auto& out = grids[std::string(learn::family_name(f))];
        for (const auto& [name, values] : g) {
            out[name] = nlohmann::ordered_json::array();
            for (const auto& v : values) {
                if (const auto* d = std::get_if<double>(&v)) out[name].push_back(*d);
                else out[name].push_back(std::get<std::string>(v));
            }
        }
    }
    j["save_models"] = c.save_models;
    return j;
}

std::string epsilon_tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "eps%g", eps);
    return buf;
}

}  // namespace cl::cli
