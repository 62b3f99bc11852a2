#pragma once

#include "cl/dataset/metrics.hpp"
#include "cl/learn/models.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace cl::cli {

// Declarative description of a run. Loaded from a JSON file; command-line
// flags are applied on top.
struct RunConfig {
    std::filesystem::path snippets;      // directory of .java files or manifest CSV
    std::filesystem::path measurements;  // measurements CSV
    std::filesystem::path features;      // feature table CSV
    std::filesystem::path output;        // output directory (or file for extract)
    std::string dataset;                 // dataset_id filter; empty keeps every record

    std::vector<dataset::Metric> metrics{dataset::kAllMetrics.begin(), dataset::kAllMetrics.end()};
    dataset::Setting setting = dataset::Setting::SnippetWise;
    std::vector<dataset::Task> tasks = {dataset::Task::RC};
    std::vector<double> epsilons = {0.0};
    std::vector<learn::Family> families{std::begin(learn::kAllFamilies), std::end(learn::kAllFamilies)};
    std::uint64_t seed = 0;
    std::vector<double> fractions;  // empty = 0.1 .. 1.0
    bool strict = true;

    std::size_t outer_folds = 10;
    std::size_t inner_folds = 5;
    std::map<learn::Family, learn::Grid> grids;  // replaces the default grid of a family
    bool save_models = false;

    bool has_task(dataset::Task t) const;
    learn::ModelSpec spec_for(learn::Family f) const;
};

// SchemaError on unknown keys or wrong types; InvalidArgument on values
// the library would reject (unknown metric, negative epsilon, ...).
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

// Epsilon other than {0} only with an RC task; folds >= 2; fractions in (0, 1].
void validate(const RunConfig& c);

nlohmann::ordered_json to_json(const RunConfig& c);

// "eps0.11", as used in report file names.
std::string epsilon_tag(double eps);

}  // namespace cl::cli
