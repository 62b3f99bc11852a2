#pragma once

#include "cl/cli/config.hpp"
#include "cl/dataset/build.hpp"
#include "cl/extract/corpus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cl::cli {

// One dataset to build: metric x task (x epsilon for RC).
struct Job {
    dataset::Metric metric = dataset::Metric::AU;
    dataset::Task task = dataset::Task::RC;
    double epsilon = 0.0;
    dataset::Setting setting = dataset::Setting::SnippetWise;

    // "RC-snippet-wise-AU-eps0.11", "AC-developer-wise-PBU"
    std::string stem() const;
};

std::vector<Job> expand_jobs(const RunConfig& c);

// Reason the job cannot run at all, if any.
std::optional<std::string> rejection(const Job& job);

struct Inputs {
    extract::FeatureTable features;
    dataset::MeasurementTable measurements;
};

// Reads features and measurements, restricted to config.dataset.
Inputs load_inputs(const RunConfig& c);

}  // namespace cl::cli
