#pragma once

#include "cl/learn/models.hpp"
#include "cl/learn/preprocess.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cl::learn {

inline constexpr int kModelFormatVersion = 1;

// Training rows after dedup, with the tau ranking fitted on them.
struct Ranked {
    Rows rows;
    FeatureRanking ranking;
    std::size_t n_input = 0;
};

Ranked dedup_and_rank(const Matrix& X, std::span<const int> y);

// Selected, standardized and oversampled training rows.
struct Prepared {
    std::vector<std::size_t> subset;  // ascending column indices
    Standardizer standardizer;        // over the subset columns
    Matrix X;
    std::vector<int> y;
    std::size_t n_dedup = 0;
    std::size_t n_synthetic = 0;
    std::vector<std::string> warnings;

    // Picks the subset from a full-width row and standardizes it.
    std::vector<double> project(std::span<const double> full_row) const;
};

Prepared prepare(const Ranked& ranked, double fraction, const SmoteConfig& smote_config);

struct TrainOptions {
    double fraction = 1.0;
    SmoteConfig smote;
};

class TrainedModel {
public:
    Family family = Family::RF;
    Hyperparams hyperparams;
    std::vector<std::string> input_names;  // full width the model was trained from
    std::vector<std::size_t> subset;
    Standardizer standardizer;
    std::vector<int> labels;
    std::string catalog_version;
    std::uint64_t seed = 0;
    nlohmann::json metadata = nlohmann::json::object();  // task, metric, setting, epsilon, ...
    std::shared_ptr<const Classifier> classifier;

    std::vector<std::string> subset_names() const;

    // Row already restricted to the subset (raw, unstandardized). ArityMismatch otherwise.
    int predict(std::span<const double> subset_row) const;
    std::vector<double> scores(std::span<const double> subset_row) const;

    // Row over all input_names; the subset is picked here.
    int predict_full(std::span<const double> full_row) const;
    std::vector<double> scores_full(std::span<const double> full_row) const;
};

// dedup -> tau ranking -> selection -> standardization -> SMOTE -> fit.
TrainedModel train_model(const Matrix& X, std::span<const int> y, const std::vector<std::string>& names,
                         Family family, const Hyperparams& hp, const TrainOptions& options, std::uint64_t seed);

std::string serialize(const TrainedModel& model);
// VersionMismatch for another format_version; CorruptModel for anything unreadable.
TrainedModel deserialize(std::string_view bytes);

}  // namespace cl::learn
