#pragma once

#include "cl/common/matrix.hpp"
#include "cl/dataset/metrics.hpp"
#include "cl/eval/baselines.hpp"
#include "cl/eval/folds.hpp"
#include "cl/eval/metrics.hpp"
#include "cl/learn/models.hpp"
#include "cl/learn/preprocess.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace cl::eval {

inline const std::vector<double> kAllFractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

struct CvConfig {
    std::size_t outer_folds = 10;
    std::size_t inner_folds = 5;
    std::vector<double> fractions = kAllFractions;
    std::uint64_t seed = 0;
    std::size_t smote_k = 5;
};

// One point of the search: grid entry x feature fraction.
struct Candidate {
    std::size_t grid_index = 0;
    std::size_t fraction_index = 0;
    learn::Hyperparams hyperparams;
    double fraction = 1.0;
};

inline constexpr std::size_t kNoInner = std::numeric_limits<std::size_t>::max();

// Everything a leakage check needs about one model fit. Indices refer to
// rows of the dataset passed to nested_cv. Spans are only valid during the
// callback.
struct FitRecord {
    enum class Stage { Inner, Outer } stage = Stage::Inner;
    std::size_t outer = 0;
    std::size_t inner = kNoInner;
    std::size_t candidate = 0;
    std::span<const std::size_t> train;     // rows handed to preprocessing
    std::span<const std::size_t> kept;      // train rows surviving dedup
    std::span<const std::size_t> evaluated; // rows scored with this fit
    std::span<const double> tau;            // ranking over all columns
    std::span<const std::size_t> subset;
    std::span<const double> mean, sd;       // standardizer over the subset
    std::size_t fitted_rows = 0;            // kept + synthetic
    std::size_t synthetic_rows = 0;
    std::size_t predictions = 0;
};

// Called from worker threads, one call at a time.
using FitObserver = std::function<void(const FitRecord&)>;

struct OuterSelection {
    std::size_t outer = 0;
    std::size_t candidate = 0;  // index into EvaluationReport::candidates
    double inner_wf1 = 0;       // mean validation wF1
    bool ok = false;
};

// One distinct optimal configuration, trained on every outer training set
// and scored on every outer test fold.
struct ConfigResult {
    std::size_t candidate = 0;
    std::vector<std::size_t> chosen_by;  // outer splits that selected it
    ConfusionMatrix pooled;
    MetricReport metrics;
    double ri = 0;                // pooled wF1 against the best baseline
    std::vector<double> fold_wf1;  // per outer test fold
    std::vector<double> fold_ri;
    std::vector<int> predictions;  // per dataset row
    std::vector<std::string> warnings;
    std::string error;  // set when any outer fit failed
};

struct EvaluationReport {
    learn::Family family = learn::Family::RF;
    std::size_t instances = 0;
    dataset::ClassDistribution distribution;
    BaselineReport baselines;
    CvConfig config;
    std::vector<Candidate> candidates;
    std::vector<OuterSelection> selections;
    std::vector<ConfigResult> configs;
    double averaged_wf1 = 0;  // mean pooled wF1 over successful configs
    double ri = 0;
    std::vector<std::string> failures;
    bool ok() const;
};

std::vector<Candidate> candidates_for(const learn::ModelSpec& spec, const std::vector<double>& fractions);

// Outer CV x inner grid search. Model selection, dedup, ranking,
// standardization and SMOTE all see outer-training rows only. Inner
// tasks run concurrently; results are keyed by (outer, inner, candidate)
// and independent of the schedule.
EvaluationReport nested_cv(const Matrix& X, std::span<const int> y, const learn::ModelSpec& spec,
                           const CvConfig& config, const FitObserver& observer = {});
// Same computation on one thread, kept as the reference.
EvaluationReport nested_cv_serial(const Matrix& X, std::span<const int> y, const learn::ModelSpec& spec,
                                  const CvConfig& config, const FitObserver& observer = {});

// Per (config, outer fold) RI values, the samples compared between tasks.
std::vector<double> fold_ri_sample(const EvaluationReport& r);

}  // namespace cl::eval
