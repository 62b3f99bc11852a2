#pragma once

#include "cl/common/matrix.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cl::learn {

// Indices of the rows kept by dedup: first occurrence of each identical
// (features, label) pair. Same features with another label is kept.
std::vector<std::size_t> dedup_indices(const Matrix& X, std::span<const int> y);

struct Rows {
    Matrix X;
    std::vector<int> y;
};

Rows dedup_training(const Matrix& X, std::span<const int> y);

// z = (x - mean) / sd with the population sd; sd 0 is stored as 1.
class Standardizer {
public:
    Standardizer() = default;
    Standardizer(std::vector<double> mean, std::vector<double> sd);

    // EmptyTraining on zero rows.
    static Standardizer fit(const Matrix& X);

    Matrix transform(const Matrix& X) const;
    void transform_row(std::span<const double> in, std::span<double> out) const;

    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& sd() const { return sd_; }
    std::size_t width() const { return mean_.size(); }

private:
    std::vector<double> mean_;
    std::vector<double> sd_;
};

// Tie-corrected tau-b, O(n log n). 0 when either side is all ties.
// TooFewSamples below two rows.
double kendall_tau_b(std::span<const double> x, std::span<const int> y);

struct FeatureRanking {
    std::vector<double> tau;           // per column
    std::vector<std::size_t> order;    // |tau| descending, ties by column index
};

// Columns are ranked concurrently; the serial twin gives identical output.
FeatureRanking rank_features(const Matrix& X, std::span<const int> y);
FeatureRanking rank_features_serial(const Matrix& X, std::span<const int> y);

// ceil(fraction * d), at least 1. InvalidArgument outside (0, 1].
std::size_t selected_count(std::size_t d, double fraction);

// Top columns by |tau|, returned in original column order.
std::vector<std::size_t> select_features(const FeatureRanking& ranking, double fraction);

struct SmoteConfig {
    std::size_t k = 5;
    std::uint64_t seed = 0;
    // A class with one row cannot be interpolated. When set, it is
    // duplicated and a warning is recorded; otherwise TooFewSamples.
    bool duplicate_singletons = true;
};

struct SmoteResult {
    Matrix X;  // originals first, in input order, then synthetic rows
    std::vector<int> y;
    std::size_t n_original = 0;
    std::vector<std::string> warnings;
};

// Oversamples every class up to the majority count. Each synthetic row is
// x + u (x_nn - x) with x_nn among the k nearest same-class rows
// (Euclidean, ties by row order) and u uniform in [0, 1).
SmoteResult smote(const Matrix& X, std::span<const int> y, const SmoteConfig& config);

}  // namespace cl::learn
