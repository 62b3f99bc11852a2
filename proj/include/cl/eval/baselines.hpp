#pragma once

#include "cl/dataset/metrics.hpp"

#include <map>
#include <optional>
#include <string>

namespace cl::eval {

// label -> share. Shares must be in [0, 1] and sum to 1 within table
// rounding (0.005); InvalidArgument otherwise.
using Shares = std::map<int, double>;

Shares shares_of(const dataset::ClassDistribution& dist);

// Always predicting class i: F1_i = 2 p_i / (1 + p_i) with weight p_i.
double lazy_wf1(double p);
// Predicting by the class frequencies: sum of p_i^2.
double random_wf1(const Shares& shares);

enum class BaselineKind { Lazy, Random };

struct BaselineValue {
    BaselineKind kind = BaselineKind::Random;
    int label = 0;  // lazy only
    double value = 0;
    bool majority = false;  // lazy on the most frequent class

    // "MB0", "LB2", "RB"
    std::string tag() const;
};

double baseline_wf1(const Shares& shares, BaselineKind kind, int label = 0);

struct BaselineReport {
    std::map<int, double> lazy;
    BaselineValue majority;
    double random = 0;
    BaselineValue best;
};

// Best = max over every lazy class and random. On an exact tie random wins,
// then the lowest label.
BaselineReport baselines(const Shares& shares);
BaselineValue best_baseline(const Shares& shares);

// (model - baseline) / baseline; ZeroBaseline when baseline <= 0.
double relative_improvement(double model_value, double baseline_value);
double delta_ri(double ri_rc, double ri_ac);

}  // namespace cl::eval
