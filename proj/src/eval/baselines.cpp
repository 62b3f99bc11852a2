#include "cl/eval/baselines.hpp"

#include "cl/common/error.hpp"

#include <cmath>

namespace cl::eval {

namespace {

void check(const Shares& shares) {
    if (shares.empty()) throw InvalidArgument("class distribution is empty");
    double sum = 0;
    for (const auto& [label, p] : shares) {
        if (!(p >= 0 && p <= 1)) throw InvalidArgument("class share out of [0, 1] for label " + std::to_string(label));
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 0.005) throw InvalidArgument("class shares sum to " + std::to_string(sum));
}

}  // namespace

Shares shares_of(const dataset::ClassDistribution& dist) {
    if (dist.n == 0) throw EmptyDataset("class distribution is empty");
    Shares s;
    for (const auto& [label, c] : dist.counts) s[label] = static_cast<double>(c) / static_cast<double>(dist.n);
    return s;
}

double lazy_wf1(double p) { return 2 * p * p / (1 + p); }

double random_wf1(const Shares& shares) {
    check(shares);
    double s = 0;
    for (const auto& [label, p] : shares) s += p * p;
    return s;
}

double baseline_wf1(const Shares& shares, BaselineKind kind, int label) {
    check(shares);
    if (kind == BaselineKind::Random) return random_wf1(shares);
    const auto it = shares.find(label);
    if (it == shares.end()) throw InvalidArgument("label " + std::to_string(label) + " not in the distribution");
    return lazy_wf1(it->second);
}

std::string BaselineValue::tag() const {
    if (kind == BaselineKind::Random) return "RB";
    return (majority ? "MB" : "LB") + std::to_string(label);
}

BaselineReport baselines(const Shares& shares) {
    check(shares);
    BaselineReport r;
    int top = shares.begin()->first;
    for (const auto& [label, p] : shares) {
        r.lazy[label] = lazy_wf1(p);
        if (p > shares.at(top)) top = label;
    }
    r.majority = {BaselineKind::Lazy, top, r.lazy[top], true};
    r.random = random_wf1(shares);
    r.best = {BaselineKind::Random, 0, r.random, false};
    for (const auto& [label, v] : r.lazy)
        if (v > r.best.value) r.best = {BaselineKind::Lazy, label, v, label == top};
    return r;
}

BaselineValue best_baseline(const Shares& shares) { return baselines(shares).best; }

double relative_improvement(double model_value, double baseline_value) {
    if (!(baseline_value > 0)) throw ZeroBaseline("relative improvement needs a positive baseline");
    return (model_value - baseline_value) / baseline_value;
}

double delta_ri(double ri_rc, double ri_ac) { return ri_rc - ri_ac; }

}  // namespace cl::eval
