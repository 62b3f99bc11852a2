#include "cl/eval/metrics.hpp"

#include "cl/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace cl::eval {

ConfusionMatrix::ConfusionMatrix(std::vector<int> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    counts_.assign(labels_.size() * labels_.size(), 0);
}

ConfusionMatrix ConfusionMatrix::from(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size()) throw InvalidArgument("truth and predictions differ in length");
    std::set<int> labels(truth.begin(), truth.end());
    labels.insert(predicted.begin(), predicted.end());
    ConfusionMatrix m({labels.begin(), labels.end()});
    for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], predicted[i]);
    return m;
}

std::size_t ConfusionMatrix::index_of(int label) const {
    const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label)
        throw InvalidArgument("label " + std::to_string(label) + " is not in the confusion matrix");
    return static_cast<std::size_t>(it - labels_.begin());
}

void ConfusionMatrix::add(int truth, int predicted, std::uint64_t times) {
    counts_[index_of(truth) * labels_.size() + index_of(predicted)] += times;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.labels_ != labels_) throw InvalidArgument("confusion matrices cover different labels");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
}

namespace {

struct Margins {
    std::vector<double> tp, row, col;  // row = true support, col = predicted count
    double total = 0;
};

Margins margins(const ConfusionMatrix& m) {
    const std::size_t k = m.size();
    Margins g{std::vector<double>(k, 0), std::vector<double>(k, 0), std::vector<double>(k, 0), 0};
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const auto c = static_cast<double>(m.at(i, j));
            g.row[i] += c;
            g.col[j] += c;
            g.total += c;
            if (i == j) g.tp[i] = c;
        }
    return g;
}

}  // namespace

Prf weighted_prf(const ConfusionMatrix& m) {
    const auto g = margins(m);
    if (g.total == 0) throw EmptyMatrix("confusion matrix is empty");
    Prf out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        ClassScores s;
        s.label = m.labels()[i];
        s.support = static_cast<std::uint64_t>(g.row[i]);
        s.precision = g.col[i] > 0 ? g.tp[i] / g.col[i] : 0.0;
        s.recall = g.row[i] > 0 ? g.tp[i] / g.row[i] : 0.0;
        s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
        const double w = g.row[i] / g.total;
        out.wp += w * s.precision;
        out.wr += w * s.recall;
        out.wf1 += w * s.f1;
        out.per_class.push_back(s);
    }
    return out;
}

double mcc(const ConfusionMatrix& m) {
    const auto g = margins(m);
    double correct = 0, pt = 0, tt = 0, pp = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        correct += g.tp[i];
        pt += g.col[i] * g.row[i];
        tt += g.row[i] * g.row[i];
        pp += g.col[i] * g.col[i];
    }
    const double s = g.total;
    const double denom = std::sqrt(s * s - pp) * std::sqrt(s * s - tt);
    if (denom == 0) return 0.0;
    return (correct * s - pt) / denom;
}

Kappa cohen_kappa(const ConfusionMatrix& m) {
    const auto g = margins(m);
    Kappa k;
    if (g.total == 0) return k;
    for (std::size_t i = 0; i < m.size(); ++i) {
        k.p_o += g.tp[i];
        k.p_e += g.row[i] * g.col[i];
    }
    k.p_o /= g.total;
    k.p_e /= g.total * g.total;
    k.kappa = k.p_e < 1.0 ? (k.p_o - k.p_e) / (1.0 - k.p_e) : 0.0;
    return k;
}

Effect effect_band(double r) {
    const double a = std::fabs(r);
    if (a > 0.5) return Effect::Large;
    if (a > 0.3) return Effect::Medium;
    if (a > 0.1) return Effect::Small;
    return Effect::Negligible;
}

std::string_view effect_name(Effect e) {
    switch (e) {
        case Effect::Large: return "large";
        case Effect::Medium: return "medium";
        case Effect::Small: return "small";
        case Effect::Negligible: return "negligible";
    }
    return "?";
}

MetricReport metric_report(const ConfusionMatrix& m) {
    MetricReport r;
    r.prf = weighted_prf(m);
    r.mcc = mcc(m);
    r.kappa = cohen_kappa(m);
    r.mcc_band = effect_band(r.mcc);
    r.kappa_band = effect_band(r.kappa.kappa);
    return r;
}

}  // namespace cl::eval
