#include "cl/common/error.hpp"
#include "cl/learn/families.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>

namespace cl::learn {

void KNearest::fit(const Matrix& X, std::span<const int> y) {
    const auto cls = begin_fit(X, y);
    X_ = X;
    cls_ = cls;
}

std::vector<std::size_t> KNearest::votes(std::span<const double> x) const {
    check_width(x);
    std::vector<std::pair<double, std::size_t>> dist(X_.rows());
    for (std::size_t r = 0; r < X_.rows(); ++r) {
        const auto row = X_.row(r);
        double s = 0;
        if (metric_ == Distance::Euclidean)
            for (std::size_t c = 0; c < row.size(); ++c) s += (row[c] - x[c]) * (row[c] - x[c]);
        else
            for (std::size_t c = 0; c < row.size(); ++c) s += std::fabs(row[c] - x[c]);
        dist[r] = {s, r};
    }
    // equal distances resolve to the earlier training row
    const std::size_t k = std::min(k_, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
    std::vector<std::size_t> v(labels_.size(), 0);
    for (std::size_t i = 0; i < k; ++i) ++v[static_cast<std::size_t>(cls_[dist[i].second])];
    return v;
}

std::vector<double> KNearest::scores(std::span<const double> x) const {
    const auto v = votes(x);
    std::vector<double> s(v.size());
    double total = 0;
    for (auto c : v) total += static_cast<double>(c);
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = static_cast<double>(v[i]) / total;
    return s;
}

int KNearest::predict(std::span<const double> x) const {
    const auto v = votes(x);
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return labels_[best];
}

nlohmann::json KNearest::save() const {
    return {{"k", k_}, {"metric", metric_ == Distance::Euclidean ? "euclidean" : "manhattan"},
            {"X", detail::matrix_json(X_)}, {"classes", cls_}};
}

void KNearest::load(const nlohmann::json& j) {
    k_ = j.at("k").get<std::size_t>();
    metric_ = j.at("metric").get<std::string>() == "manhattan" ? Distance::Manhattan : Distance::Euclidean;
    X_ = detail::matrix_from(j.at("X"));
    cls_ = j.at("classes").get<std::vector<int>>();
    if (k_ == 0 || cls_.size() != X_.rows() || (X_.rows() && X_.cols() != width_))
        throw CorruptModel("KNN payload is inconsistent");
    for (int c : cls_)
        if (c < 0 || static_cast<std::size_t>(c) >= labels_.size()) throw CorruptModel("KNN class index out of range");
}

}  // namespace cl::learn
