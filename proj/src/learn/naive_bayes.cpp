#include "cl/common/error.hpp"
#include "cl/learn/families.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cl::learn {

void GaussianNB::fit(const Matrix& X, std::span<const int> y) {
    const auto cls = begin_fit(X, y);
    const std::size_t K = labels_.size(), d = X.cols(), n = X.rows();

    // smoothing is relative to the widest feature variance
    double max_var = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        double m = 0, v = 0;
        for (std::size_t r = 0; r < n; ++r) m += X(r, c);
        m /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r) v += (X(r, c) - m) * (X(r, c) - m);
        max_var = std::max(max_var, v / static_cast<double>(n));
    }
    const double eps = std::max(var_smoothing_ * max_var, 1e-12);

    mean_ = Matrix(K, d);
    var_ = Matrix(K, d);
    std::vector<double> count(K, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        count[cls[r]] += 1;
        for (std::size_t c = 0; c < d; ++c) mean_(cls[r], c) += X(r, c);
    }
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t c = 0; c < d; ++c) mean_(k, c) /= count[k];
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            const double dv = X(r, c) - mean_(cls[r], c);
            var_(cls[r], c) += dv * dv;
        }
    log_prior_.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t c = 0; c < d; ++c) var_(k, c) = var_(k, c) / count[k] + eps;
        log_prior_[k] = std::log(count[k] / static_cast<double>(n));
    }
}

std::vector<double> GaussianNB::joint_log_likelihood(std::span<const double> x) const {
    check_width(x);
    std::vector<double> jll(labels_.size());
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        double s = log_prior_[k];
        for (std::size_t c = 0; c < x.size(); ++c) {
            const double v = var_(k, c), dv = x[c] - mean_(k, c);
            s -= 0.5 * std::log(2.0 * std::numbers::pi * v) + 0.5 * dv * dv / v;
        }
        jll[k] = s;
    }
    return jll;
}

std::vector<double> GaussianNB::scores(std::span<const double> x) const {
    auto p = joint_log_likelihood(x);
    const double m = *std::max_element(p.begin(), p.end());
    double z = 0;
    for (auto& v : p) z += (v = std::exp(v - m));
    for (auto& v : p) v /= z;
    return p;
}

int GaussianNB::predict(std::span<const double> x) const {
    const auto jll = joint_log_likelihood(x);
    return labels_[argmax_first(jll)];
}

nlohmann::json GaussianNB::save() const {
    return {{"var_smoothing", var_smoothing_}, {"log_prior", log_prior_},
            {"mean", detail::matrix_json(mean_)}, {"var", detail::matrix_json(var_)}};
}

void GaussianNB::load(const nlohmann::json& j) {
    var_smoothing_ = j.at("var_smoothing").get<double>();
    log_prior_ = j.at("log_prior").get<std::vector<double>>();
    mean_ = detail::matrix_from(j.at("mean"));
    var_ = detail::matrix_from(j.at("var"));
    if (mean_.rows() != labels_.size() || var_.rows() != labels_.size() || log_prior_.size() != labels_.size() ||
        mean_.cols() != width_ || var_.cols() != width_)
        throw CorruptModel("NB parameters do not match the label set or width");
}

}  // namespace cl::learn
