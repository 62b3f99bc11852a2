#include "cl/common/error.hpp"
#include "cl/learn/families.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace cl::learn {

namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct Problem {
    const Eigen::MatrixXd& A;  // n x (d+1), last column ones
    const Eigen::VectorXd& t;
    double l2;

    double objective(const Eigen::VectorXd& w, Eigen::VectorXd& z) const {
        z = A * w;
        double f = 0;
        for (Eigen::Index i = 0; i < z.size(); ++i) f += softplus(z[i]) - t[i] * z[i];
        const auto d = w.size() - 1;
        return f + 0.5 * l2 * w.head(d).squaredNorm();
    }
};

std::vector<double> fit_binary(const Eigen::MatrixXd& A, const Eigen::VectorXd& t, double l2, int max_iter,
                               int& iters) {
    const Eigen::Index p = A.cols(), d = p - 1;
    Problem prob{A, t, l2};
    Eigen::VectorXd w = Eigen::VectorXd::Zero(p), z, z_new;
    double f = prob.objective(w, z);
    iters = 0;
    for (int it = 0; it < max_iter; ++it) {
        iters = it + 1;
        Eigen::VectorXd mu(z.size()), s(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            mu[i] = sigmoid(z[i]);
            s[i] = mu[i] * (1 - mu[i]);
        }
        Eigen::VectorXd g = A.transpose() * (mu - t);
        g.head(d) += l2 * w.head(d);
        Eigen::MatrixXd H = A.transpose() * s.asDiagonal() * A;
        H.diagonal().head(d).array() += l2;
        H.diagonal().array() += 1e-10;
        Eigen::VectorXd step = H.ldlt().solve(g);
        if (!step.allFinite()) step = g;

        // Armijo backtracking
        const double slope = g.dot(step);
        double a = 1.0, f_new = f;
        Eigen::VectorXd w_new;
        for (int b = 0; b < 60; ++b) {
            w_new = w - a * step;
            f_new = prob.objective(w_new, z_new);
            if (f_new <= f - 1e-4 * a * slope) break;
            a *= 0.5;
        }
        if (!(f_new <= f)) break;  // no progress possible
        const double moved = (a * step).cwiseAbs().maxCoeff();
        const double gain = f - f_new;
        w = std::move(w_new);
        z = z_new;
        f = f_new;
        if (moved < 1e-10 || gain <= 1e-13 * std::max(1.0, std::fabs(f))) break;
    }
    return {w.data(), w.data() + w.size()};
}

}  // namespace

void LogisticRegression::fit(const Matrix& X, std::span<const int> y) {
    const auto cls = begin_fit(X, y);
    const auto n = static_cast<Eigen::Index>(X.rows()), d = static_cast<Eigen::Index>(X.cols());
    Eigen::MatrixXd A(n, d + 1);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) A(r, c) = X(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        A(r, d) = 1.0;
    }
    const std::size_t machines = labels_.size() == 2 ? 1 : labels_.size();
    w_.clear();
    iterations_ = 0;
    for (std::size_t m = 0; m < machines; ++m) {
        const int positive = labels_.size() == 2 ? 1 : static_cast<int>(m);
        Eigen::VectorXd t(n);
        for (Eigen::Index r = 0; r < n; ++r) t[r] = cls[static_cast<std::size_t>(r)] == positive ? 1.0 : 0.0;
        int it = 0;
        w_.push_back(fit_binary(A, t, l2_, max_iter_, it));
        iterations_ = std::max(iterations_, it);
    }
}

std::vector<double> LogisticRegression::scores(std::span<const double> x) const {
    check_width(x);
    std::vector<double> p;
    for (const auto& w : w_) {
        double z = w.back();
        for (std::size_t c = 0; c < x.size(); ++c) z += w[c] * x[c];
        p.push_back(sigmoid(z));
    }
    if (labels_.size() == 2) return {1.0 - p[0], p[0]};
    double total = 0;
    for (double v : p) total += v;
    if (total > 0)
        for (auto& v : p) v /= total;
    return p;
}

nlohmann::json LogisticRegression::save() const { return {{"l2", l2_}, {"max_iter", max_iter_}, {"weights", w_}}; }

void LogisticRegression::load(const nlohmann::json& j) {
    l2_ = j.at("l2").get<double>();
    max_iter_ = j.at("max_iter").get<int>();
    w_ = j.at("weights").get<std::vector<std::vector<double>>>();
    const std::size_t machines = labels_.size() == 2 ? 1 : labels_.size();
    if (w_.size() != machines) throw CorruptModel("LR machine count does not match the label set");
    for (const auto& w : w_)
        if (w.size() != width_ + 1) throw CorruptModel("LR weight vector has the wrong length");
}

}  // namespace cl::learn
