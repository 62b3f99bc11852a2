#include "cl/common/error.hpp"
#include "cl/learn/families.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>

namespace cl::learn {

namespace {

constexpr double kTol = 1e-3;
constexpr double kTau = 1e-12;
constexpr std::size_t kCacheBytes = std::size_t{256} << 20;

// Lazily computed kernel rows with FIFO eviction once over budget.
class KernelRows {
public:
    KernelRows(const Matrix& X, std::function<double(std::span<const double>, std::span<const double>)> k)
        : X_(X), k_(std::move(k)), rows_(X.rows()) {
        cap_ = std::max<std::size_t>(2, kCacheBytes / (sizeof(double) * std::max<std::size_t>(X.rows(), 1)));
    }

    const std::vector<double>& row(std::size_t i) {
        if (rows_[i].empty()) {
            if (order_.size() >= cap_) {
                rows_[order_.front()].clear();
                rows_[order_.front()].shrink_to_fit();
                order_.pop_front();
            }
            auto& r = rows_[i];
            r.resize(X_.rows());
            const auto xi = X_.row(i);
            for (std::size_t j = 0; j < X_.rows(); ++j) r[j] = k_(xi, X_.row(j));
            order_.push_back(i);
        }
        return rows_[i];
    }

private:
    const Matrix& X_;
    std::function<double(std::span<const double>, std::span<const double>)> k_;
    std::vector<std::vector<double>> rows_;
    std::deque<std::size_t> order_;
    std::size_t cap_;
};

struct Solution {
    std::vector<double> alpha;
    double rho = 0.0;
};

// Dual C-SVC: min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0, Q_ij = y_i y_j K_ij.
Solution smo(KernelRows& K, const std::vector<double>& diag, const std::vector<int>& y, double C) {
    const std::size_t n = y.size();
    std::vector<double> a(n, 0.0), G(n, -1.0);
    auto upper = [&](std::size_t t) { return a[t] >= C; };
    auto lower = [&](std::size_t t) { return a[t] <= 0; };
    const std::size_t max_iter = std::max<std::size_t>(10000000, n > std::size_t(-1) / 100 ? n : 100 * n);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] == 1) {
                if (!upper(t) && -G[t] >= gmax) gmax = -G[t], i = t;
            } else {
                if (!lower(t) && G[t] >= gmax) gmax = G[t], i = t;
            }
        }
        if (i == n) break;
        const auto& Ki = K.row(i);
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double Qit = y[i] * y[t] * Ki[t];
            if (y[t] == 1) {
                if (lower(t)) continue;
                const double diff = gmax + G[t];
                gmax2 = std::max(gmax2, G[t]);
                if (diff > 0) {
                    double quad = diag[i] + diag[t] - 2.0 * y[i] * Qit;
                    if (quad <= 0) quad = kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj <= best_obj) best_obj = obj, j = t;
                }
            } else {
                if (upper(t)) continue;
                const double diff = gmax - G[t];
                gmax2 = std::max(gmax2, -G[t]);
                if (diff > 0) {
                    double quad = diag[i] + diag[t] + 2.0 * y[i] * Qit;
                    if (quad <= 0) quad = kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj <= best_obj) best_obj = obj, j = t;
                }
            }
        }
        if (gmax + gmax2 < kTol || j == n) break;

        const auto& Kj = K.row(j);
        const double Qij = y[i] * y[j] * Ki[j];
        const double old_i = a[i], old_j = a[j];
        if (y[i] != y[j]) {
            double quad = diag[i] + diag[j] + 2 * Qij;
            if (quad <= 0) quad = kTau;
            const double delta = (-G[i] - G[j]) / quad;
            const double diff = a[i] - a[j];
            a[i] += delta;
            a[j] += delta;
            if (diff > 0) {
                if (a[j] < 0) a[j] = 0, a[i] = diff;
            } else {
                if (a[i] < 0) a[i] = 0, a[j] = -diff;
            }
            if (diff > 0) {
                if (a[i] > C) a[i] = C, a[j] = C - diff;
            } else {
                if (a[j] > C) a[j] = C, a[i] = C + diff;
            }
        } else {
            double quad = diag[i] + diag[j] - 2 * Qij;
            if (quad <= 0) quad = kTau;
            const double delta = (G[i] - G[j]) / quad;
            const double sum = a[i] + a[j];
            a[i] -= delta;
            a[j] += delta;
            if (sum > C) {
                if (a[i] > C) a[i] = C, a[j] = sum - C;
            } else {
                if (a[j] < 0) a[j] = 0, a[i] = sum;
            }
            if (sum > C) {
                if (a[j] > C) a[j] = C, a[i] = sum - C;
            } else {
                if (a[i] < 0) a[i] = 0, a[j] = sum;
            }
        }
        const double di = a[i] - old_i, dj = a[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) G[t] += y[t] * (y[i] * Ki[t] * di + y[j] * Kj[t] * dj);
    }

    // rho: mean over free vectors, else the middle of the feasible interval
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * G[t];
        if (upper(t)) {
            if (y[t] == -1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (y[t] == 1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    Solution s;
    s.rho = n_free ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2;
    s.alpha = std::move(a);
    return s;
}

}  // namespace

double Svm::kernel_value(std::span<const double> a, std::span<const double> b) const {
    if (kernel_ == Kernel::Linear) {
        double s = 0;
        for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
        return s;
    }
    double s = 0;
    for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
    return std::exp(-gamma_ * s);
}

void Svm::fit(const Matrix& X, std::span<const int> y) {
    const auto cls = begin_fit(X, y);
    const std::size_t n = X.rows(), d = X.cols();

    // gamma = 1 / (d * variance of all entries)
    double mean = 0, var = 0;
    for (double v : X.data()) mean += v;
    mean /= static_cast<double>(X.data().size());
    for (double v : X.data()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(X.data().size());
    gamma_ = var > 0 ? 1.0 / (static_cast<double>(d) * var) : 1.0;

    KernelRows K(X, [this](std::span<const double> a, std::span<const double> b) { return kernel_value(a, b); });
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = kernel_value(X.row(i), X.row(i));

    const std::size_t machines = labels_.size() == 2 ? 1 : labels_.size();
    std::vector<Solution> sols;
    std::vector<std::vector<int>> signs;
    std::vector<bool> used(n, false);
    for (std::size_t m = 0; m < machines; ++m) {
        const int positive = labels_.size() == 2 ? 1 : static_cast<int>(m);
        std::vector<int> yy(n);
        for (std::size_t i = 0; i < n; ++i) yy[i] = cls[i] == positive ? 1 : -1;
        sols.push_back(smo(K, diag, yy, C_));
        for (std::size_t i = 0; i < n; ++i)
            if (sols.back().alpha[i] > 0) used[i] = true;
        signs.push_back(std::move(yy));
    }
    // support vectors shared across machines
    std::vector<std::size_t> slot(n, 0), keep;
    for (std::size_t i = 0; i < n; ++i)
        if (used[i]) {
            slot[i] = keep.size();
            keep.push_back(i);
        }
    sv_ = X.select_rows(keep);
    machines_.clear();
    for (std::size_t m = 0; m < machines; ++m) {
        Machine mc;
        mc.rho = sols[m].rho;
        for (std::size_t i = 0; i < n; ++i)
            if (sols[m].alpha[i] > 0) {
                mc.sv.push_back(slot[i]);
                mc.coef.push_back(signs[m][i] * sols[m].alpha[i]);
            }
        machines_.push_back(std::move(mc));
    }
}

double Svm::decision(const Machine& m, std::span<const double> x) const {
    double f = -m.rho;
    for (std::size_t i = 0; i < m.sv.size(); ++i) f += m.coef[i] * kernel_value(sv_.row(m.sv[i]), x);
    return f;
}

std::vector<double> Svm::scores(std::span<const double> x) const {
    check_width(x);
    if (labels_.size() == 2) {
        const double f = decision(machines_[0], x);
        return {-f, f};
    }
    std::vector<double> s;
    for (const auto& m : machines_) s.push_back(decision(m, x));
    return s;
}

nlohmann::json Svm::save() const {
    auto ms = nlohmann::json::array();
    for (const auto& m : machines_) ms.push_back({{"sv", m.sv}, {"coef", m.coef}, {"rho", m.rho}});
    return {{"kernel", kernel_ == Kernel::Linear ? "linear" : "rbf"}, {"C", C_}, {"gamma", gamma_},
            {"support_vectors", detail::matrix_json(sv_)}, {"machines", ms}};
}

void Svm::load(const nlohmann::json& j) {
    const auto k = j.at("kernel").get<std::string>();
    if (k != "linear" && k != "rbf") throw CorruptModel("SVM kernel '" + k + "' unknown");
    kernel_ = k == "linear" ? Kernel::Linear : Kernel::Rbf;
    C_ = j.at("C").get<double>();
    gamma_ = j.at("gamma").get<double>();
    sv_ = detail::matrix_from(j.at("support_vectors"));
    if (sv_.rows() && sv_.cols() != width_) throw CorruptModel("SVM support vectors have the wrong width");
    machines_.clear();
    for (const auto& jm : j.at("machines")) {
        Machine m;
        m.sv = jm.at("sv").get<std::vector<std::size_t>>();
        m.coef = jm.at("coef").get<std::vector<double>>();
        m.rho = jm.at("rho").get<double>();
        if (m.sv.size() != m.coef.size()) throw CorruptModel("SVM machine arrays differ in length");
        for (auto s : m.sv)
            if (s >= sv_.rows()) throw CorruptModel("SVM support vector index out of range");
        machines_.push_back(std::move(m));
    }
    if (machines_.size() != (labels_.size() == 2 ? 1 : labels_.size())) throw CorruptModel("SVM machine count mismatch");
}

}  // namespace cl::learn
