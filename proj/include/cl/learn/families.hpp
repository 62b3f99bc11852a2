#pragma once

#include "cl/learn/models.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cl::learn {

class GaussianNB final : public Classifier {
public:
    explicit GaussianNB(double var_smoothing = 1e-9) : var_smoothing_(var_smoothing) {}
    void fit(const Matrix& X, std::span<const int> y) override;
    std::vector<double> scores(std::span<const double> x) const override;
    int predict(std::span<const double> x) const override;
    Family family() const override { return Family::NB; }
    nlohmann::json save() const override;
    void load(const nlohmann::json& j) override;

private:
    std::vector<double> joint_log_likelihood(std::span<const double> x) const;
    double var_smoothing_;
    std::vector<double> log_prior_;
    Matrix mean_, var_;
};

enum class Distance { Euclidean, Manhattan };

class KNearest final : public Classifier {
public:
    KNearest(std::size_t k = 5, Distance metric = Distance::Euclidean) : k_(k), metric_(metric) {}
    void fit(const Matrix& X, std::span<const int> y) override;
    std::vector<double> scores(std::span<const double> x) const override;  // vote shares
    int predict(std::span<const double> x) const override;
    Family family() const override { return Family::KNN; }
    nlohmann::json save() const override;
    void load(const nlohmann::json& j) override;

private:
    std::vector<std::size_t> votes(std::span<const double> x) const;
    std::size_t k_;
    Distance metric_;
    Matrix X_;
    std::vector<int> cls_;  // class index per training row
};

// One-vs-rest L2 logistic regression fitted by damped Newton steps.
// Objective per binary problem: sum of log-losses + l2/2 * |w|^2
// (intercept unpenalized).
class LogisticRegression final : public Classifier {
public:
    explicit LogisticRegression(double l2 = 1.0, int max_iter = 1000) : l2_(l2), max_iter_(max_iter) {}
    void fit(const Matrix& X, std::span<const int> y) override;
    std::vector<double> scores(std::span<const double> x) const override;
    Family family() const override { return Family::LR; }
    nlohmann::json save() const override;
    void load(const nlohmann::json& j) override;

    int iterations() const { return iterations_; }

private:
    double l2_;
    int max_iter_;
    int iterations_ = 0;
    std::vector<std::vector<double>> w_;  // per machine, intercept last
};

// ReLU hidden layers, softmax output, Adam, minibatches of 32. Training
// stops once validation wF1 (10% stratified holdout) has not improved for
// `patience` epochs; the best epoch's weights are kept. Equal wF1 with a
// lower validation log-loss counts as an improvement.
class Mlp final : public Classifier {
public:
    Mlp(std::vector<std::size_t> hidden = {32}, double learning_rate = 1e-3, std::uint64_t seed = 0, int epochs = 200,
        int patience = 20);
    void fit(const Matrix& X, std::span<const int> y) override;
    std::vector<double> scores(std::span<const double> x) const override;
    Family family() const override { return Family::MLP; }
    nlohmann::json save() const override;
    void load(const nlohmann::json& j) override;

    int epochs_run() const { return epochs_run_; }

    struct Layer {
        std::size_t in = 0, out = 0;
        std::vector<double> W;  // out x in, row-major
        std::vector<double> b;
    };

private:
    std::vector<std::size_t> hidden_;
    double lr_;
    std::uint64_t seed_;
    int epochs_;
    int patience_;
    int epochs_run_ = 0;
    std::vector<Layer> layers_;
};

// Lowest label among the most voted; votes are class indices.
std::size_t majority_vote(std::span<const std::size_t> votes, std::size_t n_classes);

class RandomForest final : public Classifier {
public:
    // max_depth 0 = unbounded. Features tried per split: floor(sqrt(d)).
    RandomForest(std::size_t trees = 100, std::size_t max_depth = 0, std::uint64_t seed = 0)
        : n_trees_(trees), max_depth_(max_depth), seed_(seed) {}
    void fit(const Matrix& X, std::span<const int> y) override;  // trees in parallel
    void fit_serial(const Matrix& X, std::span<const int> y);
    std::vector<double> scores(std::span<const double> x) const override;  // vote shares
    int predict(std::span<const double> x) const override;
    Family family() const override { return Family::RF; }
    nlohmann::json save() const override;
    void load(const nlohmann::json& j) override;

    struct Node {
        int feature = -1;  // -1 = leaf
        double threshold = 0.0;
        int left = -1, right = -1;
        int cls = 0;
    };
    using Tree = std::vector<Node>;
    const std::vector<Tree>& trees() const { return trees_; }

private:
    void fit_impl(const Matrix& X, std::span<const int> y, bool parallel);
    std::size_t n_trees_;
    std::size_t max_depth_;
    std::uint64_t seed_;
    std::vector<Tree> trees_;
};

enum class Kernel { Linear, Rbf };

// C-SVC solved by SMO with second-order working-set selection, one machine
// per class (one in total for two classes). RBF gamma = 1 / (d * var(X)).
class Svm final : public Classifier {
public:
    Svm(Kernel kernel = Kernel::Rbf, double C = 1.0) : kernel_(kernel), C_(C) {}
    void fit(const Matrix& X, std::span<const int> y) override;
    std::vector<double> scores(std::span<const double> x) const override;  // decision values
    Family family() const override { return Family::SVM; }
    nlohmann::json save() const override;
    void load(const nlohmann::json& j) override;

    double gamma() const { return gamma_; }

    struct Machine {
        std::vector<std::size_t> sv;  // rows of sv_
        std::vector<double> coef;     // y_i * alpha_i
        double rho = 0.0;
    };

private:
    double kernel_value(std::span<const double> a, std::span<const double> b) const;
    double decision(const Machine& m, std::span<const double> x) const;
    Kernel kernel_;
    double C_;
    double gamma_ = 1.0;
    Matrix sv_;
    std::vector<Machine> machines_;
};

}  // namespace cl::learn
