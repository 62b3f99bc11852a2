#pragma once

#include "cl/common/matrix.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cl::learn {

enum class Family { NB, KNN, LR, MLP, RF, SVM };

inline constexpr Family kAllFamilies[] = {Family::NB, Family::KNN, Family::LR, Family::MLP, Family::RF, Family::SVM};

std::string_view family_name(Family f);
Family parse_family(std::string_view text);  // InvalidArgument

using ParamValue = std::variant<double, std::string>;
using Hyperparams = std::map<std::string, ParamValue>;
using Grid = std::map<std::string, std::vector<ParamValue>>;

std::string format_params(const Hyperparams& hp);
nlohmann::json params_to_json(const Hyperparams& hp);
Hyperparams params_from_json(const nlohmann::json& j);

struct ModelSpec {
    Family family = Family::RF;
    Grid grid;
    std::uint64_t seed = 0;
};

// The search grid used for each family:
//   NB  var_smoothing {1e-9, 1e-6}
//   KNN k {1,3,5,7,11} x metric {euclidean, manhattan}
//   LR  l2 {0.01,0.1,1,10}
//   MLP hidden {16, 32, 32-16} x learning_rate {0.001, 0.01}
//   RF  trees {50,100,200} x max_depth {unbounded, 8, 16}
//   SVM kernel linear x C {0.1,1,10} plus kernel rbf x C {0.1,1,10}
ModelSpec default_spec(Family f, std::uint64_t seed = 0);

// Cartesian product in key order; SVM's C grid is shared by both kernels.
// InvalidArgument on an empty grid.
std::vector<Hyperparams> expand_grid(const ModelSpec& spec);

// Uniform contract for the six families. Labels are whatever ints the
// training data uses; scores come back in labels() order.
class Classifier {
public:
    virtual ~Classifier() = default;

    // SingleClassTraining with fewer than two labels; EmptyTraining on no rows.
    virtual void fit(const Matrix& X, std::span<const int> y) = 0;
    virtual std::vector<double> scores(std::span<const double> x) const = 0;
    // Highest score, lowest label on ties. Families that vote override.
    virtual int predict(std::span<const double> x) const;

    virtual Family family() const = 0;
    virtual nlohmann::json save() const = 0;
    virtual void load(const nlohmann::json& j) = 0;

    // Rebuilds a fitted model from save() output. CorruptModel when the
    // payload does not fit the label set and width.
    void restore(std::vector<int> labels, std::size_t width, const nlohmann::json& j);

    const std::vector<int>& labels() const { return labels_; }
    std::size_t width() const { return width_; }

protected:
    // Validates and records label set and width; returns y as class indices.
    std::vector<int> begin_fit(const Matrix& X, std::span<const int> y);
    void check_width(std::span<const double> x) const;

    std::vector<int> labels_;
    std::size_t width_ = 0;
};

// InvalidArgument when hp names a parameter the family does not use or a
// value has the wrong type.
std::unique_ptr<Classifier> make_classifier(Family f, const Hyperparams& hp, std::uint64_t seed);

// Index of the largest value; the first (lowest label) wins ties.
std::size_t argmax_first(std::span<const double> v);

}  // namespace cl::learn
