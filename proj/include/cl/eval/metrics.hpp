#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cl::eval {

// Rows are true labels, columns predicted, both in ascending label order.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<int> labels);

    // Labels are the union of both sides.
    static ConfusionMatrix from(std::span<const int> truth, std::span<const int> predicted);

    const std::vector<int>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    std::size_t index_of(int label) const;  // InvalidArgument when absent

    void add(int truth, int predicted, std::uint64_t times = 1);
    std::uint64_t at(std::size_t true_index, std::size_t predicted_index) const {
        return counts_[true_index * labels_.size() + predicted_index];
    }
    std::uint64_t total() const;

    // Adds another matrix over the same label set.
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::vector<int> labels_;
    std::vector<std::uint64_t> counts_;
};

struct ClassScores {
    int label = 0;
    double precision = 0, recall = 0, f1 = 0;
    std::uint64_t support = 0;
};

struct Prf {
    double wp = 0, wr = 0, wf1 = 0;
    std::vector<ClassScores> per_class;
};

// Support-weighted precision/recall/F1; empty denominators score 0.
// EmptyMatrix when nothing was counted.
Prf weighted_prf(const ConfusionMatrix& m);

// Multiclass MCC (covariance form). 0 when the denominator is 0.
double mcc(const ConfusionMatrix& m);

struct Kappa {
    double kappa = 0, p_o = 0, p_e = 0;
};
// 0 when p_e == 1.
Kappa cohen_kappa(const ConfusionMatrix& m);

enum class Effect { Negligible, Small, Medium, Large };
// On |r|: Large > 0.5, Medium (0.3, 0.5], Small (0.1, 0.3], else Negligible.
Effect effect_band(double r);
std::string_view effect_name(Effect e);

struct MetricReport {
    Prf prf;
    double mcc = 0;
    Kappa kappa;
    Effect mcc_band = Effect::Negligible;
    Effect kappa_band = Effect::Negligible;
};

MetricReport metric_report(const ConfusionMatrix& m);

}  // namespace cl::eval
