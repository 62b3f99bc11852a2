#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace cl::dataset {

enum class Metric { AU, PBU, ABU, ABU50, BD, BD50, RL };

inline constexpr std::array<Metric, 7> kAllMetrics = {Metric::AU,  Metric::PBU,  Metric::ABU, Metric::ABU50,
                                                      Metric::BD,  Metric::BD50, Metric::RL};

enum class Polarity { Normal, Inverted };
enum class Setting { SnippetWise, DeveloperWise };
enum class Task { AC, RC };

std::string_view metric_name(Metric m);
// Accepts the canonical names plus "ABU50%" / "BD50%"; case-insensitive.
// Throws InvalidArgument.
Metric parse_metric(std::string_view text);

// Lower is better for the deceptiveness metrics, so RC flips them.
Polarity polarity(Metric m);

std::string_view setting_name(Setting s);
Setting parse_setting(std::string_view text);
std::string_view task_name(Task t);
Task parse_task(std::string_view text);

// Snippet-wise AC excludes PBU, ABU and BD50 (classes too small after
// aggregation).
bool snippet_wise_ac_supported(Metric m);

struct DerivedMetrics {
    std::optional<int> AU, PBU, ABU, ABU50, BD, BD50, RL;

    std::optional<int> get(Metric m) const;
    // Throws MissingMetric naming the metric.
    int require(Metric m) const;
};

// ABU = [AU==3], ABU50 = [AU>=2], BD = [PBU and not ABU],
// BD50 = [PBU and not ABU50]. Fields whose inputs are absent stay empty.
DerivedMetrics derive_metrics(std::optional<int> au, std::optional<int> pbu, std::optional<int> rl);

struct AggregatedScore {
    std::string snippet_id;
    Metric metric = Metric::AU;
    double S = 0.0;
};

// Mean over the values present; MissingMetric when none are.
AggregatedScore aggregate_snippet(std::string snippet_id, Metric metric, std::span<const DerivedMetrics> values);

// Snippet-wise: half-up rounding of S, then AU merge {0,1}->0, {2,3}->1.
// Throws UnsupportedMetric for PBU/ABU/BD50.
int ac_label_snippet(const AggregatedScore& score);
// Developer-wise: the raw value itself.
int ac_label_developer(Metric metric, int raw_value);

// 0: first more comprehensible, 1: second, 2: within eps.
// Inverted metrics swap 0 and 1.
int rc_label(double s1, double s2, Metric metric, double eps);

struct ClassDistribution {
    std::map<int, std::size_t> counts;
    std::size_t n = 0;

    double share(int label) const;
    void add(int label, std::size_t times = 1) {
        counts[label] += times;
        n += times;
    }
};

// EmptyDataset on empty input.
ClassDistribution class_distribution(std::span<const int> labels);

}  // namespace cl::dataset
