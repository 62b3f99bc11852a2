#pragma once

#include "cl/common/matrix.hpp"
#include "cl/dataset/measurements.hpp"
#include "cl/dataset/metrics.hpp"
#include "cl/extract/corpus.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cl::dataset {

struct RcConfig {
    double epsilon = 0.0;
    bool include_self_pairs = true;
};

struct LabeledDataset {
    Metric metric = Metric::AU;
    Setting setting = Setting::SnippetWise;
    Task task = Task::AC;
    double epsilon = 0.0;  // RC only
    std::vector<std::string> key_names;
    std::vector<std::string> feature_names;
    std::vector<std::vector<std::string>> keys;  // one per row, aligned with key_names
    Matrix X;
    std::vector<int> y;
    ClassDistribution distribution;

    std::size_t size() const { return y.size(); }
};

// Mean score per measured snippet, sorted by snippet id. Snippets with no
// value for the metric are left out; MissingMetric if none has one.
std::vector<AggregatedScore> snippet_scores(const MeasurementTable& m, Metric metric);

// Snippet-wise: one row per snippet (84 features). Developer-wise: one row
// per record (84 + developer features). Rows sorted by keys. JoinError
// names every measured snippet missing from the feature table.
LabeledDataset build_ac_dataset(const extract::FeatureTable& features, const MeasurementTable& m, Metric metric,
                                Setting setting);

// Ordered snippet pairs, with self-pairs unless disabled. Developer-wise
// pairs are per participant over the snippets that participant judged.
// Materializes everything: use RcPairs for million-row cases.
LabeledDataset build_rc_dataset(const extract::FeatureTable& features, const MeasurementTable& m, Metric metric,
                                Setting setting, RcConfig config = {});

struct RcRow {
    std::string_view s1;
    std::string_view s2;
    std::string_view participant;  // empty for snippet-wise
    std::span<const double> f1;
    std::span<const double> f2;
    std::span<const double> dev;  // empty for snippet-wise
    int label = 2;
};

// Streams RC instances in key order without holding them; memory stays
// proportional to the measurement table. Keeps views into both inputs,
// which must outlive it.
class RcPairs {
public:
    RcPairs(const extract::FeatureTable& features, const MeasurementTable& m, Metric metric, Setting setting,
            RcConfig config = {});
    ~RcPairs();
    RcPairs(RcPairs&&) noexcept;
    RcPairs& operator=(RcPairs&&) noexcept;

    // sum over participants of k^2 (developer-wise) or n^2 (snippet-wise),
    // minus self-pairs when excluded. No pairs are built.
    std::uint64_t count() const;

    void for_each(const std::function<void(const RcRow&)>& fn) const;

    // Label histogram; the parallel version splits over the first snippet.
    std::array<std::uint64_t, 3> label_counts() const;
    std::array<std::uint64_t, 3> label_counts_serial() const;

    std::size_t feature_width() const;
    std::vector<std::string> feature_names() const;
    std::vector<std::string> key_names() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string instances_csv(const LabeledDataset& ds);

// Manifest JSON: metric, setting, task, epsilon, feature table path,
// instance count, class distribution.
std::string dataset_manifest_json(const LabeledDataset& ds, const std::string& feature_table_path);

}  // namespace cl::dataset
