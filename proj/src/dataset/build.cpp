#include "cl/dataset/build.hpp"

#include "cl/common/csv.hpp"
#include "cl/common/error.hpp"
#include "cl/common/parallel.hpp"
#include "cl/extract/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

namespace cl::dataset {

namespace {

struct Judgment {
    std::string_view participant;
    int value = 0;
    std::span<const double> dev;
};

struct Entry {
    std::string_view id;
    std::span<const double> f;
    std::vector<Judgment> judgments;  // sorted by participant
    double mean = 0.0;
};

struct Index {
    Metric metric;
    Setting setting;
    std::vector<std::string> dev_names;
    std::vector<Entry> snippets;  // sorted by id
};

Index make_index(const extract::FeatureTable& features, const MeasurementTable& m, Metric metric, Setting setting) {
    if (m.dataset_ids().size() > 1)
        throw SchemaError("measurement table mixes dataset ids; build one dataset at a time");
    Index idx{metric, setting, m.dev_names, {}};

    std::map<std::string_view, std::vector<Judgment>> by_snippet;
    for (const auto& r : m.records) {
        const auto v = r.derived().get(metric);
        if (!v) continue;
        by_snippet[r.snippet_id].push_back({r.participant_id, *v, r.dev});
    }
    if (by_snippet.empty())
        throw MissingMetric("no record carries " + std::string(metric_name(metric)));

    std::string missing;
    std::size_t n_missing = 0;
    for (auto& [id, js] : by_snippet) {
        const auto row = features.find(id);
        if (row == extract::FeatureTable::npos) {
            missing += (n_missing++ ? ", " : "") + std::string(id);
            continue;
        }
        if (setting == Setting::DeveloperWise) {
            for (const auto& j : js)
                for (std::size_t d = 0; d < j.dev.size(); ++d)
                    if (std::isnan(j.dev[d]))
                        throw ValueError("developer feature dev_" + idx.dev_names[d] + " missing for participant " +
                                         std::string(j.participant) + " on snippet " + std::string(id));
        }
        std::sort(js.begin(), js.end(), [](const Judgment& a, const Judgment& b) { return a.participant < b.participant; });
        long sum = 0;
        for (const auto& j : js) sum += j.value;
        Entry e;
        e.id = id;
        e.f = std::span<const double>(features.rows[row].values);
        e.mean = static_cast<double>(sum) / static_cast<double>(js.size());
        e.judgments = std::move(js);
        idx.snippets.push_back(std::move(e));
    }
    if (n_missing) throw JoinError(std::to_string(n_missing) + " measured snippet(s) have no feature row: " + missing);
    return idx;
}

std::vector<std::string> catalog_names(std::string_view prefix) {
    std::vector<std::string> out;
    for (const auto& def : extract::feature_catalog()) out.push_back(std::string(prefix) + std::string(def.name));
    return out;
}

void append_dev_names(std::vector<std::string>& names, const std::vector<std::string>& dev) {
    for (const auto& d : dev) names.push_back("dev_" + d);
}

// Visits the pairs whose first snippet is snippets[i].
template <class Fn>
void visit_first(const Index& idx, const RcConfig& cfg, std::size_t i, Fn&& fn) {
    const auto& a = idx.snippets[i];
    for (std::size_t k = 0; k < idx.snippets.size(); ++k) {
        if (k == i && !cfg.include_self_pairs) continue;
        const auto& b = idx.snippets[k];
        RcRow row;
        row.s1 = a.id;
        row.s2 = b.id;
        row.f1 = a.f;
        row.f2 = b.f;
        if (idx.setting == Setting::SnippetWise) {
            row.label = rc_label(a.mean, b.mean, idx.metric, cfg.epsilon);
            fn(row);
            continue;
        }
        // participants who judged both, in id order
        auto ja = a.judgments.begin();
        auto jb = b.judgments.begin();
        while (ja != a.judgments.end() && jb != b.judgments.end()) {
            if (ja->participant < jb->participant) {
                ++ja;
            } else if (jb->participant < ja->participant) {
                ++jb;
            } else {
                row.participant = ja->participant;
                row.dev = ja->dev;
                row.label = rc_label(ja->value, jb->value, idx.metric, cfg.epsilon);
                fn(row);
                ++ja;
                ++jb;
            }
        }
    }
}

void check_epsilon(const RcConfig& cfg) {
    if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon))
        throw InvalidArgument("epsilon must be a finite value >= 0");
}

}  // namespace

struct RcPairs::Impl {
    Index idx;
    RcConfig cfg;
};

RcPairs::RcPairs(const extract::FeatureTable& features, const MeasurementTable& m, Metric metric, Setting setting,
                 RcConfig config) {
    check_epsilon(config);
    impl_ = std::make_unique<Impl>(Impl{make_index(features, m, metric, setting), config});
}

RcPairs::~RcPairs() = default;
RcPairs::RcPairs(RcPairs&&) noexcept = default;
RcPairs& RcPairs::operator=(RcPairs&&) noexcept = default;

std::uint64_t RcPairs::count() const {
    const auto& idx = impl_->idx;
    if (idx.setting == Setting::SnippetWise) {
        const std::uint64_t n = idx.snippets.size();
        return impl_->cfg.include_self_pairs ? n * n : n * (n - 1);
    }
    std::map<std::string_view, std::uint64_t> k;
    for (const auto& s : idx.snippets)
        for (const auto& j : s.judgments) ++k[j.participant];
    std::uint64_t total = 0;
    for (const auto& [p, kp] : k) total += impl_->cfg.include_self_pairs ? kp * kp : kp * (kp - 1);
    return total;
}

void RcPairs::for_each(const std::function<void(const RcRow&)>& fn) const {
    for (std::size_t i = 0; i < impl_->idx.snippets.size(); ++i) visit_first(impl_->idx, impl_->cfg, i, fn);
}

std::array<std::uint64_t, 3> RcPairs::label_counts() const {
    const auto n = static_cast<long>(impl_->idx.snippets.size());
    std::uint64_t c0 = 0, c1 = 0, c2 = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : c0, c1, c2) num_threads(parallel::thread_count())
    for (long i = 0; i < n; ++i) {
        std::uint64_t local[3] = {0, 0, 0};
        visit_first(impl_->idx, impl_->cfg, static_cast<std::size_t>(i), [&](const RcRow& r) { ++local[r.label]; });
        c0 += local[0];
        c1 += local[1];
        c2 += local[2];
    }
    return {c0, c1, c2};
}

std::array<std::uint64_t, 3> RcPairs::label_counts_serial() const {
    std::array<std::uint64_t, 3> c{};
    for_each([&](const RcRow& r) { ++c[static_cast<std::size_t>(r.label)]; });
    return c;
}

std::size_t RcPairs::feature_width() const {
    const std::size_t dev = impl_->idx.setting == Setting::DeveloperWise ? impl_->idx.dev_names.size() : 0;
    return 2 * extract::kFeatureCount + dev;
}

std::vector<std::string> RcPairs::feature_names() const {
    auto names = catalog_names("s1_");
    auto second = catalog_names("s2_");
    names.insert(names.end(), second.begin(), second.end());
    if (impl_->idx.setting == Setting::DeveloperWise) append_dev_names(names, impl_->idx.dev_names);
    return names;
}

std::vector<std::string> RcPairs::key_names() const {
    if (impl_->idx.setting == Setting::DeveloperWise) return {"snippet_id_1", "snippet_id_2", "participant_id"};
    return {"snippet_id_1", "snippet_id_2"};
}

std::vector<AggregatedScore> snippet_scores(const MeasurementTable& m, Metric metric) {
    std::map<std::string_view, std::vector<DerivedMetrics>> by_snippet;
    for (const auto& r : m.records) {
        auto d = r.derived();
        if (d.get(metric)) by_snippet[r.snippet_id].push_back(d);
    }
    if (by_snippet.empty()) throw MissingMetric("no record carries " + std::string(metric_name(metric)));
    std::vector<AggregatedScore> out;
    for (const auto& [id, ds] : by_snippet) out.push_back(aggregate_snippet(std::string(id), metric, ds));
    return out;
}

LabeledDataset build_ac_dataset(const extract::FeatureTable& features, const MeasurementTable& m, Metric metric,
                                Setting setting) {
    if (setting == Setting::SnippetWise && !snippet_wise_ac_supported(metric))
        throw UnsupportedMetric(std::string(metric_name(metric)) +
                                " is excluded for snippet-wise AC (aggregated classes too small)");
    const auto idx = make_index(features, m, metric, setting);
    LabeledDataset ds;
    ds.metric = metric;
    ds.setting = setting;
    ds.task = Task::AC;
    ds.feature_names = catalog_names("");
    std::vector<double> buf;
    if (setting == Setting::SnippetWise) {
        ds.key_names = {"snippet_id"};
        for (const auto& s : idx.snippets) {
            ds.keys.push_back({std::string(s.id)});
            ds.X.append_row(s.f);
            ds.y.push_back(ac_label_snippet({std::string(s.id), metric, s.mean}));
        }
    } else {
        ds.key_names = {"snippet_id", "participant_id"};
        append_dev_names(ds.feature_names, idx.dev_names);
        for (const auto& s : idx.snippets) {
            for (const auto& j : s.judgments) {
                buf.assign(s.f.begin(), s.f.end());
                buf.insert(buf.end(), j.dev.begin(), j.dev.end());
                ds.keys.push_back({std::string(s.id), std::string(j.participant)});
                ds.X.append_row(buf);
                ds.y.push_back(ac_label_developer(metric, j.value));
            }
        }
    }
    ds.distribution = class_distribution(ds.y);
    return ds;
}

LabeledDataset build_rc_dataset(const extract::FeatureTable& features, const MeasurementTable& m, Metric metric,
                                Setting setting, RcConfig config) {
    const RcPairs pairs(features, m, metric, setting, config);
    LabeledDataset ds;
    ds.metric = metric;
    ds.setting = setting;
    ds.task = Task::RC;
    ds.epsilon = config.epsilon;
    ds.key_names = pairs.key_names();
    ds.feature_names = pairs.feature_names();
    const auto n = pairs.count();
    ds.X = Matrix(0, pairs.feature_width());
    ds.X.reserve_rows(n);
    ds.keys.reserve(n);
    ds.y.reserve(n);
    std::vector<double> buf;
    pairs.for_each([&](const RcRow& r) {
        buf.assign(r.f1.begin(), r.f1.end());
        buf.insert(buf.end(), r.f2.begin(), r.f2.end());
        buf.insert(buf.end(), r.dev.begin(), r.dev.end());
        ds.X.append_row(buf);
        if (setting == Setting::DeveloperWise) ds.keys.push_back({std::string(r.s1), std::string(r.s2), std::string(r.participant)});
        else ds.keys.push_back({std::string(r.s1), std::string(r.s2)});
        ds.y.push_back(r.label);
    });
    if (ds.y.empty()) throw EmptyDataset("no RC pairs could be formed");
    ds.distribution = class_distribution(ds.y);
    return ds;
}

std::string instances_csv(const LabeledDataset& ds) {
    csv::Row header = ds.key_names;
    header.insert(header.end(), ds.feature_names.begin(), ds.feature_names.end());
    header.push_back("label");
    std::string out = csv::join(header) + "\n";
    for (std::size_t r = 0; r < ds.size(); ++r) {
        csv::Row row = ds.keys[r];
        for (double v : ds.X.row(r)) row.push_back(csv::format_fixed(v));
        row.push_back(std::to_string(ds.y[r]));
        out += csv::join(row) + "\n";
    }
    return out;
}

std::string dataset_manifest_json(const LabeledDataset& ds, const std::string& feature_table_path) {
    nlohmann::ordered_json j;
    j["metric"] = metric_name(ds.metric);
    j["setting"] = setting_name(ds.setting);
    j["task"] = task_name(ds.task);
    if (ds.task == Task::RC) j["epsilon"] = ds.epsilon;
    j["feature_table"] = feature_table_path;
    j["catalog_version"] = extract::kCatalogVersion;
    j["instance_count"] = ds.size();
    auto& dist = j["class_distribution"];
    dist = nlohmann::ordered_json::object();
    for (const auto& [label, count] : ds.distribution.counts)
        dist[std::to_string(label)] = {{"count", count}, {"share", ds.distribution.share(label)}};
    return j.dump(2) + "\n";
}

}  // namespace cl::dataset
