#include "cl/dataset/metrics.hpp"

#include "cl/common/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace cl::dataset {

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::AU: return "AU";
        case Metric::PBU: return "PBU";
        case Metric::ABU: return "ABU";
        case Metric::ABU50: return "ABU50";
        case Metric::BD: return "BD";
        case Metric::BD50: return "BD50";
        case Metric::RL: return "RL";
    }
    return "?";
}

Metric parse_metric(std::string_view text) {
    auto u = upper(text);
    if (!u.empty() && u.back() == '%') u.pop_back();
    for (auto m : kAllMetrics)
        if (u == metric_name(m)) return m;
    throw InvalidArgument("unknown metric '" + std::string(text) + "' (expected AU, PBU, ABU, ABU50, BD, BD50, RL)");
}

Polarity polarity(Metric m) {
    return (m == Metric::BD || m == Metric::BD50) ? Polarity::Inverted : Polarity::Normal;
}

std::string_view setting_name(Setting s) { return s == Setting::SnippetWise ? "snippet-wise" : "developer-wise"; }

Setting parse_setting(std::string_view text) {
    const auto l = lower(text);
    if (l == "snippet-wise" || l == "snippet") return Setting::SnippetWise;
    if (l == "developer-wise" || l == "developer") return Setting::DeveloperWise;
    throw InvalidArgument("unknown setting '" + std::string(text) + "' (expected snippet-wise or developer-wise)");
}

std::string_view task_name(Task t) { return t == Task::AC ? "AC" : "RC"; }

Task parse_task(std::string_view text) {
    const auto u = upper(text);
    if (u == "AC") return Task::AC;
    if (u == "RC") return Task::RC;
    throw InvalidArgument("unknown task '" + std::string(text) + "' (expected AC or RC)");
}

bool snippet_wise_ac_supported(Metric m) {
    return m != Metric::PBU && m != Metric::ABU && m != Metric::BD50;
}

std::optional<int> DerivedMetrics::get(Metric m) const {
    switch (m) {
        case Metric::AU: return AU;
        case Metric::PBU: return PBU;
        case Metric::ABU: return ABU;
        case Metric::ABU50: return ABU50;
        case Metric::BD: return BD;
        case Metric::BD50: return BD50;
        case Metric::RL: return RL;
    }
    return std::nullopt;
}

int DerivedMetrics::require(Metric m) const {
    const auto v = get(m);
    if (!v) throw MissingMetric(std::string(metric_name(m)) + " cannot be derived from this record");
    return *v;
}

DerivedMetrics derive_metrics(std::optional<int> au, std::optional<int> pbu, std::optional<int> rl) {
    DerivedMetrics d;
    d.AU = au;
    d.PBU = pbu;
    d.RL = rl;
    if (au) {
        d.ABU = *au == 3 ? 1 : 0;
        d.ABU50 = *au >= 2 ? 1 : 0;
    }
    if (au && pbu) {
        d.BD = (*pbu == 1 && *d.ABU == 0) ? 1 : 0;
        d.BD50 = (*pbu == 1 && *d.ABU50 == 0) ? 1 : 0;
    }
    return d;
}

AggregatedScore aggregate_snippet(std::string snippet_id, Metric metric, std::span<const DerivedMetrics> values) {
    long sum = 0;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (auto x = v.get(metric)) {
            sum += *x;
            ++n;
        }
    }
    if (n == 0)
        throw MissingMetric("snippet " + snippet_id + " has no " + std::string(metric_name(metric)) + " values");
    return {std::move(snippet_id), metric, static_cast<double>(sum) / static_cast<double>(n)};
}

int ac_label_snippet(const AggregatedScore& score) {
    if (!snippet_wise_ac_supported(score.metric))
        throw UnsupportedMetric(std::string(metric_name(score.metric)) +
                                " is excluded for snippet-wise AC (aggregated classes too small)");
    const int r = static_cast<int>(std::floor(score.S + 0.5));
    if (score.metric == Metric::AU) return r >= 2 ? 1 : 0;
    return r;
}

int ac_label_developer(Metric, int raw_value) { return raw_value; }

int rc_label(double s1, double s2, Metric metric, double eps) {
    int label = 2;
    if (s1 - s2 > eps) label = 0;
    else if (s2 - s1 > eps) label = 1;
    if (label != 2 && polarity(metric) == Polarity::Inverted) label = 1 - label;
    return label;
}

double ClassDistribution::share(int label) const {
    const auto it = counts.find(label);
    if (it == counts.end() || n == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(n);
}

ClassDistribution class_distribution(std::span<const int> labels) {
    if (labels.empty()) throw EmptyDataset("class distribution of an empty dataset");
    ClassDistribution d;
    for (int l : labels) d.add(l);
    return d;
}

}  // namespace cl::dataset
