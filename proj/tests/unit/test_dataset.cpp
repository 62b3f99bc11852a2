#include "cl/common/error.hpp"
#include "cl/common/parallel.hpp"
#include "cl/common/rng.hpp"
#include "cl/dataset/build.hpp"
#include "cl/dataset/measurements.hpp"
#include "cl/dataset/metrics.hpp"

#include "../support/fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>

using namespace cl;
using namespace cl::dataset;
using cl::testing::tenths;

namespace {

std::map<int, std::size_t> counts_of(const LabeledDataset& ds) {
    return {ds.distribution.counts.begin(), ds.distribution.counts.end()};
}

// Naive pair labels straight from the definition, no shared code.
std::array<std::uint64_t, 3> oracle_rc_counts(const MeasurementTable& m, Metric metric, double eps) {
    std::map<std::string, std::pair<long, long>> acc;
    for (const auto& r : m.records) {
        const auto v = r.derived().get(metric);
        if (!v) continue;
        acc[r.snippet_id].first += *v;
        acc[r.snippet_id].second += 1;
    }
    std::vector<double> s;
    for (const auto& [id, p] : acc) s.push_back(double(p.first) / double(p.second));
    const bool inv = metric == Metric::BD || metric == Metric::BD50;
    std::array<std::uint64_t, 3> c{};
    for (double a : s)
        for (double b : s) {
            if (a - b > eps) ++c[inv ? 1 : 0];
            else if (b - a > eps) ++c[inv ? 0 : 1];
            else ++c[2];
        }
    return c;
}

MeasurementTable random_table(std::uint64_t seed, int snippets, int participants, Metric metric) {
    Rng rng(seed);
    MeasurementTable t;
    for (int s = 0; s < snippets; ++s)
        for (int p = 0; p < participants; ++p) {
            if (rng.uniform() < 0.3) continue;
            MeasurementRecord r;
            r.dataset_id = "R";
            r.snippet_id = "s" + std::to_string(100 + s);
            r.participant_id = "p" + std::to_string(100 + p);
            if (metric == Metric::RL) r.RL = 1 + int(rng.below(5));
            else {
                r.AU = int(rng.below(4));
                r.PBU = int(rng.below(2));
            }
            t.records.push_back(r);
        }
    return t;
}

extract::FeatureTable features_for(const MeasurementTable& m) {
    extract::FeatureTable ft;
    std::set<std::string> ids;
    for (const auto& r : m.records) ids.insert(r.snippet_id);
    double k = 0;
    for (const auto& id : ids) {
        extract::FeatureVector v;
        v.snippet_id = id;
        for (auto& x : v.values) x = ++k;
        ft.rows.push_back(v);
    }
    return ft;
}

}  // namespace

TEST_CASE("metric names and polarity") {
    CHECK(parse_metric("abu50%") == Metric::ABU50);
    CHECK(parse_metric("RL") == Metric::RL);
    CHECK_THROWS_AS(parse_metric("TNPU"), InvalidArgument);
    for (auto m : kAllMetrics) {
        CHECK(parse_metric(metric_name(m)) == m);
        CHECK((polarity(m) == Polarity::Inverted) == (m == Metric::BD || m == Metric::BD50));
    }
    CHECK(parse_setting("developer-wise") == Setting::DeveloperWise);
    CHECK(parse_task("rc") == Task::RC);
}

TEST_CASE("derived metrics: all AU x PBU combinations") {
    // AU, PBU -> ABU, ABU50, BD, BD50 written out by hand
    const int table[8][6] = {
        {0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 1, 1}, {1, 0, 0, 0, 0, 0}, {1, 1, 0, 0, 1, 1},
        {2, 0, 0, 1, 0, 0}, {2, 1, 0, 1, 1, 0}, {3, 0, 1, 1, 0, 0}, {3, 1, 1, 1, 0, 0},
    };
    for (const auto& row : table) {
        const auto d = derive_metrics(row[0], row[1], std::nullopt);
        CHECK(d.require(Metric::ABU) == row[2]);
        CHECK(d.require(Metric::ABU50) == row[3]);
        CHECK(d.require(Metric::BD) == row[4]);
        CHECK(d.require(Metric::BD50) == row[5]);
        CHECK_THROWS_AS(d.require(Metric::RL), MissingMetric);
    }
    const auto au_only = derive_metrics(2, std::nullopt, std::nullopt);
    CHECK(au_only.require(Metric::ABU50) == 1);
    CHECK_THROWS_AS(au_only.require(Metric::BD), MissingMetric);
    CHECK(derive_metrics(std::nullopt, std::nullopt, 4).require(Metric::RL) == 4);
}

TEST_CASE("aggregate_snippet") {
    auto of = [](std::vector<int> pbu) {
        std::vector<DerivedMetrics> v;
        for (int x : pbu) v.push_back(derive_metrics(std::nullopt, x, std::nullopt));
        return v;
    };
    CHECK(aggregate_snippet("a", Metric::PBU, of({1, 1, 0, 1, 1, 1, 1, 1, 1})).S == doctest::Approx(0.8889).epsilon(1e-4));
    std::vector<DerivedMetrics> rl = {derive_metrics(std::nullopt, std::nullopt, 4)};
    CHECK(aggregate_snippet("a", Metric::RL, rl).S == 4.0);
    std::vector<DerivedMetrics> au;
    for (int x : {3, 2, 2, 1}) au.push_back(derive_metrics(x, std::nullopt, std::nullopt));
    CHECK(aggregate_snippet("a", Metric::AU, au).S == 2.0);
    CHECK_THROWS_AS(aggregate_snippet("a", Metric::RL, au), MissingMetric);
}

TEST_CASE("ac labels") {
    CHECK(ac_label_snippet({"a", Metric::AU, 2.0}) == 1);
    CHECK(ac_label_snippet({"a", Metric::AU, 1.49}) == 0);
    CHECK(ac_label_snippet({"a", Metric::AU, 1.5}) == 1);  // half up to 2, merged to 1
    CHECK(ac_label_snippet({"a", Metric::RL, 3.4}) == 3);
    CHECK(ac_label_snippet({"a", Metric::RL, 2.5}) == 3);
    CHECK(ac_label_snippet({"a", Metric::BD, 0.5}) == 1);
    CHECK_THROWS_AS(ac_label_snippet({"a", Metric::PBU, 0.5}), UnsupportedMetric);
    CHECK_THROWS_AS(ac_label_snippet({"a", Metric::ABU, 0.5}), UnsupportedMetric);
    CHECK_THROWS_AS(ac_label_snippet({"a", Metric::BD50, 0.5}), UnsupportedMetric);
    CHECK(ac_label_developer(Metric::AU, 2) == 2);
}

TEST_CASE("rc_label examples and properties") {
    CHECK(rc_label(0.8, 0.5, Metric::PBU, 0) == 0);
    CHECK(rc_label(0.8, 0.5, Metric::BD, 0) == 1);
    CHECK(rc_label(0.6, 0.5, Metric::AU, 0.11) == 2);
    Rng rng(7);
    for (int i = 0; i < 5000; ++i) {
        const double a = rng.uniform(0, 3), b = rng.uniform(0, 3);
        const auto m = kAllMetrics[rng.below(7)];
        const double eps = rng.uniform(0, 0.5);
        const int l = rc_label(a, b, m, eps), r = rc_label(b, a, m, eps);
        if (l == 2) CHECK(r == 2);
        else CHECK(l + r == 1);
        CHECK(rc_label(a, a, m, eps) == 2);
        CHECK(rc_label(a, a, m, 0.0) == 2);
        // eps = 0 is the plain comparison
        const int plain = a > b ? 0 : (b > a ? 1 : 2);
        const int want = (plain != 2 && polarity(m) == Polarity::Inverted) ? 1 - plain : plain;
        CHECK(rc_label(a, b, m, 0.0) == want);
        if (l == 2) CHECK(rc_label(a, b, m, eps + rng.uniform(0, 0.5)) == 2);
    }
}

TEST_CASE("class_distribution") {
    const std::vector<int> y = {0, 0, 1};
    const auto d = class_distribution(y);
    CHECK(d.n == 3);
    CHECK(d.share(0) == doctest::Approx(2.0 / 3));
    CHECK(d.share(1) == doctest::Approx(1.0 / 3));
    CHECK(d.share(5) == 0.0);
    CHECK_THROWS_AS(class_distribution(std::vector<int>{}), EmptyDataset);
}

TEST_CASE("ingest: schema and value errors") {
    const std::string head = "dataset_id,snippet_id,participant_id,AU,PBU,RL,dev_years\n";
    CHECK(parse_measurements(head + "D,s,p,3,1,,4\n").size() == 1);
    try {
        parse_measurements(head + "D,s,p,3,1,,4\nD,s,q,5,1,,4\n");
        FAIL("expected ValueError");
    } catch (const ValueError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        CHECK(std::string(e.what()).find("AU") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_measurements("dataset_id,snippet_id,AU,PBU,RL\n"), SchemaError);
    CHECK_THROWS_AS(parse_measurements("dataset_id,snippet_id,participant_id,AU,PBU,RL,age\n"), SchemaError);
    CHECK_THROWS_AS(parse_measurements(""), SchemaError);
    CHECK_THROWS_AS(parse_measurements(head + "D,s,p,,,,4\n"), ValueError);
    CHECK_THROWS_AS(parse_measurements(head + "D,s,p,1.5,1,,4\n"), ValueError);
    CHECK_THROWS_AS(parse_measurements(head + "D,s,p,1,2,,4\n"), ValueError);
    CHECK_THROWS_AS(parse_measurements(head + "D,s,p,,,6,4\n"), ValueError);
    CHECK_THROWS_AS(parse_measurements(head + "D,s,p,,,3,x\n"), ValueError);
    CHECK_THROWS_AS(parse_measurements(head + "D,s,p,,,3\n"), ValueError);
    CHECK_THROWS_AS(parse_measurements(head + "D,s,p,,,3,1\nD,s,p,,,4,1\n"), ValueError);

    const auto t = parse_measurements(head + "D,s,p,3,,,\n");
    CHECK(t.dev_names == std::vector<std::string>{"years"});
    CHECK(std::isnan(t.records[0].dev[0]));
    CHECK(parse_measurements(measurements_csv(t)).records[0].AU == 3);
}

TEST_CASE("fixtures ingest with the published row counts") {
    CHECK(cl::testing::ds1().size() == 440);
    CHECK(cl::testing::ds2().size() == 12100);
    CHECK(cl::testing::ds1().dev_names.size() == 3);
    CHECK(cl::testing::ds2().dev_names == std::vector<std::string>{"class_year"});
    const auto again = parse_measurements(measurements_csv(cl::testing::ds1()));
    CHECK(again.size() == 440);
}

TEST_CASE("AC class counts reproduce the published distributions") {
    const auto& f1 = cl::testing::ds1_features();
    const auto& m1 = cl::testing::ds1();
    using C = std::map<int, std::size_t>;

    const auto au = build_ac_dataset(f1, m1, Metric::AU, Setting::SnippetWise);
    CHECK(au.size() == 50);
    CHECK(au.X.cols() == 84);
    CHECK(counts_of(au) == C{{0, 37}, {1, 13}});
    CHECK(tenths(37, 50) == 740);
    CHECK(counts_of(build_ac_dataset(f1, m1, Metric::ABU50, Setting::SnippetWise)) == C{{0, 29}, {1, 21}});
    CHECK(counts_of(build_ac_dataset(f1, m1, Metric::BD, Setting::SnippetWise)) == C{{0, 28}, {1, 22}});
    for (auto m : {Metric::PBU, Metric::ABU, Metric::BD50})
        CHECK_THROWS_AS(build_ac_dataset(f1, m1, m, Setting::SnippetWise), UnsupportedMetric);

    const auto pbu = build_ac_dataset(f1, m1, Metric::PBU, Setting::DeveloperWise);
    CHECK(pbu.size() == 440);
    CHECK(pbu.X.cols() == 84 + 3);
    CHECK(counts_of(pbu) == C{{0, 136}, {1, 304}});
    CHECK(tenths(136, 440) == 309);
    CHECK(tenths(304, 440) == 691);
    CHECK(counts_of(build_ac_dataset(f1, m1, Metric::AU, Setting::DeveloperWise)) ==
          C{{0, 153}, {1, 72}, {2, 138}, {3, 77}});
    CHECK(counts_of(build_ac_dataset(f1, m1, Metric::ABU, Setting::DeveloperWise)) == C{{0, 363}, {1, 77}});
    CHECK(counts_of(build_ac_dataset(f1, m1, Metric::ABU50, Setting::DeveloperWise)) == C{{0, 225}, {1, 215}});
    CHECK(counts_of(build_ac_dataset(f1, m1, Metric::BD, Setting::DeveloperWise)) == C{{0, 213}, {1, 227}});
    CHECK(counts_of(build_ac_dataset(f1, m1, Metric::BD50, Setting::DeveloperWise)) == C{{0, 351}, {1, 89}});

    const auto rl = build_ac_dataset(cl::testing::ds2_features(), cl::testing::ds2(), Metric::RL, Setting::SnippetWise);
    CHECK(counts_of(rl) == C{{2, 13}, {3, 44}, {4, 43}});
    const auto rld = build_ac_dataset(cl::testing::ds2_features(), cl::testing::ds2(), Metric::RL, Setting::DeveloperWise);
    CHECK(counts_of(rld) == C{{1, 889}, {2, 2481}, {3, 3240}, {4, 3290}, {5, 2200}});
    CHECK_THROWS_AS(build_ac_dataset(f1, m1, Metric::RL, Setting::SnippetWise), MissingMetric);
}

TEST_CASE("AC developer-wise rows carry code then developer features") {
    const auto& f1 = cl::testing::ds1_features();
    const auto ds = build_ac_dataset(f1, cl::testing::ds1(), Metric::AU, Setting::DeveloperWise);
    CHECK(ds.key_names == std::vector<std::string>{"snippet_id", "participant_id"});
    CHECK(ds.feature_names.back() == "dev_position");
    CHECK(std::is_sorted(ds.keys.begin(), ds.keys.end()));
    const auto row = f1.find(ds.keys[0][0]);
    for (std::size_t c = 0; c < 84; ++c) CHECK(ds.X(0, c) == f1.rows[row].values[c]);
}

TEST_CASE("join errors name the missing snippet") {
    auto ft = cl::testing::ds1_features();
    const auto gone = ft.rows[7].snippet_id;
    ft.rows.erase(ft.rows.begin() + 7);
    try {
        build_ac_dataset(ft, cl::testing::ds1(), Metric::AU, Setting::SnippetWise);
        FAIL("expected JoinError");
    } catch (const JoinError& e) {
        CHECK(std::string(e.what()).find(gone) != std::string::npos);
    }
    CHECK_THROWS_AS(build_rc_dataset(ft, cl::testing::ds1(), Metric::AU, Setting::SnippetWise), JoinError);
}

TEST_CASE("snippet-wise RC on DS1-shaped data") {
    const auto& f1 = cl::testing::ds1_features();
    const auto& m1 = cl::testing::ds1();
    const auto au = build_rc_dataset(f1, m1, Metric::AU, Setting::SnippetWise);
    REQUIRE(au.size() == 2500);
    CHECK(au.X.cols() == 168);
    CHECK(counts_of(au) == std::map<int, std::size_t>{{0, 1168}, {1, 1168}, {2, 164}});
    CHECK(tenths(1168, 2500) == 467);
    CHECK(tenths(164, 2500) == 66);

    const auto abu = build_rc_dataset(f1, m1, Metric::ABU, Setting::SnippetWise, {0.22});
    CHECK(counts_of(abu) == std::map<int, std::size_t>{{0, 287}, {1, 287}, {2, 1926}});
    CHECK(tenths(287, 2500) == 115);
    CHECK(tenths(1926, 2500) == 770);

    // rows are lexicographic and features are concat(f(c1), f(c2))
    CHECK(std::is_sorted(au.keys.begin(), au.keys.end()));
    std::size_t self = 0;
    for (std::size_t r = 0; r < au.size(); ++r) {
        if (au.keys[r][0] == au.keys[r][1]) {
            ++self;
            CHECK(au.y[r] == 2);
        }
    }
    CHECK(self == 50);
    const auto a = f1.find(au.keys[3][0]), b = f1.find(au.keys[3][1]);
    CHECK(au.X(3, 0) == f1.rows[a].values[0]);
    CHECK(au.X(3, 84) == f1.rows[b].values[0]);

    const auto no_self = build_rc_dataset(f1, m1, Metric::AU, Setting::SnippetWise, {0.0, false});
    CHECK(no_self.size() == 2450);
}

TEST_CASE("RC labels agree with the naive oracle for every metric and eps") {
    const auto& f1 = cl::testing::ds1_features();
    const auto& m1 = cl::testing::ds1();
    for (auto m : {Metric::AU, Metric::PBU, Metric::ABU, Metric::ABU50, Metric::BD, Metric::BD50}) {
        std::uint64_t prev = 0;
        for (double eps : {0.0, 0.11, 0.22}) {
            const RcPairs pairs(f1, m1, m, Setting::SnippetWise, {eps});
            const auto c = pairs.label_counts();
            CHECK(c == oracle_rc_counts(m1, m, eps));
            CHECK(c[0] == c[1]);
            CHECK(c[2] >= prev);
            prev = c[2];
        }
    }
}

TEST_CASE("developer-wise RC on DS1-shaped data") {
    const auto& f1 = cl::testing::ds1_features();
    const auto& m1 = cl::testing::ds1();
    // Independent count: per participant k_p^2.
    std::map<std::string, std::uint64_t> k;
    for (const auto& r : m1.records) ++k[r.participant_id];
    std::uint64_t sum_sq = 0;
    for (const auto& [p, n] : k) sum_sq += n * n;
    CHECK(sum_sq == 3324);

    // label-2 shares at eps = 0
    const std::map<Metric, std::int64_t> share2 = {{Metric::AU, 412},  {Metric::PBU, 662}, {Metric::ABU, 760},
                                                  {Metric::ABU50, 616}, {Metric::BD, 593},  {Metric::BD50, 744}};
    for (const auto& [m, want] : share2) {
        const RcPairs pairs(f1, m1, m, Setting::DeveloperWise);
        CHECK(pairs.count() == 3324);
        const auto c = pairs.label_counts();
        CHECK(c == pairs.label_counts_serial());
        CHECK(c[0] + c[1] + c[2] == 3324);
        CHECK(c[0] == c[1]);
        CHECK(tenths(c[2], 3324) == want);
    }

    const auto ds = build_rc_dataset(f1, m1, Metric::AU, Setting::DeveloperWise);
    CHECK(ds.size() == 3324);
    CHECK(ds.X.cols() == 168 + 3);
    CHECK(ds.key_names.size() == 3);
    CHECK(std::is_sorted(ds.keys.begin(), ds.keys.end()));
    // labels come from the participant's own raw values
    std::map<std::pair<std::string, std::string>, int> raw;
    for (const auto& r : m1.records) raw[{r.snippet_id, r.participant_id}] = *r.AU;
    for (std::size_t i = 0; i < ds.size(); i += 17) {
        const int a = raw.at({ds.keys[i][0], ds.keys[i][2]});
        const int b = raw.at({ds.keys[i][1], ds.keys[i][2]});
        CHECK(ds.y[i] == (a > b ? 0 : b > a ? 1 : 2));
    }
}

TEST_CASE("DS2-shaped data: 10,000 pairs and 1.21M streamed triplets") {
    const auto& f2 = cl::testing::ds2_features();
    const auto& m2 = cl::testing::ds2();
    const std::array<std::array<std::uint64_t, 3>, 3> want = {{{4928, 4928, 144}, {4487, 4487, 1026}, {4005, 4005, 1990}}};
    const std::array<std::int64_t, 3> want0 = {493, 449, 401};
    const std::array<std::int64_t, 3> want2 = {14, 103, 199};
    const double eps[3] = {0.0, 0.11, 0.22};
    for (int i = 0; i < 3; ++i) {
        const RcPairs pairs(f2, m2, Metric::RL, Setting::SnippetWise, {eps[i]});
        CHECK(pairs.count() == 10000);
        const auto c = pairs.label_counts();
        CHECK(c == want[i]);
        CHECK(tenths(c[0], 10000) == want0[i]);
        CHECK(tenths(c[2], 10000) == want2[i]);
    }

    const RcPairs dev(f2, m2, Metric::RL, Setting::DeveloperWise);
    CHECK(dev.count() == 1210000);
    CHECK(dev.feature_width() == 169);
    const auto c = dev.label_counts();
    CHECK(c[0] + c[1] + c[2] == 1210000);
    CHECK(c[0] == c[1]);
    CHECK(c[2] == 327330);
    CHECK(tenths(c[2], 1210000) == 271);
    CHECK(c == dev.label_counts_serial());
}

TEST_CASE("streamed order is lexicographic by (s1, s2, participant)") {
    const RcPairs pairs(cl::testing::ds1_features(), cl::testing::ds1(), Metric::BD, Setting::DeveloperWise);
    std::tuple<std::string, std::string, std::string> last;
    std::uint64_t n = 0;
    bool ordered = true;
    pairs.for_each([&](const RcRow& r) {
        std::tuple<std::string, std::string, std::string> key{std::string(r.s1), std::string(r.s2), std::string(r.participant)};
        if (n++ && !(last < key)) ordered = false;
        last = std::move(key);
        CHECK(r.dev.size() == 3);
    });
    CHECK(ordered);
    CHECK(n == 3324);
}

TEST_CASE("parallel label counts are thread-count independent") {
    const RcPairs pairs(cl::testing::ds1_features(), cl::testing::ds1(), Metric::ABU50, Setting::DeveloperWise, {0.5});
    const auto ref = pairs.label_counts_serial();
    for (int t : {1, 2, 3, 8}) {
        parallel::set_thread_count(t);
        CHECK(pairs.label_counts() == ref);
    }
    parallel::set_thread_count(0);
}

TEST_CASE("property: combinatorics on random tables") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto metric = seed % 2 ? Metric::RL : Metric::BD50;
        const auto m = random_table(seed, 3 + int(seed % 9), 2 + int(seed % 7), metric);
        if (m.records.empty()) continue;
        const auto ft = features_for(m);
        const auto ds = build_rc_dataset(ft, m, metric, Setting::SnippetWise);
        std::set<std::string> ids;
        for (const auto& r : m.records) ids.insert(r.snippet_id);
        CHECK(ds.size() == ids.size() * ids.size());
        CHECK(ds.distribution.share(0) == ds.distribution.share(1));

        std::map<std::string, std::uint64_t> k;
        for (const auto& r : m.records) ++k[r.participant_id];
        std::uint64_t sum_sq = 0;
        for (const auto& [p, n] : k) sum_sq += n * n;
        std::uint64_t prev = 0;
        for (double eps : {0.0, 0.11, 0.22, 0.5, 1.0}) {
            const RcPairs dev(ft, m, metric, Setting::DeveloperWise, {eps});
            CHECK(dev.count() == sum_sq);
            const auto c = dev.label_counts();
            CHECK(c[0] + c[1] + c[2] == sum_sq);
            CHECK(c[0] == c[1]);
            CHECK(c[2] >= prev);
            prev = c[2];
        }
    }
}

TEST_CASE("rejects negative epsilon and mixed datasets") {
    CHECK_THROWS_AS(RcPairs(cl::testing::ds1_features(), cl::testing::ds1(), Metric::AU, Setting::SnippetWise, {-0.1}),
                    InvalidArgument);
    auto mixed = cl::testing::ds1();
    mixed.records[0].dataset_id = "OTHER";
    CHECK_THROWS_AS(build_ac_dataset(cl::testing::ds1_features(), mixed, Metric::AU, Setting::SnippetWise), SchemaError);
    CHECK(mixed.only("OTHER").size() == 1);
}

TEST_CASE("instances CSV and manifest") {
    const auto ds = build_ac_dataset(cl::testing::ds1_features(), cl::testing::ds1(), Metric::BD, Setting::SnippetWise);
    const auto text = instances_csv(ds);
    CHECK(text.starts_with("snippet_id,cyclomatic_complexity,"));
    CHECK(std::count(text.begin(), text.end(), '\n') == 51);
    const auto first_line = text.substr(0, text.find('\n'));
    CHECK(first_line.ends_with(",label"));

    const auto j = nlohmann::json::parse(dataset_manifest_json(ds, "features.csv"));
    CHECK(j["metric"] == "BD");
    CHECK(j["setting"] == "snippet-wise");
    CHECK(j["instance_count"] == 50);
    CHECK(j["class_distribution"]["1"]["count"] == 22);
    CHECK(!j.contains("epsilon"));
    const auto rc = build_rc_dataset(cl::testing::ds1_features(), cl::testing::ds1(), Metric::BD, Setting::SnippetWise, {0.11});
    const auto jr = nlohmann::json::parse(dataset_manifest_json(rc, "features.csv"));
    CHECK(jr["epsilon"] == 0.11);
    CHECK(instances_csv(rc).starts_with("snippet_id_1,snippet_id_2,s1_cyclomatic_complexity"));
}
