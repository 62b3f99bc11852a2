#include "cl/common/error.hpp"
#include "cl/common/parallel.hpp"
#include "cl/common/rng.hpp"
#include "cl/learn/families.hpp"
#include "cl/learn/pipeline.hpp"
#include "cl/learn/preprocess.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace cl;
using namespace cl::learn;

namespace {

Matrix from_rows(std::initializer_list<std::vector<double>> rows) {
    Matrix m;
    for (const auto& r : rows) m.append_row(r);
    return m;
}

// All-pairs tau-b straight from the definition.
double brute_tau_b(const std::vector<double>& x, const std::vector<int>& y) {
    long long c = 0, d = 0, tx = 0, ty = 0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const int dy = y[i] - y[j];
            if (dx == 0 && dy == 0) continue;
            if (dx == 0) ++tx;
            else if (dy == 0) ++ty;
            else if ((dx > 0) == (dy > 0)) ++c;
            else ++d;
        }
    const double denom = std::sqrt(double(c + d + tx)) * std::sqrt(double(c + d + ty));
    return denom == 0 ? 0.0 : double(c - d) / denom;
}

struct Blobs {
    Matrix X;
    std::vector<int> y;
};

// Well separated Gaussian blobs, one per label, centers spaced on a line.
Blobs blobs(std::vector<int> labels, std::size_t per_class, std::size_t d, std::uint64_t seed, double gap = 6.0) {
    Rng rng(seed);
    Blobs b;
    for (std::size_t k = 0; k < labels.size(); ++k)
        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<double> row(d);
            for (std::size_t c = 0; c < d; ++c) row[c] = rng.normal() + (c == 0 ? gap * double(k) : 0.0);
            b.X.append_row(row);
            b.y.push_back(labels[k]);
        }
    return b;
}

double accuracy(const Classifier& m, const Matrix& X, const std::vector<int>& y) {
    std::size_t ok = 0;
    for (std::size_t r = 0; r < X.rows(); ++r) ok += m.predict(X.row(r)) == y[r];
    return double(ok) / double(X.rows());
}

std::vector<std::string> names_for(std::size_t d) {
    std::vector<std::string> out;
    for (std::size_t c = 0; c < d; ++c) out.push_back("f" + std::to_string(c));
    return out;
}

}  // namespace

TEST_CASE("dedup keeps first occurrence and conflicting labels") {
    const auto X = from_rows({{1, 2}, {1, 2}, {3, 4}, {1, 2}, {-0.0, 5}, {0.0, 5}});
    const std::vector<int> y = {0, 0, 1, 1, 0, 0};
    CHECK(dedup_indices(X, y) == std::vector<std::size_t>{0, 2, 3, 4});
    const auto rows = dedup_training(X, y);
    CHECK(rows.X.rows() == 4);
    CHECK(rows.y == std::vector<int>{0, 1, 1, 0});

    const auto distinct = from_rows({{1}, {2}, {3}});
    CHECK(dedup_indices(distinct, std::vector<int>{0, 0, 0}).size() == 3);
}

TEST_CASE("standardizer uses population sd") {
    const auto X = from_rows({{2, 5}, {4, 5}, {6, 5}});
    const auto s = Standardizer::fit(X);
    CHECK(s.mean()[0] == doctest::Approx(4.0));
    CHECK(s.sd()[0] == doctest::Approx(1.63299).epsilon(1e-5));
    CHECK(s.sd()[1] == 1.0);
    const auto Z = s.transform(X);
    CHECK(Z(2, 0) == doctest::Approx(1.22474).epsilon(1e-5));
    CHECK(Z(0, 1) == 0.0);
    CHECK(Z(1, 1) == 0.0);

    // fitted columns have mean 0; fitting again is the identity
    double m = 0;
    for (std::size_t r = 0; r < 3; ++r) m += Z(r, 0);
    CHECK(std::fabs(m) < 1e-9);
    const auto Z2 = Standardizer::fit(Z).transform(Z);
    for (std::size_t r = 0; r < 3; ++r) CHECK(std::fabs(Z2(r, 0) - Z(r, 0)) < 1e-9);

    CHECK_THROWS_AS(Standardizer::fit(Matrix(0, 3)), EmptyTraining);
    std::vector<double> out(1);
    CHECK_THROWS_AS(s.transform_row(std::vector<double>{1}, out), ArityMismatch);
}

TEST_CASE("transforming held-out rows leaves the fit untouched") {
    const auto X = from_rows({{1, 10}, {3, 20}, {5, 60}});
    const auto s = Standardizer::fit(X);
    const auto mean = s.mean(), sd = s.sd();
    (void)s.transform(from_rows({{1000, -1000}, {7, 7}}));
    CHECK(s.mean() == mean);
    CHECK(s.sd() == sd);
}

TEST_CASE("kendall tau-b examples") {
    CHECK(kendall_tau_b(std::vector<double>{1, 2, 3, 4}, std::vector<int>{0, 0, 1, 1}) ==
          doctest::Approx(0.816497).epsilon(1e-6));
    CHECK(kendall_tau_b(std::vector<double>{1, 2, 3, 4}, std::vector<int>{1, 2, 3, 4}) == doctest::Approx(1.0));
    CHECK(kendall_tau_b(std::vector<double>{4, 3, 2, 1}, std::vector<int>{1, 2, 3, 4}) == doctest::Approx(-1.0));
    CHECK(kendall_tau_b(std::vector<double>{7, 7, 7}, std::vector<int>{1, 1, 1}) == 0.0);
    CHECK(kendall_tau_b(std::vector<double>{7, 7, 7}, std::vector<int>{0, 1, 2}) == 0.0);
    CHECK_THROWS_AS(kendall_tau_b(std::vector<double>{1}, std::vector<int>{1}), TooFewSamples);
}

TEST_CASE("tau-b matches all-pairs oracle on random data") {
    Rng rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 + rng.below(49);
        const std::size_t levels = 1 + rng.below(6);
        std::vector<double> x(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = trial % 2 ? double(rng.below(levels + 2)) : rng.normal();
            y[i] = int(rng.below(levels));
        }
        CHECK(std::fabs(kendall_tau_b(x, y) - brute_tau_b(x, y)) < 1e-12);
    }
}

TEST_CASE("feature ranking and selection") {
    CHECK(selected_count(84, 0.1) == 9);
    CHECK(selected_count(84, 1.0) == 84);
    CHECK(selected_count(84, 0.5) == 42);
    CHECK(selected_count(10, 0.3) == 3);
    CHECK(selected_count(3, 0.1) == 1);
    CHECK_THROWS_AS(selected_count(10, 0.0), InvalidArgument);
    CHECK_THROWS_AS(selected_count(10, 1.5), InvalidArgument);

    // feature 7 alone decides the label
    Rng rng(3);
    Matrix X;
    std::vector<int> y;
    for (int i = 0; i < 200; ++i) {
        std::vector<double> row(84);
        for (auto& v : row) v = rng.normal();
        y.push_back(row[7] > 0 ? 1 : 0);
        X.append_row(row);
    }
    const auto ranking = rank_features(X, y);
    CHECK(ranking.order[0] == 7);
    const auto top = select_features(ranking, 0.1);
    CHECK(top.size() == 9);
    CHECK(std::find(top.begin(), top.end(), 7) != top.end());
    CHECK(std::is_sorted(top.begin(), top.end()));

    const auto all = select_features(ranking, 1.0);
    CHECK(all.size() == 84);
    for (std::size_t c = 0; c < 84; ++c) CHECK(all[c] == c);

    for (int threads : {1, 2, 3}) {
        parallel::set_thread_count(threads);
        const auto par = rank_features(X, y);
        const auto ser = rank_features_serial(X, y);
        CHECK(par.tau == ser.tau);
        CHECK(par.order == ser.order);
    }
    parallel::set_thread_count(0);
}

TEST_CASE("ranking ties keep column order") {
    const auto X = from_rows({{1, 1, 0}, {2, 2, 0}, {3, 3, 0}});
    const auto r = rank_features(X, std::vector<int>{0, 1, 2});
    CHECK(r.order == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("smote reproduces the interpolation formula") {
    const auto X = from_rows({{0, 0}, {1, 1}, {5, 5}, {6, 6}, {7, 7}});
    const std::vector<int> y = {1, 1, 0, 0, 0};
    SmoteConfig cfg;
    cfg.k = 1;
    cfg.seed = 99;
    const auto res = smote(X, y, cfg);
    REQUIRE(res.X.rows() == 6);
    CHECK(res.n_original == 5);
    CHECK(res.y.back() == 1);

    // replay the generator: base row, neighbour slot, u
    Rng rng(99);
    const auto base = rng.below(2);
    (void)rng.below(1);
    const double u = rng.uniform();
    const double expect = base == 0 ? u : 1.0 - u;
    CHECK(res.X(5, 0) == doctest::Approx(expect));
    CHECK(res.X(5, 1) == doctest::Approx(expect));
    // the u = 0.5 case is the midpoint
    CHECK(0.0 + 0.5 * (1.0 - 0.0) == 0.5);
}

TEST_CASE("smote balances classes") {
    Rng rng(5);
    Matrix X;
    std::vector<int> y;
    for (int i = 0; i < 14; ++i) {
        X.append_row(std::vector<double>{rng.normal(), rng.normal()});
        y.push_back(i < 10 ? 7 : 3);
    }
    const auto res = smote(X, y, SmoteConfig{});
    std::map<int, int> counts;
    for (int v : res.y) ++counts[v];
    CHECK(counts[7] == 10);
    CHECK(counts[3] == 10);
    // originals come first and untouched
    for (std::size_t r = 0; r < 14; ++r) CHECK(res.X.row(r)[0] == X.row(r)[0]);
    CHECK(res.warnings.empty());
}

TEST_CASE("smote synthetic points lie on segments to true nearest neighbours") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng gen(seed + 1000);
        Matrix X;
        std::vector<int> y;
        const std::size_t nb = 2 + gen.below(6);
        for (std::size_t i = 0; i < 15 + nb; ++i) {
            X.append_row(std::vector<double>{gen.normal(), gen.normal(), gen.normal()});
            y.push_back(i < 15 ? 0 : 1);
        }
        SmoteConfig cfg;
        cfg.k = 3;
        cfg.seed = seed;
        const auto res = smote(X, y, cfg);
        const std::size_t k = std::min<std::size_t>(3, nb - 1);
        std::vector<std::size_t> minority;
        for (std::size_t r = 0; r < X.rows(); ++r)
            if (y[r] == 1) minority.push_back(r);

        for (std::size_t s = X.rows(); s < res.X.rows(); ++s) {
            CHECK(res.y[s] == 1);
            const auto p = res.X.row(s);
            bool found = false;
            for (auto a : minority) {
                // brute-force k nearest of a
                std::vector<std::pair<double, std::size_t>> d;
                for (auto b : minority) {
                    if (b == a) continue;
                    double s2 = 0;
                    for (int c = 0; c < 3; ++c) s2 += std::pow(X(a, c) - X(b, c), 2);
                    d.emplace_back(s2, b);
                }
                std::sort(d.begin(), d.end());
                for (std::size_t i = 0; i < k && !found; ++i) {
                    const auto b = d[i].second;
                    const double dx = X(b, 0) - X(a, 0);
                    const double u = dx != 0 ? (p[0] - X(a, 0)) / dx : 0.0;
                    if (u < -1e-12 || u > 1 + 1e-12) continue;
                    bool on = true;
                    for (int c = 0; c < 3; ++c) on = on && std::fabs(X(a, c) + u * (X(b, c) - X(a, c)) - p[c]) < 1e-9;
                    found = on;
                }
                if (found) break;
            }
            CHECK(found);
        }
    }
}

TEST_CASE("smote with a singleton class") {
    const auto X = from_rows({{0}, {1}, {2}, {9}});
    const std::vector<int> y = {0, 0, 0, 1};
    const auto res = smote(X, y, SmoteConfig{});
    CHECK(res.X.rows() == 6);
    CHECK(res.X(4, 0) == 9);
    CHECK(res.X(5, 0) == 9);
    REQUIRE(res.warnings.size() == 1);
    CHECK(res.warnings[0].find("TooFewSamples") != std::string::npos);

    SmoteConfig strict;
    strict.duplicate_singletons = false;
    CHECK_THROWS_AS(smote(X, y, strict), TooFewSamples);
}

TEST_CASE("grids expand to the documented sizes") {
    const std::map<Family, std::size_t> sizes = {{Family::NB, 2},  {Family::KNN, 10}, {Family::LR, 4},
                                                 {Family::MLP, 6}, {Family::RF, 9},   {Family::SVM, 6}};
    for (auto f : kAllFamilies) {
        const auto grid = expand_grid(default_spec(f));
        CHECK(grid.size() == sizes.at(f));
        for (const auto& hp : grid) CHECK_NOTHROW(make_classifier(f, hp, 1));
    }
    CHECK_THROWS_AS(make_classifier(Family::NB, {{"k", 3.0}}, 0), InvalidArgument);
    CHECK_THROWS_AS(make_classifier(Family::KNN, {{"k", 2.5}}, 0), InvalidArgument);
    CHECK_THROWS_AS(make_classifier(Family::MLP, {{"hidden", std::string("3-x")}}, 0), InvalidArgument);
    CHECK_THROWS_AS(parse_family("GBM"), InvalidArgument);
    CHECK(parse_family("rf") == Family::RF);
}

TEST_CASE("every family separates well spaced blobs") {
    const auto train = blobs({0, 1}, 100, 4, 21);
    for (auto f : kAllFamilies)
        for (const auto& hp : expand_grid(default_spec(f))) {
            const auto m = train_model(train.X, train.y, names_for(4), f, hp, TrainOptions{}, 5);
            INFO(family_name(f), " ", format_params(hp));
            CHECK(accuracy(*m.classifier, m.standardizer.transform(train.X), train.y) >= 0.95);
            for (std::size_t r = 0; r < 10; ++r) {
                const int p = m.predict(train.X.row(r));
                CHECK((p == 0 || p == 1));
            }
        }
}

TEST_CASE("three-class blobs with arbitrary label values") {
    const auto train = blobs({2, 5, 9}, 100, 3, 8);
    for (auto f : kAllFamilies) {
        const auto m = train_model(train.X, train.y, names_for(3), f, {}, TrainOptions{}, 1);
        INFO(family_name(f));
        CHECK(m.labels == std::vector<int>{2, 5, 9});
        CHECK(accuracy(*m.classifier, m.standardizer.transform(train.X), train.y) >= 0.95);
        CHECK(m.scores(train.X.row(0)).size() == 3);
    }
}

TEST_CASE("fit contract errors") {
    const auto X = from_rows({{1}, {2}});
    for (auto f : kAllFamilies) {
        auto m = make_classifier(f, {}, 0);
        CHECK_THROWS_AS(m->fit(X, std::vector<int>{4, 4}), SingleClassTraining);
        CHECK_THROWS_AS(m->fit(Matrix(0, 1), std::vector<int>{}), EmptyTraining);
        m->fit(X, std::vector<int>{0, 1});
        CHECK_THROWS_AS((void)m->predict(std::vector<double>{1, 2}), ArityMismatch);
    }
}

TEST_CASE("tie policies resolve to the lowest label") {
    SUBCASE("knn nearest neighbour") {
        KNearest knn(1);
        knn.fit(from_rows({{0, 0}, {5, 5}}), std::vector<int>{3, 8});
        CHECK(knn.predict(std::vector<double>{0.01, 0}) == 3);
        // equidistant: earlier training row wins, which is also the lower label here
        CHECK(knn.predict(std::vector<double>{2.5, 2.5}) == 3);
    }
    SUBCASE("knn vote tie") {
        KNearest knn(2);
        knn.fit(from_rows({{1}, {-1}}), std::vector<int>{9, 4});
        CHECK(knn.predict(std::vector<double>{0.3}) == 4);
    }
    SUBCASE("naive bayes midpoint") {
        GaussianNB nb;
        nb.fit(from_rows({{-1}, {-3}, {1}, {3}}), std::vector<int>{5, 5, 9, 9});
        CHECK(nb.predict(std::vector<double>{0}) == 5);
        CHECK(nb.predict(std::vector<double>{0.5}) == 9);
    }
    SUBCASE("forest vote") {
        const std::vector<std::size_t> aab = {0, 0, 1};
        CHECK(majority_vote(aab, 2) == 0);
        const std::vector<std::size_t> bba = {1, 1, 0};
        CHECK(majority_vote(bba, 2) == 1);
        const std::vector<std::size_t> tie = {2, 1, 1, 2};
        CHECK(majority_vote(tie, 3) == 1);
    }
    CHECK(argmax_first(std::vector<double>{0.2, 0.4, 0.4}) == 1);
}

TEST_CASE("random forest parallel and serial fits agree") {
    const auto train = blobs({0, 1, 2}, 50, 6, 4, 1.5);
    for (int threads : {1, 2, 4}) {
        parallel::set_thread_count(threads);
        RandomForest a(30, 0, 17), b(30, 0, 17);
        a.fit(train.X, train.y);
        b.fit_serial(train.X, train.y);
        CHECK(a.save() == b.save());
    }
    parallel::set_thread_count(0);
}

TEST_CASE("svm solves xor with rbf and not with a line") {
    Matrix X;
    std::vector<int> y;
    Rng rng(2);
    for (int i = 0; i < 80; ++i) {
        const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
        if (std::fabs(a) < 0.1 || std::fabs(b) < 0.1) continue;
        X.append_row(std::vector<double>{a, b});
        y.push_back((a > 0) == (b > 0) ? 1 : 0);
    }
    Svm rbf(Kernel::Rbf, 10);
    rbf.fit(X, y);
    CHECK(accuracy(rbf, X, y) >= 0.95);
    Svm lin(Kernel::Linear, 10);
    lin.fit(X, y);
    CHECK(accuracy(lin, X, y) < 0.8);
}

TEST_CASE("trained pipeline serializes round trip") {
    auto data = blobs({0, 1, 2}, 30, 6, 12, 3.0);
    const auto names = names_for(6);
    TrainOptions opt;
    opt.fraction = 0.5;
    opt.smote.seed = 4;
    Rng rng(77);
    for (auto f : kAllFamilies) {
        INFO(family_name(f));
        const auto model = train_model(data.X, data.y, names, f, expand_grid(default_spec(f)).front(), opt, 31);
        CHECK(model.subset.size() == 3);
        const auto bytes = serialize(model);
        const auto back = deserialize(bytes);
        CHECK(serialize(back) == bytes);
        CHECK(back.subset_names() == model.subset_names());
        for (int i = 0; i < 100; ++i) {
            std::vector<double> row(6);
            for (auto& v : row) v = rng.normal() * 3;
            CHECK(back.predict_full(row) == model.predict_full(row));
            CHECK(back.scores_full(row) == model.scores_full(row));
        }
        CHECK_THROWS_AS((void)model.predict(std::vector<double>(6, 0.0)), ArityMismatch);
        CHECK_THROWS_AS((void)model.predict_full(std::vector<double>(3, 0.0)), ArityMismatch);

        // same seed, same data: identical bytes
        const auto again = train_model(data.X, data.y, names, f, expand_grid(default_spec(f)).front(), opt, 31);
        CHECK(serialize(again) == bytes);

        CHECK_THROWS_AS(deserialize(bytes.substr(0, bytes.size() / 2)), CorruptModel);
        CHECK_THROWS_AS(deserialize(""), CorruptModel);
    }
}

TEST_CASE("model envelope version and corruption checks") {
    auto data = blobs({0, 1}, 20, 3, 1);
    const auto model = train_model(data.X, data.y, names_for(3), Family::LR, {}, TrainOptions{}, 0);
    auto j = nlohmann::json::parse(serialize(model));
    CHECK(j["format_version"] == kModelFormatVersion);
    CHECK(j["feature_subset"].size() == 3);
    CHECK(j["standardizer"]["mean"].size() == 3);
    CHECK(j["catalog_version"] == "cl-features-1");

    auto old = j;
    old["format_version"] = 0;
    try {
        deserialize(old.dump());
        FAIL("expected VersionMismatch");
    } catch (const VersionMismatch& e) {
        const std::string msg = e.what();
        CHECK(msg.find("0") != std::string::npos);
        CHECK(msg.find(std::to_string(kModelFormatVersion)) != std::string::npos);
    }

    auto bad = j;
    bad["parameters"]["weights"] = nlohmann::json::array();
    CHECK_THROWS_AS(deserialize(bad.dump()), CorruptModel);
    bad = j;
    bad["family"] = "XGB";
    CHECK_THROWS_AS(deserialize(bad.dump()), CorruptModel);
    bad = j;
    bad["standardizer"]["sd"] = {1.0};
    CHECK_THROWS_AS(deserialize(bad.dump()), CorruptModel);
    bad = j;
    bad["subset_indices"] = {0, 1, 7};
    CHECK_THROWS_AS(deserialize(bad.dump()), CorruptModel);
}

TEST_CASE("pipeline trains on deduplicated rows only") {
    auto data = blobs({0, 1}, 20, 2, 9);
    Matrix X = data.X;
    std::vector<int> y = data.y;
    for (std::size_t r = 0; r < 10; ++r) {
        X.append_row(data.X.row(r));
        y.push_back(data.y[r]);
    }
    const auto m = train_model(X, y, names_for(2), Family::NB, {}, TrainOptions{}, 0);
    CHECK(m.metadata["training_rows"] == 50);
    CHECK(m.metadata["rows_after_dedup"] == 40);
    // standardizer is fitted on the deduplicated rows
    const auto s = Standardizer::fit(data.X);
    CHECK(m.standardizer.mean() == s.mean());
    CHECK_THROWS_AS(train_model(X, y, names_for(3), Family::NB, {}, TrainOptions{}, 0), ArityMismatch);
}
