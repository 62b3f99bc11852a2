// Parallel kernels against their serial references. Each pair runs on the
// same input; the parallel side uses COMPREHENSIBILITY_LAB_THREADS or the
// OpenMP default.

#include "cl/common/rng.hpp"
#include "cl/dataset/build.hpp"
#include "cl/eval/nested_cv.hpp"
#include "cl/extract/corpus.hpp"
#include "cl/learn/families.hpp"
#include "cl/learn/preprocess.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

using namespace cl;

namespace {

const std::filesystem::path kData = CL_BENCH_DATA_DIR;

struct Blobs {
    Matrix X;
    std::vector<int> y;
};

Blobs blobs(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Blobs b;
    for (std::size_t i = 0; i < n; ++i) {
        const int c = int(i % 3);
        std::vector<double> row(d);
        for (std::size_t j = 0; j < d; ++j) row[j] = rng.normal() + (j % 3 == std::size_t(c) ? 1.5 : 0.0);
        b.X.append_row(row);
        b.y.push_back(c);
    }
    return b;
}

const Blobs& rf_data() {
    static const auto b = blobs(1500, 20, 1);
    return b;
}

void BM_forest_fit(benchmark::State& st) {
    for (auto _ : st) {
        learn::RandomForest rf(100, 0, 3);
        rf.fit(rf_data().X, rf_data().y);
        benchmark::DoNotOptimize(rf.trees().size());
    }
}
void BM_forest_fit_serial(benchmark::State& st) {
    for (auto _ : st) {
        learn::RandomForest rf(100, 0, 3);
        rf.fit_serial(rf_data().X, rf_data().y);
        benchmark::DoNotOptimize(rf.trees().size());
    }
}

// 2,500 RC rows by 168 columns, the shape of a snippet-wise DS1 dataset
const Blobs& rank_data() {
    static const auto b = blobs(2500, 168, 2);
    return b;
}

void BM_rank_features(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(learn::rank_features(rank_data().X, rank_data().y).tau.data());
}
void BM_rank_features_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(learn::rank_features_serial(rank_data().X, rank_data().y).tau.data());
}

const Blobs& cv_data() {
    static const auto b = blobs(300, 8, 4);
    return b;
}

learn::ModelSpec cv_spec() {
    learn::ModelSpec s;
    s.family = learn::Family::KNN;
    s.grid = {{"k", {1.0, 5.0}}};
    return s;
}

eval::CvConfig cv_config() {
    eval::CvConfig c;
    c.fractions = {0.5, 1.0};
    return c;
}

void BM_nested_cv(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(eval::nested_cv(cv_data().X, cv_data().y, cv_spec(), cv_config()).ri);
}
void BM_nested_cv_serial(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(eval::nested_cv_serial(cv_data().X, cv_data().y, cv_spec(), cv_config()).ri);
}

const std::vector<extract::Snippet>& corpus() {
    static const auto c = extract::load_manifest(kData / "fixtures" / "corpus_manifest.csv");
    return c;
}

void BM_extract_corpus(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(extract::extract_corpus(corpus()).table.size());
}
void BM_extract_corpus_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(extract::extract_corpus_serial(corpus()).table.size());
}

// 121 participants x 100 snippets, 1.21M developer-wise pairs
const dataset::RcPairs& ds2_pairs() {
    static const auto features = extract::read_feature_table(kData / "fixtures" / "ds2_features.csv");
    static const auto m = dataset::ingest_measurements(kData / "fixtures" / "ds2_measurements.csv");
    static const dataset::RcPairs pairs(features, m, dataset::Metric::RL, dataset::Setting::DeveloperWise);
    return pairs;
}

void BM_rc_label_counts(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(ds2_pairs().label_counts()[2]);
}
void BM_rc_label_counts_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(ds2_pairs().label_counts_serial()[2]);
}

}  // namespace

BENCHMARK(BM_forest_fit)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_forest_fit_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rank_features)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rank_features_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nested_cv)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nested_cv_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_extract_corpus)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_extract_corpus_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rc_label_counts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rc_label_counts_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
