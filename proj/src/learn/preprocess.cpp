#include "cl/learn/preprocess.hpp"

#include "cl/common/error.hpp"
#include "cl/common/parallel.hpp"
#include "cl/common/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <unordered_map>

namespace cl::learn {

namespace {

std::uint64_t row_hash(std::span<const double> row, int label) {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(label));
    for (double v : row) {
        if (v == 0.0) v = 0.0;  // -0 == 0
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        h = mix64(h ^ bits);
    }
    return h;
}

}  // namespace

std::vector<std::size_t> dedup_indices(const Matrix& X, std::span<const int> y) {
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < X.rows(); ++r) {
        auto& bucket = seen[row_hash(X.row(r), y[r])];
        const auto row = X.row(r);
        const bool dup = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t k) {
            if (y[k] != y[r]) return false;
            const auto other = X.row(k);
            return std::equal(row.begin(), row.end(), other.begin());
        });
        if (dup) continue;
        bucket.push_back(r);
        keep.push_back(r);
    }
    return keep;
}

Rows dedup_training(const Matrix& X, std::span<const int> y) {
    const auto keep = dedup_indices(X, y);
    Rows out{X.select_rows(keep), {}};
    out.y.reserve(keep.size());
    for (auto k : keep) out.y.push_back(y[k]);
    return out;
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> sd) : mean_(std::move(mean)), sd_(std::move(sd)) {}

Standardizer Standardizer::fit(const Matrix& X) {
    if (X.rows() == 0) throw EmptyTraining("standardizer needs at least one training row");
    const std::size_t d = X.cols();
    std::vector<double> mean(d, 0.0), sd(d, 0.0);
    const double n = static_cast<double>(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const auto row = X.row(r);
        for (std::size_t c = 0; c < d; ++c) mean[c] += row[c];
    }
    for (auto& m : mean) m /= n;
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const auto row = X.row(r);
        for (std::size_t c = 0; c < d; ++c) sd[c] += (row[c] - mean[c]) * (row[c] - mean[c]);
    }
    for (std::size_t c = 0; c < d; ++c) {
        sd[c] = std::sqrt(sd[c] / n);
        // relative floor: a column of identical doubles can leave rounding residue
        if (!(sd[c] > 1e-12 * std::max(1.0, std::fabs(mean[c])))) sd[c] = 1.0;
    }
    return Standardizer(std::move(mean), std::move(sd));
}

void Standardizer::transform_row(std::span<const double> in, std::span<double> out) const {
    if (in.size() != mean_.size())
        throw ArityMismatch("standardizer expects " + std::to_string(mean_.size()) + " values, got " +
                            std::to_string(in.size()));
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = (in[c] - mean_[c]) / sd_[c];
}

Matrix Standardizer::transform(const Matrix& X) const {
    Matrix out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r) transform_row(X.row(r), out.row(r));
    return out;
}

double kendall_tau_b(std::span<const double> x, std::span<const int> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw InvalidArgument("kendall_tau_b: length mismatch");
    if (n < 2) throw TooFewSamples("kendall_tau_b needs at least two rows");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
    });

    auto pairs = [](std::uint64_t t) { return t * (t - 1) / 2; };
    const std::uint64_t n0 = pairs(n);
    std::uint64_t tx = 0, txy = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && x[idx[j]] == x[idx[i]]) ++j;
        tx += pairs(j - i);
        for (std::size_t a = i; a < j;) {
            std::size_t b = a;
            while (b < j && y[idx[b]] == y[idx[a]]) ++b;
            txy += pairs(b - a);
            a = b;
        }
        i = j;
    }

    // Merge sort on y counts the inversions (discordant pairs among rows
    // not tied in x; rows tied in x are already in y order).
    std::vector<int> v(n), buf(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = y[idx[i]];
    std::uint64_t swaps = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
            std::size_t a = lo, b = mid, k = lo;
            while (a < mid && b < hi) {
                if (v[b] < v[a]) {
                    swaps += mid - a;
                    buf[k++] = v[b++];
                } else {
                    buf[k++] = v[a++];
                }
            }
            while (a < mid) buf[k++] = v[a++];
            while (b < hi) buf[k++] = v[b++];
        }
        std::swap(v, buf);
    }
    std::uint64_t ty = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && v[j] == v[i]) ++j;
        ty += pairs(j - i);
        i = j;
    }

    const double denom = std::sqrt(static_cast<double>(n0 - tx)) * std::sqrt(static_cast<double>(n0 - ty));
    if (denom == 0.0) return 0.0;
    // concordant - discordant = n0 - tx - ty + txy - 2 * swaps
    const double num = static_cast<double>(n0) - static_cast<double>(tx) - static_cast<double>(ty) +
                       static_cast<double>(txy) - 2.0 * static_cast<double>(swaps);
    return std::clamp(num / denom, -1.0, 1.0);
}

namespace {

FeatureRanking order_by_tau(std::vector<double> tau) {
    FeatureRanking r;
    r.tau = std::move(tau);
    r.order.resize(r.tau.size());
    std::iota(r.order.begin(), r.order.end(), 0);
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&](std::size_t a, std::size_t b) { return std::fabs(r.tau[a]) > std::fabs(r.tau[b]); });
    return r;
}

}  // namespace

FeatureRanking rank_features(const Matrix& X, std::span<const int> y) {
    std::vector<double> tau(X.cols());
    const auto d = static_cast<long>(X.cols());
#pragma omp parallel for schedule(dynamic) num_threads(parallel::thread_count())
    for (long c = 0; c < d; ++c) tau[c] = kendall_tau_b(X.column(static_cast<std::size_t>(c)), y);
    return order_by_tau(std::move(tau));
}

FeatureRanking rank_features_serial(const Matrix& X, std::span<const int> y) {
    std::vector<double> tau(X.cols());
    for (std::size_t c = 0; c < X.cols(); ++c) tau[c] = kendall_tau_b(X.column(c), y);
    return order_by_tau(std::move(tau));
}

std::size_t selected_count(std::size_t d, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("feature fraction must be in (0, 1]");
    const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(d) - 1e-9));
    return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(d, 1));
}

std::vector<std::size_t> select_features(const FeatureRanking& ranking, double fraction) {
    const auto k = selected_count(ranking.tau.size(), fraction);
    std::vector<std::size_t> out(ranking.order.begin(), ranking.order.begin() + static_cast<long>(k));
    std::sort(out.begin(), out.end());
    return out;
}

SmoteResult smote(const Matrix& X, std::span<const int> y, const SmoteConfig& config) {
    if (config.k < 1) throw InvalidArgument("SMOTE k must be >= 1");
    SmoteResult out;
    out.X = X;
    out.y.assign(y.begin(), y.end());
    out.n_original = X.rows();
    if (X.rows() == 0) return out;

    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t r = 0; r < X.rows(); ++r) members[y[r]].push_back(r);
    std::size_t target = 0;
    for (const auto& [label, rows] : members) target = std::max(target, rows.size());

    Rng rng(config.seed);
    std::vector<double> synth(X.cols());
    for (const auto& [label, rows] : members) {
        const std::size_t need = target - rows.size();
        if (need == 0) continue;
        if (rows.size() == 1) {
            if (!config.duplicate_singletons)
                throw TooFewSamples("class " + std::to_string(label) + " has a single sample; SMOTE cannot interpolate");
            out.warnings.push_back("TooFewSamples: class " + std::to_string(label) +
                                   " has a single sample; duplicated " + std::to_string(need) + " times");
            for (std::size_t i = 0; i < need; ++i) {
                out.X.append_row(X.row(rows[0]));
                out.y.push_back(label);
            }
            continue;
        }
        const std::size_t k = std::min(config.k, rows.size() - 1);
        // k nearest same-class neighbours of each member
        std::vector<std::vector<std::size_t>> nn(rows.size());
        std::vector<std::pair<double, std::size_t>> dist;
        for (std::size_t a = 0; a < rows.size(); ++a) {
            dist.clear();
            const auto xa = X.row(rows[a]);
            for (std::size_t b = 0; b < rows.size(); ++b) {
                if (b == a) continue;
                const auto xb = X.row(rows[b]);
                double s = 0;
                for (std::size_t c = 0; c < xa.size(); ++c) s += (xa[c] - xb[c]) * (xa[c] - xb[c]);
                dist.emplace_back(s, b);
            }
            std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
            for (std::size_t i = 0; i < k; ++i) nn[a].push_back(dist[i].second);
        }
        for (std::size_t i = 0; i < need; ++i) {
            const std::size_t a = rng.below(rows.size());
            const std::size_t b = nn[a][rng.below(k)];
            const double u = rng.uniform();
            const auto xa = X.row(rows[a]);
            const auto xb = X.row(rows[b]);
            for (std::size_t c = 0; c < xa.size(); ++c) synth[c] = xa[c] + u * (xb[c] - xa[c]);
            out.X.append_row(synth);
            out.y.push_back(label);
        }
    }
    return out;
}

}  // namespace cl::learn
