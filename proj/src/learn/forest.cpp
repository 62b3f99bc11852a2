#include "cl/common/error.hpp"
#include "cl/common/parallel.hpp"
#include "cl/common/rng.hpp"
#include "cl/learn/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cl::learn {

namespace {

using Node = RandomForest::Node;
using Tree = RandomForest::Tree;

struct Builder {
    const Matrix& X;
    const std::vector<int>& cls;
    std::size_t K;
    std::size_t max_depth;  // 0 = unbounded
    std::size_t mtry;
    Rng rng;

    std::vector<std::size_t> samples;
    std::vector<std::size_t> features;
    std::vector<std::pair<double, int>> column;
    std::vector<double> left, right;

    struct Split {
        bool found = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double score = -1.0;
    };

    int majority(std::size_t lo, std::size_t hi) {
        std::vector<std::size_t> counts(K, 0);
        for (std::size_t i = lo; i < hi; ++i) ++counts[static_cast<std::size_t>(cls[samples[i]])];
        return static_cast<int>(majority_vote_counts(counts));
    }

    static std::size_t majority_vote_counts(const std::vector<std::size_t>& counts) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < counts.size(); ++k)
            if (counts[k] > counts[best]) best = k;
        return best;
    }

    // Best Gini split of samples[lo, hi). Features are drawn in random order
    // until mtry non-constant ones have been scored.
    Split best_split(std::size_t lo, std::size_t hi) {
        Split best;
        const std::size_t m = hi - lo;
        std::size_t scored = 0;
        for (std::size_t f = features.size(); f > 0 && scored < mtry; --f) {
            std::swap(features[f - 1], features[rng.below(f)]);
            const std::size_t feat = features[f - 1];
            column.clear();
            for (std::size_t i = lo; i < hi; ++i) column.emplace_back(X(samples[i], feat), cls[samples[i]]);
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;
            ++scored;
            left.assign(K, 0.0);
            right.assign(K, 0.0);
            for (const auto& [v, c] : column) right[static_cast<std::size_t>(c)] += 1;
            double sl = 0, sr = 0;  // sums of squared counts
            for (double r : right) sr += r * r;
            for (std::size_t i = 0; i + 1 < m; ++i) {
                const auto c = static_cast<std::size_t>(column[i].second);
                sl += 2 * left[c] + 1;
                sr -= 2 * right[c] - 1;
                left[c] += 1;
                right[c] -= 1;
                if (column[i].first == column[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1), nr = static_cast<double>(m - i - 1);
                const double score = sl / nl + sr / nr;  // larger = purer children
                if (score > best.score) {
                    double t = 0.5 * (column[i].first + column[i + 1].first);
                    if (t >= column[i + 1].first) t = column[i].first;
                    best = {true, feat, t, score};
                }
            }
        }
        return best;
    }

    Tree build(std::size_t n) {
        samples.resize(n);
        for (auto& s : samples) s = rng.below(X.rows());  // bootstrap
        features.resize(X.cols());
        std::iota(features.begin(), features.end(), 0);

        Tree tree;
        struct Task {
            int node;
            std::size_t lo, hi, depth;
        };
        std::vector<Task> stack;
        tree.push_back({});
        stack.push_back({0, 0, n, 0});
        while (!stack.empty()) {
            const auto t = stack.back();
            stack.pop_back();
            const int cls_major = majority(t.lo, t.hi);
            bool pure = true;
            for (std::size_t i = t.lo + 1; i < t.hi && pure; ++i) pure = cls[samples[i]] == cls[samples[t.lo]];
            Split s;
            if (!pure && t.hi - t.lo >= 2 && (max_depth == 0 || t.depth < max_depth)) s = best_split(t.lo, t.hi);
            if (!s.found) {
                tree[static_cast<std::size_t>(t.node)].cls = cls_major;
                continue;
            }
            const auto mid = std::partition(samples.begin() + static_cast<long>(t.lo),
                                            samples.begin() + static_cast<long>(t.hi),
                                            [&](std::size_t r) { return X(r, s.feature) <= s.threshold; });
            const auto cut = static_cast<std::size_t>(mid - samples.begin());
            const int l = static_cast<int>(tree.size());
            tree.push_back({});
            tree.push_back({});
            auto& node = tree[static_cast<std::size_t>(t.node)];
            node.feature = static_cast<int>(s.feature);
            node.threshold = s.threshold;
            node.left = l;
            node.right = l + 1;
            node.cls = cls_major;
            stack.push_back({l + 1, cut, t.hi, t.depth + 1});
            stack.push_back({l, t.lo, cut, t.depth + 1});
        }
        return tree;
    }
};

int walk(const Tree& tree, std::span<const double> x) {
    std::size_t i = 0;
    while (tree[i].feature >= 0)
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(tree[i].feature)] <= tree[i].threshold ? tree[i].left
                                                                                                           : tree[i].right);
    return tree[i].cls;
}

}  // namespace

std::size_t majority_vote(std::span<const std::size_t> votes, std::size_t n_classes) {
    std::vector<std::size_t> counts(n_classes, 0);
    for (auto v : votes) ++counts.at(v);
    return Builder::majority_vote_counts(counts);
}

void RandomForest::fit_impl(const Matrix& X, std::span<const int> y, bool par) {
    const auto cls = begin_fit(X, y);
    const std::size_t d = X.cols();
    const std::size_t mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    trees_.assign(n_trees_, {});
    const auto n = static_cast<long>(n_trees_);
    auto grow = [&](long t) {
        Builder b{X, cls, labels_.size(), max_depth_, mtry, Rng(derive_seed(seed_, {static_cast<std::uint64_t>(t)})),
                  {}, {}, {}, {}, {}};
        trees_[static_cast<std::size_t>(t)] = b.build(X.rows());
    };
    if (par) {
#pragma omp parallel for schedule(dynamic) num_threads(parallel::thread_count())
        for (long t = 0; t < n; ++t) grow(t);
    } else {
        for (long t = 0; t < n; ++t) grow(t);
    }
}

void RandomForest::fit(const Matrix& X, std::span<const int> y) { fit_impl(X, y, true); }
void RandomForest::fit_serial(const Matrix& X, std::span<const int> y) { fit_impl(X, y, false); }

std::vector<double> RandomForest::scores(std::span<const double> x) const {
    check_width(x);
    std::vector<double> s(labels_.size(), 0.0);
    for (const auto& t : trees_) s[static_cast<std::size_t>(walk(t, x))] += 1.0;
    for (auto& v : s) v /= static_cast<double>(trees_.size());
    return s;
}

int RandomForest::predict(std::span<const double> x) const {
    check_width(x);
    std::vector<std::size_t> votes;
    votes.reserve(trees_.size());
    for (const auto& t : trees_) votes.push_back(static_cast<std::size_t>(walk(t, x)));
    return labels_[majority_vote(votes, labels_.size())];
}

nlohmann::json RandomForest::save() const {
    auto trees = nlohmann::json::array();
    for (const auto& t : trees_) {
        // columns: feature, threshold, left, right, class
        std::vector<int> feature, left, right, cls;
        std::vector<double> threshold;
        for (const auto& nd : t) {
            feature.push_back(nd.feature);
            threshold.push_back(nd.threshold);
            left.push_back(nd.left);
            right.push_back(nd.right);
            cls.push_back(nd.cls);
        }
        trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"class", cls}});
    }
    return {{"n_trees", n_trees_}, {"max_depth", max_depth_}, {"trees", trees}};
}

void RandomForest::load(const nlohmann::json& j) {
    n_trees_ = j.at("n_trees").get<std::size_t>();
    max_depth_ = j.at("max_depth").get<std::size_t>();
    trees_.clear();
    for (const auto& jt : j.at("trees")) {
        const auto feature = jt.at("feature").get<std::vector<int>>();
        const auto threshold = jt.at("threshold").get<std::vector<double>>();
        const auto left = jt.at("left").get<std::vector<int>>();
        const auto right = jt.at("right").get<std::vector<int>>();
        const auto cls = jt.at("class").get<std::vector<int>>();
        const std::size_t m = feature.size();
        if (m == 0 || threshold.size() != m || left.size() != m || right.size() != m || cls.size() != m)
            throw CorruptModel("RF tree arrays differ in length");
        Tree t(m);
        for (std::size_t i = 0; i < m; ++i) {
            const bool leaf = feature[i] < 0;
            // children must point forward so prediction terminates
            if (!leaf && (feature[i] >= static_cast<int>(width_) || left[i] <= static_cast<int>(i) ||
                          right[i] <= static_cast<int>(i) || left[i] >= static_cast<int>(m) ||
                          right[i] >= static_cast<int>(m)))
                throw CorruptModel("RF tree node " + std::to_string(i) + " is malformed");
            if (cls[i] < 0 || cls[i] >= static_cast<int>(labels_.size())) throw CorruptModel("RF leaf class out of range");
            t[i] = {feature[i], threshold[i], left[i], right[i], cls[i]};
        }
        trees_.push_back(std::move(t));
    }
    if (trees_.size() != n_trees_) throw CorruptModel("RF tree count mismatch");
}

}  // namespace cl::learn
