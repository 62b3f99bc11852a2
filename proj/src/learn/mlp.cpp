#include "cl/common/error.hpp"
#include "cl/common/rng.hpp"
#include "cl/learn/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cl::learn {

namespace {

constexpr double kAlpha = 1e-4;  // L2 on weights
constexpr std::size_t kBatch = 32;
constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

using Layer = Mlp::Layer;

void forward(const std::vector<Layer>& layers, std::span<const double> x, std::vector<std::vector<double>>& acts) {
    acts.resize(layers.size() + 1);
    acts[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& L = layers[l];
        auto& out = acts[l + 1];
        out.assign(L.out, 0.0);
        const auto& in = acts[l];
        for (std::size_t o = 0; o < L.out; ++o) {
            double s = L.b[o];
            const double* w = &L.W[o * L.in];
            for (std::size_t i = 0; i < L.in; ++i) s += w[i] * in[i];
            out[o] = s;
        }
        if (l + 1 < layers.size()) {
            for (auto& v : out) v = v > 0 ? v : 0.0;
        } else {
            const double m = *std::max_element(out.begin(), out.end());
            double z = 0;
            for (auto& v : out) z += (v = std::exp(v - m));
            for (auto& v : out) v /= z;
        }
    }
}

double weighted_f1(std::span<const int> truth, std::span<const int> pred, std::size_t K) {
    std::vector<double> tp(K, 0), fp(K, 0), fn(K, 0), support(K, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        support[truth[i]] += 1;
        if (truth[i] == pred[i]) tp[truth[i]] += 1;
        else {
            fp[pred[i]] += 1;
            fn[truth[i]] += 1;
        }
    }
    double out = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const double denom = 2 * tp[k] + fp[k] + fn[k];
        if (denom > 0) out += support[k] * 2 * tp[k] / denom;
    }
    return truth.empty() ? 0.0 : out / static_cast<double>(truth.size());
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> hidden, double learning_rate, std::uint64_t seed, int epochs, int patience)
    : hidden_(std::move(hidden)), lr_(learning_rate), seed_(seed), epochs_(epochs), patience_(patience) {}

void Mlp::fit(const Matrix& X, std::span<const int> y) {
    const auto cls = begin_fit(X, y);
    const std::size_t K = labels_.size(), d = X.cols(), n = X.rows();
    Rng rng(seed_);

    // stratified 10% holdout for early stopping
    std::vector<std::vector<std::size_t>> members(K);
    for (std::size_t r = 0; r < n; ++r) members[cls[r]].push_back(r);
    std::vector<std::size_t> train, valid;
    for (auto& m : members) {
        rng.shuffle(m);
        const std::size_t v = m.size() / 10;
        valid.insert(valid.end(), m.begin(), m.begin() + static_cast<long>(v));
        train.insert(train.end(), m.begin() + static_cast<long>(v), m.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(valid.begin(), valid.end());

    std::vector<std::size_t> sizes = {d};
    sizes.insert(sizes.end(), hidden_.begin(), hidden_.end());
    sizes.push_back(K);
    layers_.clear();
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Layer L;
        L.in = sizes[l];
        L.out = sizes[l + 1];
        const bool last = l + 2 == sizes.size();
        const double scale = std::sqrt((last ? 1.0 : 2.0) / static_cast<double>(std::max<std::size_t>(L.in, 1)));
        L.W.resize(L.in * L.out);
        for (auto& w : L.W) w = rng.normal() * scale;
        L.b.assign(L.out, 0.0);
        layers_.push_back(std::move(L));
    }

    std::vector<Layer> grad = layers_, m1 = layers_, m2 = layers_;
    for (auto* set : {&m1, &m2})
        for (auto& L : *set) {
            std::fill(L.W.begin(), L.W.end(), 0.0);
            std::fill(L.b.begin(), L.b.end(), 0.0);
        }

    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> delta(layers_.size());
    std::vector<int> vtruth, vpred(valid.size());
    for (auto v : valid) vtruth.push_back(cls[v]);
    std::vector<Layer> best = layers_;
    double best_f1 = -1.0, best_loss = std::numeric_limits<double>::infinity();
    int since_best = 0;
    long step = 0;
    epochs_run_ = 0;

    for (int epoch = 0; epoch < epochs_; ++epoch) {
        ++epochs_run_;
        rng.shuffle(train);
        for (std::size_t start = 0; start < train.size(); start += kBatch) {
            const std::size_t stop = std::min(start + kBatch, train.size());
            for (auto& L : grad) {
                std::fill(L.W.begin(), L.W.end(), 0.0);
                std::fill(L.b.begin(), L.b.end(), 0.0);
            }
            for (std::size_t s = start; s < stop; ++s) {
                const std::size_t r = train[s];
                forward(layers_, X.row(r), acts);
                // output delta: softmax + cross-entropy
                const std::size_t top = layers_.size() - 1;
                delta[top] = acts.back();
                delta[top][cls[r]] -= 1.0;
                for (std::size_t l = top + 1; l-- > 0;) {
                    const auto& L = layers_[l];
                    auto& G = grad[l];
                    const auto& in = acts[l];
                    for (std::size_t o = 0; o < L.out; ++o) {
                        const double dl = delta[l][o];
                        if (dl == 0.0) continue;
                        G.b[o] += dl;
                        double* g = &G.W[o * L.in];
                        for (std::size_t i = 0; i < L.in; ++i) g[i] += dl * in[i];
                    }
                    if (l == 0) break;
                    auto& prev = delta[l - 1];
                    prev.assign(L.in, 0.0);
                    for (std::size_t o = 0; o < L.out; ++o) {
                        const double dl = delta[l][o];
                        if (dl == 0.0) continue;
                        const double* w = &L.W[o * L.in];
                        for (std::size_t i = 0; i < L.in; ++i) prev[i] += w[i] * dl;
                    }
                    for (std::size_t i = 0; i < L.in; ++i)
                        if (acts[l][i] <= 0) prev[i] = 0.0;
                }
            }
            const double bs = static_cast<double>(stop - start);
            ++step;
            const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
            auto adam = [&](double& p, double& m, double& v, double g) {
                m = kBeta1 * m + (1 - kBeta1) * g;
                v = kBeta2 * v + (1 - kBeta2) * g * g;
                p -= lr_ * (m / c1) / (std::sqrt(v / c2) + kAdamEps);
            };
            for (std::size_t l = 0; l < layers_.size(); ++l) {
                auto& L = layers_[l];
                for (std::size_t i = 0; i < L.W.size(); ++i)
                    adam(L.W[i], m1[l].W[i], m2[l].W[i], grad[l].W[i] / bs + kAlpha * L.W[i]);
                for (std::size_t i = 0; i < L.b.size(); ++i) adam(L.b[i], m1[l].b[i], m2[l].b[i], grad[l].b[i] / bs);
            }
        }
        if (valid.empty()) continue;
        double loss = 0;
        for (std::size_t i = 0; i < valid.size(); ++i) {
            forward(layers_, X.row(valid[i]), acts);
            vpred[i] = static_cast<int>(argmax_first(acts.back()));
            loss -= std::log(std::max(acts.back()[static_cast<std::size_t>(vtruth[i])], 1e-300));
        }
        loss /= static_cast<double>(valid.size());
        const double f1 = weighted_f1(vtruth, vpred, K);
        // equal wF1 (common on small holdouts) counts as progress while the loss still drops
        if (f1 > best_f1 || (f1 == best_f1 && loss < best_loss - 1e-4)) {
            best_f1 = f1;
            best_loss = loss;
            best = layers_;
            since_best = 0;
        } else if (++since_best >= patience_) {
            break;
        }
    }
    if (!valid.empty()) layers_ = std::move(best);
}

std::vector<double> Mlp::scores(std::span<const double> x) const {
    check_width(x);
    std::vector<std::vector<double>> acts;
    forward(layers_, x, acts);
    return acts.back();
}

nlohmann::json Mlp::save() const {
    auto layers = nlohmann::json::array();
    for (const auto& L : layers_) layers.push_back({{"in", L.in}, {"out", L.out}, {"W", L.W}, {"b", L.b}});
    return {{"hidden", hidden_}, {"learning_rate", lr_}, {"epochs", epochs_}, {"patience", patience_},
            {"epochs_run", epochs_run_}, {"layers", layers}};
}

void Mlp::load(const nlohmann::json& j) {
    hidden_ = j.at("hidden").get<std::vector<std::size_t>>();
    lr_ = j.at("learning_rate").get<double>();
    epochs_ = j.at("epochs").get<int>();
    patience_ = j.at("patience").get<int>();
    epochs_run_ = j.at("epochs_run").get<int>();
    layers_.clear();
    std::size_t expect_in = width_;
    for (const auto& jl : j.at("layers")) {
        Layer L;
        L.in = jl.at("in").get<std::size_t>();
        L.out = jl.at("out").get<std::size_t>();
        L.W = jl.at("W").get<std::vector<double>>();
        L.b = jl.at("b").get<std::vector<double>>();
        if (L.in != expect_in || L.W.size() != L.in * L.out || L.b.size() != L.out)
            throw CorruptModel("MLP layer shapes are inconsistent");
        expect_in = L.out;
        layers_.push_back(std::move(L));
    }
    if (layers_.size() != hidden_.size() + 1 || expect_in != labels_.size())
        throw CorruptModel("MLP layer count or output width does not match");
}

}  // namespace cl::learn
