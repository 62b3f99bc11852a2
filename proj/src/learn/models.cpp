#include "cl/learn/models.hpp"

#include "cl/common/error.hpp"
#include "cl/learn/families.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

namespace cl::learn {

std::string_view family_name(Family f) {
    switch (f) {
        case Family::NB: return "NB";
        case Family::KNN: return "KNN";
        case Family::LR: return "LR";
        case Family::MLP: return "MLP";
        case Family::RF: return "RF";
        case Family::SVM: return "SVM";
    }
    return "?";
}

Family parse_family(std::string_view text) {
    std::string u(text);
    for (auto& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (auto f : kAllFamilies)
        if (u == family_name(f)) return f;
    throw InvalidArgument("unknown model family '" + std::string(text) + "' (expected NB, KNN, LR, MLP, RF, SVM)");
}

std::string format_params(const Hyperparams& hp) {
    std::string out;
    for (const auto& [k, v] : hp) {
        if (!out.empty()) out += ", ";
        out += k + "=";
        if (const auto* d = std::get_if<double>(&v)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", *d);
            out += buf;
        } else {
            out += std::get<std::string>(v);
        }
    }
    return out;
}

nlohmann::json params_to_json(const Hyperparams& hp) {
    auto j = nlohmann::json::object();
    for (const auto& [k, v] : hp) {
        if (const auto* d = std::get_if<double>(&v)) j[k] = *d;
        else j[k] = std::get<std::string>(v);
    }
    return j;
}

Hyperparams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgument("hyperparameters must be a JSON object");
    Hyperparams hp;
    for (const auto& [k, v] : j.items()) {
        if (v.is_number()) hp[k] = v.get<double>();
        else if (v.is_string()) hp[k] = v.get<std::string>();
        else throw InvalidArgument("hyperparameter '" + k + "' must be a number or string");
    }
    return hp;
}

ModelSpec default_spec(Family f, std::uint64_t seed) {
    ModelSpec s;
    s.family = f;
    s.seed = seed;
    switch (f) {
        case Family::NB: s.grid = {{"var_smoothing", {1e-9, 1e-6}}}; break;
        case Family::KNN:
            s.grid = {{"k", {1.0, 3.0, 5.0, 7.0, 11.0}},
                      {"metric", {std::string("euclidean"), std::string("manhattan")}}};
            break;
        case Family::LR: s.grid = {{"l2", {0.01, 0.1, 1.0, 10.0}}}; break;
        case Family::MLP:
            s.grid = {{"hidden", {std::string("16"), std::string("32"), std::string("32-16")}},
                      {"learning_rate", {0.001, 0.01}}};
            break;
        case Family::RF:
            s.grid = {{"trees", {50.0, 100.0, 200.0}}, {"max_depth", {std::string("unbounded"), 8.0, 16.0}}};
            break;
        case Family::SVM:
            s.grid = {{"kernel", {std::string("linear"), std::string("rbf")}}, {"C", {0.1, 1.0, 10.0}}};
            break;
    }
    return s;
}

std::vector<Hyperparams> expand_grid(const ModelSpec& spec) {
    if (spec.grid.empty()) throw InvalidArgument("empty hyperparameter grid");
    std::vector<Hyperparams> out{{}};
    for (const auto& [name, values] : spec.grid) {
        if (values.empty()) throw InvalidArgument("hyperparameter '" + name + "' has no values");
        std::vector<Hyperparams> next;
        for (const auto& partial : out)
            for (const auto& v : values) {
                auto hp = partial;
                hp[name] = v;
                next.push_back(std::move(hp));
            }
        out = std::move(next);
    }
    return out;
}

std::size_t argmax_first(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

int Classifier::predict(std::span<const double> x) const {
    const auto s = scores(x);
    return labels_[argmax_first(s)];
}

std::vector<int> Classifier::begin_fit(const Matrix& X, std::span<const int> y) {
    if (X.rows() == 0) throw EmptyTraining(std::string(family_name(family())) + ": no training rows");
    if (y.size() != X.rows()) throw InvalidArgument("label count does not match row count");
    std::set<int> distinct(y.begin(), y.end());
    if (distinct.size() < 2)
        throw SingleClassTraining(std::string(family_name(family())) + ": training labels contain a single class (" +
                                  std::to_string(*distinct.begin()) + ")");
    labels_.assign(distinct.begin(), distinct.end());
    width_ = X.cols();
    std::vector<int> idx(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        idx[i] = static_cast<int>(std::lower_bound(labels_.begin(), labels_.end(), y[i]) - labels_.begin());
    return idx;
}

void Classifier::restore(std::vector<int> labels, std::size_t width, const nlohmann::json& j) {
    if (labels.size() < 2 || !std::is_sorted(labels.begin(), labels.end()))
        throw CorruptModel("label set must hold at least two sorted labels");
    labels_ = std::move(labels);
    width_ = width;
    try {
        load(j);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string(family_name(family())) + " parameters: " + e.what());
    }
}

void Classifier::check_width(std::span<const double> x) const {
    if (x.size() != width_)
        throw ArityMismatch(std::string(family_name(family())) + " expects " + std::to_string(width_) +
                            " features, got " + std::to_string(x.size()));
}

namespace {

class ParamReader {
public:
    ParamReader(Family f, const Hyperparams& hp) : family_(f), hp_(hp) {}

    double number(const std::string& name, double fallback) {
        used_.insert(name);
        const auto it = hp_.find(name);
        if (it == hp_.end()) return fallback;
        if (const auto* d = std::get_if<double>(&it->second)) return *d;
        throw InvalidArgument(prefix() + name + " must be numeric");
    }

    std::string text(const std::string& name, const std::string& fallback) {
        used_.insert(name);
        const auto it = hp_.find(name);
        if (it == hp_.end()) return fallback;
        if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
        throw InvalidArgument(prefix() + name + " must be a string");
    }

    // numeric or a named sentinel
    ParamValue either(const std::string& name, ParamValue fallback) {
        used_.insert(name);
        const auto it = hp_.find(name);
        return it == hp_.end() ? fallback : it->second;
    }

    std::size_t positive_int(const std::string& name, double fallback) {
        const double v = number(name, fallback);
        if (!(v >= 1.0) || v != std::floor(v)) throw InvalidArgument(prefix() + name + " must be a positive integer");
        return static_cast<std::size_t>(v);
    }

    void finish() const {
        for (const auto& [k, v] : hp_)
            if (!used_.count(k)) throw InvalidArgument(prefix() + "unknown hyperparameter '" + k + "'");
    }

private:
    std::string prefix() const { return std::string(family_name(family_)) + ": "; }
    Family family_;
    const Hyperparams& hp_;
    std::set<std::string> used_;
};

std::vector<std::size_t> parse_layout(const std::string& s) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto dash = s.find('-', pos);
        const auto part = s.substr(pos, dash == std::string::npos ? std::string::npos : dash - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
            throw InvalidArgument("MLP: hidden layout '" + s + "' must look like 32 or 32-16");
        out.push_back(std::stoul(part));
        if (out.back() == 0) throw InvalidArgument("MLP: hidden layer of width 0");
        if (dash == std::string::npos) break;
        pos = dash + 1;
    }
    return out;
}

}  // namespace

std::unique_ptr<Classifier> make_classifier(Family f, const Hyperparams& hp, std::uint64_t seed) {
    ParamReader p(f, hp);
    std::unique_ptr<Classifier> out;
    switch (f) {
        case Family::NB: {
            const double vs = p.number("var_smoothing", 1e-9);
            if (!(vs >= 0)) throw InvalidArgument("NB: var_smoothing must be >= 0");
            out = std::make_unique<GaussianNB>(vs);
            break;
        }
        case Family::KNN: {
            const auto k = p.positive_int("k", 5);
            const auto m = p.text("metric", "euclidean");
            if (m != "euclidean" && m != "manhattan") throw InvalidArgument("KNN: metric must be euclidean or manhattan");
            out = std::make_unique<KNearest>(k, m == "euclidean" ? Distance::Euclidean : Distance::Manhattan);
            break;
        }
        case Family::LR: {
            const double l2 = p.number("l2", 1.0);
            if (!(l2 >= 0)) throw InvalidArgument("LR: l2 must be >= 0");
            out = std::make_unique<LogisticRegression>(l2, static_cast<int>(p.positive_int("max_iter", 1000)));
            break;
        }
        case Family::MLP: {
            const auto layout = parse_layout(p.text("hidden", "32"));
            const double lr = p.number("learning_rate", 1e-3);
            if (!(lr > 0)) throw InvalidArgument("MLP: learning_rate must be > 0");
            const auto epochs = p.positive_int("epochs", 200);
            const auto patience = p.positive_int("patience", 20);
            out = std::make_unique<Mlp>(layout, lr, seed, static_cast<int>(epochs), static_cast<int>(patience));
            break;
        }
        case Family::RF: {
            const auto trees = p.positive_int("trees", 100);
            const auto depth = p.either("max_depth", std::string("unbounded"));
            std::size_t max_depth = 0;
            if (const auto* s = std::get_if<std::string>(&depth)) {
                if (*s != "unbounded") throw InvalidArgument("RF: max_depth must be a positive integer or 'unbounded'");
            } else {
                const double d = std::get<double>(depth);
                if (!(d >= 1) || d != std::floor(d)) throw InvalidArgument("RF: max_depth must be a positive integer");
                max_depth = static_cast<std::size_t>(d);
            }
            out = std::make_unique<RandomForest>(trees, max_depth, seed);
            break;
        }
        case Family::SVM: {
            const auto k = p.text("kernel", "rbf");
            if (k != "linear" && k != "rbf") throw InvalidArgument("SVM: kernel must be linear or rbf");
            const double C = p.number("C", 1.0);
            if (!(C > 0)) throw InvalidArgument("SVM: C must be > 0");
            out = std::make_unique<Svm>(k == "linear" ? Kernel::Linear : Kernel::Rbf, C);
            break;
        }
    }
    p.finish();
    return out;
}

}  // namespace cl::learn
