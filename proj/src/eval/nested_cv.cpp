#include "cl/eval/nested_cv.hpp"

#include "cl/common/error.hpp"
#include "cl/common/parallel.hpp"
#include "cl/common/rng.hpp"
#include "cl/learn/families.hpp"
#include "cl/learn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>

namespace cl::eval {

namespace {

constexpr std::uint64_t kFoldTag = 0xF01D;
constexpr std::uint64_t kSmoteTag = 0x5307E;
constexpr std::uint64_t kOuterTag = 0x0E7E2;

struct TrainSet {
    std::vector<std::size_t> train;
    std::vector<std::size_t> kept;
    learn::Ranked ranked;
};

TrainSet make_train(const Matrix& X, std::span<const int> y, std::vector<std::size_t> train, bool par) {
    TrainSet t;
    t.train = std::move(train);
    const Matrix Xt = X.select_rows(t.train);
    std::vector<int> yt;
    yt.reserve(t.train.size());
    for (auto r : t.train) yt.push_back(y[r]);
    const auto keep = learn::dedup_indices(Xt, yt);
    for (auto k : keep) t.kept.push_back(t.train[k]);
    t.ranked.n_input = t.train.size();
    t.ranked.rows.X = Xt.select_rows(keep);
    for (auto k : keep) t.ranked.rows.y.push_back(yt[k]);
    if (t.kept.size() < 2) throw EmptyTraining("fewer than two distinct training rows");
    t.ranked.ranking = par ? learn::rank_features(t.ranked.rows.X, t.ranked.rows.y)
                           : learn::rank_features_serial(t.ranked.rows.X, t.ranked.rows.y);
    return t;
}

// Fits one candidate on prepared rows and scores the given dataset rows.
struct Scored {
    ConfusionMatrix confusion;
    std::vector<int> predicted;
};

Scored fit_and_score(const Matrix& X, std::span<const int> y, const learn::Prepared& prep,
                     const std::vector<std::size_t>& rows, const Candidate& cand, learn::Family family,
                     std::uint64_t model_seed, const std::vector<int>& labels, bool par) {
    auto clf = learn::make_classifier(family, cand.hyperparams, model_seed);
    if (!par && family == learn::Family::RF)
        static_cast<learn::RandomForest&>(*clf).fit_serial(prep.X, prep.y);
    else
        clf->fit(prep.X, prep.y);
    Scored s{ConfusionMatrix(labels), {}};
    s.predicted.reserve(rows.size());
    for (auto r : rows) {
        const int p = clf->predict(prep.project(X.row(r)));
        s.predicted.push_back(p);
        s.confusion.add(y[r], p);
    }
    return s;
}

void notify(const FitObserver& observer, std::mutex& mu, FitRecord::Stage stage, std::size_t outer,
            std::size_t inner, std::size_t candidate, const TrainSet& t, const learn::Prepared& prep,
            const std::vector<std::size_t>& evaluated) {
    if (!observer) return;
    FitRecord rec;
    rec.stage = stage;
    rec.outer = outer;
    rec.inner = inner;
    rec.candidate = candidate;
    rec.train = t.train;
    rec.kept = t.kept;
    rec.evaluated = evaluated;
    rec.tau = t.ranked.ranking.tau;
    rec.subset = prep.subset;
    rec.mean = prep.standardizer.mean();
    rec.sd = prep.standardizer.sd();
    rec.fitted_rows = prep.X.rows();
    rec.synthetic_rows = prep.n_synthetic;
    rec.predictions = evaluated.size();
    std::lock_guard lock(mu);
    observer(rec);
}

EvaluationReport run(const Matrix& X, std::span<const int> y, const learn::ModelSpec& spec, const CvConfig& cfg,
                     const FitObserver& observer, bool par) {
    if (X.rows() != y.size()) throw ArityMismatch("feature rows and labels differ in count");
    if (cfg.fractions.empty()) throw InvalidArgument("no feature fractions to search");
    for (double f : cfg.fractions) (void)learn::selected_count(X.cols(), f);

    EvaluationReport rep;
    rep.family = spec.family;
    rep.instances = X.rows();
    rep.distribution = dataset::class_distribution(y);
    rep.baselines = baselines(shares_of(rep.distribution));
    rep.config = cfg;
    rep.candidates = candidates_for(spec, cfg.fractions);
    std::vector<int> labels;
    for (const auto& [label, c] : rep.distribution.counts) labels.push_back(label);

    const std::size_t O = cfg.outer_folds, I = cfg.inner_folds, C = rep.candidates.size();
    const std::size_t G = C / cfg.fractions.size(), F = cfg.fractions.size();
    const auto outer = stratified_folds(y, O, derive_seed(cfg.seed, {kFoldTag, 0}));
    std::vector<Fold> outer_train(O);
    std::vector<std::vector<Fold>> inner(O);  // dataset indices
    for (std::size_t o = 0; o < O; ++o) {
        outer_train[o] = complement(outer, o);
        std::vector<int> yo;
        for (auto r : outer_train[o]) yo.push_back(y[r]);
        auto local = stratified_folds(yo, I, derive_seed(cfg.seed, {kFoldTag, o + 1}));
        for (auto& f : local)
            for (auto& r : f) r = outer_train[o][r];
        inner[o] = std::move(local);
    }

    const int threads = par ? parallel::thread_count() : 1;
    std::mutex mu;
    std::map<std::string, std::size_t> failure_counts;
    std::exception_ptr fatal;
    auto fail = [&](const std::string& what) {
        std::lock_guard lock(mu);
        ++failure_counts[what];
    };

    // inner grid search: score[(o * I + i) * C + c]
    std::vector<double> score(O * I * C, std::nan(""));
    const auto n_inner = static_cast<long>(O * I);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (par)
    for (long task = 0; task < n_inner; ++task) {
        const auto o = static_cast<std::size_t>(task) / I, i = static_cast<std::size_t>(task) % I;
        try {
            const auto& valid = inner[o][i];
            std::vector<std::size_t> train;
            for (std::size_t j = 0; j < I; ++j)
                if (j != i) train.insert(train.end(), inner[o][j].begin(), inner[o][j].end());
            std::sort(train.begin(), train.end());
            const auto t = make_train(X, y, std::move(train), false);
            for (std::size_t f = 0; f < F; ++f) {
                learn::SmoteConfig sc;
                sc.k = cfg.smote_k;
                sc.seed = derive_seed(cfg.seed, {kSmoteTag, o, i, f});
                const auto prep = learn::prepare(t.ranked, cfg.fractions[f], sc);
                for (std::size_t g = 0; g < G; ++g) {
                    const std::size_t c = f * G + g;
                    try {
                        const auto s = fit_and_score(X, y, prep, valid, rep.candidates[c], spec.family,
                                                     derive_seed(cfg.seed, {o, i, g}), labels, false);
                        score[static_cast<std::size_t>(task) * C + c] = weighted_prf(s.confusion).wf1;
                        notify(observer, mu, FitRecord::Stage::Inner, o, i, c, t, prep, valid);
                    } catch (const Error& e) {
                        fail(std::string("inner fit: ") + e.what());
                    }
                }
            }
        } catch (const Error& e) {
            fail(std::string("inner split: ") + e.what());
        } catch (...) {
            std::lock_guard lock(mu);
            if (!fatal) fatal = std::current_exception();
        }
    }
    if (fatal) std::rethrow_exception(fatal);

    // per outer split: best mean validation wF1, ties to the lower candidate
    for (std::size_t o = 0; o < O; ++o) {
        OuterSelection sel;
        sel.outer = o;
        for (std::size_t c = 0; c < C; ++c) {
            double sum = 0;
            bool complete = true;
            for (std::size_t i = 0; i < I && complete; ++i) {
                const double v = score[(o * I + i) * C + c];
                if (std::isnan(v)) complete = false;
                sum += v;
            }
            if (!complete) continue;
            const double mean = sum / static_cast<double>(I);
            if (!sel.ok || mean > sel.inner_wf1) {
                sel.ok = true;
                sel.candidate = c;
                sel.inner_wf1 = mean;
            }
        }
        if (!sel.ok) rep.failures.push_back("outer split " + std::to_string(o) + ": no candidate completed inner CV");
        rep.selections.push_back(sel);
    }

    // distinct optima in order of first selection
    std::vector<std::size_t> distinct;
    for (const auto& s : rep.selections) {
        if (!s.ok) continue;
        if (std::find(distinct.begin(), distinct.end(), s.candidate) == distinct.end()) distinct.push_back(s.candidate);
    }
    for (auto c : distinct) {
        ConfigResult cr;
        cr.candidate = c;
        for (const auto& s : rep.selections)
            if (s.ok && s.candidate == c) cr.chosen_by.push_back(s.outer);
        cr.pooled = ConfusionMatrix(labels);
        cr.predictions.assign(X.rows(), 0);
        cr.fold_wf1.assign(O, std::nan(""));
        rep.configs.push_back(std::move(cr));
    }

    // every optimum on every outer split
    std::vector<std::vector<ConfusionMatrix>> fold_cm(rep.configs.size(), std::vector<ConfusionMatrix>(O));
    std::vector<std::vector<std::string>> fold_err(rep.configs.size(), std::vector<std::string>(O));
    std::vector<std::vector<std::string>> fold_warn(O);
    const auto n_outer = static_cast<long>(O);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (par)
    for (long ol = 0; ol < n_outer; ++ol) {
        const auto o = static_cast<std::size_t>(ol);
        try {
            const auto t = make_train(X, y, outer_train[o], false);
            std::map<std::size_t, learn::Prepared> prepared;
            for (std::size_t j = 0; j < rep.configs.size(); ++j) {
                const auto& cand = rep.candidates[rep.configs[j].candidate];
                try {
                    auto it = prepared.find(cand.fraction_index);
                    if (it == prepared.end()) {
                        learn::SmoteConfig sc;
                        sc.k = cfg.smote_k;
                        sc.seed = derive_seed(cfg.seed, {kSmoteTag, o, kOuterTag, cand.fraction_index});
                        it = prepared.emplace(cand.fraction_index, learn::prepare(t.ranked, cand.fraction, sc)).first;
                        for (const auto& w : it->second.warnings) fold_warn[o].push_back(w);
                    }
                    auto s = fit_and_score(X, y, it->second, outer[o], cand, spec.family,
                                           derive_seed(cfg.seed, {o, kOuterTag, cand.grid_index}), labels, false);
                    for (std::size_t k = 0; k < outer[o].size(); ++k) rep.configs[j].predictions[outer[o][k]] = s.predicted[k];
                    fold_cm[j][o] = std::move(s.confusion);
                    notify(observer, mu, FitRecord::Stage::Outer, o, kNoInner, rep.configs[j].candidate, t, it->second,
                           outer[o]);
                } catch (const Error& e) {
                    fold_err[j][o] = e.what();
                }
            }
        } catch (const Error& e) {
            for (auto& errs : fold_err) errs[o] = e.what();
        } catch (...) {
            std::lock_guard lock(mu);
            if (!fatal) fatal = std::current_exception();
        }
    }
    if (fatal) std::rethrow_exception(fatal);

    const double best = rep.baselines.best.value;
    double sum = 0;
    std::size_t n_ok = 0;
    for (std::size_t j = 0; j < rep.configs.size(); ++j) {
        auto& cr = rep.configs[j];
        for (std::size_t o = 0; o < O; ++o) {
            if (!fold_err[j][o].empty()) {
                cr.error = "outer split " + std::to_string(o) + ": " + fold_err[j][o];
                break;
            }
            cr.pooled += fold_cm[j][o];
            cr.fold_wf1[o] = weighted_prf(fold_cm[j][o]).wf1;
            cr.fold_ri.push_back(relative_improvement(cr.fold_wf1[o], best));
        }
        for (const auto& w : fold_warn) cr.warnings.insert(cr.warnings.end(), w.begin(), w.end());
        if (!cr.error.empty()) {
            rep.failures.push_back("config " + learn::format_params(rep.candidates[cr.candidate].hyperparams) + ": " +
                                   cr.error);
            continue;
        }
        cr.metrics = metric_report(cr.pooled);
        cr.ri = relative_improvement(cr.metrics.prf.wf1, best);
        sum += cr.metrics.prf.wf1;
        ++n_ok;
    }
    if (n_ok) {
        rep.averaged_wf1 = sum / static_cast<double>(n_ok);
        rep.ri = relative_improvement(rep.averaged_wf1, best);
    } else {
        rep.failures.push_back("no configuration completed the outer evaluation");
    }
    for (const auto& [what, count] : failure_counts)
        rep.failures.push_back(what + (count > 1 ? " (x" + std::to_string(count) + ")" : ""));
    return rep;
}

}  // namespace

bool EvaluationReport::ok() const {
    return std::any_of(configs.begin(), configs.end(), [](const ConfigResult& c) { return c.error.empty(); });
}

std::vector<Candidate> candidates_for(const learn::ModelSpec& spec, const std::vector<double>& fractions) {
    const auto grid = learn::expand_grid(spec);
    std::vector<Candidate> out;
    for (std::size_t f = 0; f < fractions.size(); ++f)
        for (std::size_t g = 0; g < grid.size(); ++g) out.push_back({g, f, grid[g], fractions[f]});
    return out;
}

EvaluationReport nested_cv(const Matrix& X, std::span<const int> y, const learn::ModelSpec& spec,
                           const CvConfig& config, const FitObserver& observer) {
    return run(X, y, spec, config, observer, true);
}

EvaluationReport nested_cv_serial(const Matrix& X, std::span<const int> y, const learn::ModelSpec& spec,
                                  const CvConfig& config, const FitObserver& observer) {
    return run(X, y, spec, config, observer, false);
}

std::vector<double> fold_ri_sample(const EvaluationReport& r) {
    std::vector<double> out;
    for (const auto& c : r.configs)
        if (c.error.empty()) out.insert(out.end(), c.fold_ri.begin(), c.fold_ri.end());
    return out;
}

}  // namespace cl::eval
