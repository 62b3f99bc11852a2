#include "cl/eval/report.hpp"

#include "cl/common/csv.hpp"
#include "cl/common/error.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

namespace cl::eval {

namespace {

nlohmann::ordered_json baseline_json(const BaselineValue& b) {
    nlohmann::ordered_json j;
    j["kind"] = b.kind == BaselineKind::Random ? "random" : "lazy";
    j["tag"] = b.tag();
    if (b.kind == BaselineKind::Lazy) j["label"] = b.label;
    j["value"] = b.value;
    return j;
}

nlohmann::ordered_json confusion_json(const ConfusionMatrix& m) {
    nlohmann::ordered_json j;
    j["labels"] = m.labels();
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<std::uint64_t> row;
        for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m.at(i, k));
        rows.push_back(row);
    }
    j["counts"] = rows;
    return j;
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.1f%%", v * 100);
    return buf;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string render(const std::vector<std::vector<std::string>>& rows, TableFormat format) {
    std::string out;
    if (format == TableFormat::Csv) {
        for (const auto& r : rows) out += csv::join(r) + "\n";
        return out;
    }
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (width.size() <= c) width.push_back(0);
            width[c] = std::max(width[c], r[c].size());
        }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::string line;
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            std::string cell = rows[i][c];
            if (c > 0) line += "  ";
            // first column left aligned, numbers right aligned
            if (c == 0) cell += std::string(width[c] - cell.size(), ' ');
            else cell = std::string(width[c] - cell.size(), ' ') + cell;
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
        if (i == 0) {
            std::size_t total = 0;
            for (auto w : width) total += w;
            out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
        }
    }
    return out;
}

template <class T>
T field(const nlohmann::json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("report field '") + key + "': " + e.what());
    }
}

std::string group_of(const nlohmann::json& r) {
    std::string g = field<std::string>(r, "task") + " " + field<std::string>(r, "setting");
    if (field<std::string>(r, "task") == "RC") g += " eps=" + fixed3(field<double>(r, "epsilon")).substr(0, 4);
    return g;
}

const std::vector<std::string>& family_order() {
    static const std::vector<std::string> order = {"NB", "KNN", "LR", "MLP", "RF", "SVM"};
    return order;
}

}  // namespace

nlohmann::ordered_json report_json(const EvaluationReport& r, const ReportContext& ctx) {
    nlohmann::ordered_json j;
    j["kind"] = "evaluation";
    j["metric"] = ctx.metric;
    j["setting"] = ctx.setting;
    j["task"] = ctx.task;
    if (ctx.task == "RC") j["epsilon"] = ctx.epsilon;
    j["family"] = learn::family_name(r.family);
    j["feature_table"] = ctx.feature_table;
    j["instances"] = r.instances;

    nlohmann::ordered_json dist;
    for (const auto& [label, count] : r.distribution.counts)
        dist[std::to_string(label)] = {{"count", count}, {"share", r.distribution.share(label)}};
    j["class_distribution"] = dist;

    nlohmann::ordered_json base;
    nlohmann::ordered_json lazy;
    for (const auto& [label, v] : r.baselines.lazy) lazy[std::to_string(label)] = v;
    base["lazy"] = lazy;
    base["majority"] = baseline_json(r.baselines.majority);
    base["random"] = r.baselines.random;
    base["best"] = baseline_json(r.baselines.best);
    j["baselines"] = base;

    j["cv"] = {{"outer_folds", r.config.outer_folds}, {"inner_folds", r.config.inner_folds},
               {"feature_fractions", r.config.fractions}, {"seed", r.config.seed}, {"smote_k", r.config.smote_k}};
    j["candidates_searched"] = r.candidates.size();

    auto sels = nlohmann::ordered_json::array();
    for (const auto& s : r.selections) {
        nlohmann::ordered_json sj;
        sj["outer"] = s.outer;
        if (s.ok) {
            sj["hyperparams"] = learn::params_to_json(r.candidates[s.candidate].hyperparams);
            sj["feature_fraction"] = r.candidates[s.candidate].fraction;
            sj["inner_wf1"] = s.inner_wf1;
        } else {
            sj["failed"] = true;
        }
        sels.push_back(sj);
    }
    j["selections"] = sels;

    auto configs = nlohmann::ordered_json::array();
    std::set<std::string> warnings;
    for (const auto& c : r.configs) {
        nlohmann::ordered_json cj;
        cj["hyperparams"] = learn::params_to_json(r.candidates[c.candidate].hyperparams);
        cj["feature_fraction"] = r.candidates[c.candidate].fraction;
        cj["chosen_by_outer"] = c.chosen_by;
        warnings.insert(c.warnings.begin(), c.warnings.end());
        if (!c.error.empty()) {
            cj["error"] = c.error;
            configs.push_back(cj);
            continue;
        }
        cj["confusion"] = confusion_json(c.pooled);
        const auto& m = c.metrics;
        cj["wP"] = m.prf.wp;
        cj["wR"] = m.prf.wr;
        cj["wF1"] = m.prf.wf1;
        cj["mcc"] = m.mcc;
        cj["mcc_band"] = effect_name(m.mcc_band);
        cj["kappa"] = m.kappa.kappa;
        cj["kappa_p_o"] = m.kappa.p_o;
        cj["kappa_p_e"] = m.kappa.p_e;
        cj["kappa_band"] = effect_name(m.kappa_band);
        auto per = nlohmann::ordered_json::array();
        for (const auto& s : m.prf.per_class)
            per.push_back({{"label", s.label}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                           {"support", s.support}});
        cj["per_class"] = per;
        cj["ri"] = c.ri;
        cj["fold_wf1"] = c.fold_wf1;
        cj["fold_ri"] = c.fold_ri;
        configs.push_back(cj);
    }
    j["configurations"] = configs;
    j["distinct_optimal_configurations"] = r.configs.size();
    j["averaged_wf1"] = r.averaged_wf1;
    j["best_baseline"] = baseline_json(r.baselines.best);
    j["ri"] = r.ri;
    j["ok"] = r.ok();
    j["failures"] = r.failures;
    j["warnings"] = std::vector<std::string>(warnings.begin(), warnings.end());
    return j;
}

Comparison compare(const EvaluationReport& ac, const EvaluationReport& rc) {
    if (!ac.ok() || !rc.ok()) throw InvalidArgument("comparison needs two successful evaluations");
    Comparison c;
    c.wf1_ac = ac.averaged_wf1;
    c.wf1_rc = rc.averaged_wf1;
    c.ri_ac = ac.ri;
    c.ri_rc = rc.ri;
    c.delta = delta_ri(c.ri_rc, c.ri_ac);
    const auto a = fold_ri_sample(ac), b = fold_ri_sample(rc);
    c.n_ac = a.size();
    c.n_rc = b.size();
    c.test = mann_whitney_u(a, b, Alternative::BGreater);
    return c;
}

nlohmann::ordered_json comparison_json(const Comparison& c, const ReportContext& ac, const ReportContext& rc,
                                       learn::Family family) {
    nlohmann::ordered_json j;
    j["kind"] = "comparison";
    j["metric"] = rc.metric;
    j["setting"] = rc.setting;
    j["epsilon"] = rc.epsilon;
    j["family"] = learn::family_name(family);
    j["ac_metric"] = ac.metric;
    j["wf1_ac"] = c.wf1_ac;
    j["wf1_rc"] = c.wf1_rc;
    j["ri_ac"] = c.ri_ac;
    j["ri_rc"] = c.ri_rc;
    j["delta_ri"] = c.delta;
    j["mann_whitney"] = {{"alternative", "ri_rc_greater"}, {"u", c.test.u_a},          {"p", c.test.p},
                         {"exact", c.test.exact},          {"n_ac", c.n_ac},           {"n_rc", c.n_rc},
                         {"significant_at_0.05", c.test.p < 0.05}};
    return j;
}

std::string render_table(const std::vector<nlohmann::json>& reports, TableFormat format) {
    if (reports.empty()) throw SchemaError("no reports to render");
    // (group, metric) -> baseline cell, family -> (wF1, RI)
    struct Row {
        std::string baseline;
        std::map<std::string, std::pair<double, double>> cells;
    };
    std::map<std::pair<std::string, std::string>, Row> rows;
    std::set<std::string> families;
    for (const auto& r : reports) {
        if (field<std::string>(r, "kind") != "evaluation") throw SchemaError("not an evaluation report");
        const auto key = std::make_pair(group_of(r), field<std::string>(r, "metric"));
        const auto& best = r.at("best_baseline");
        auto& row = rows[key];
        row.baseline = "(" + field<std::string>(best, "tag") + ") " + fixed3(field<double>(best, "value"));
        const auto fam = field<std::string>(r, "family");
        families.insert(fam);
        if (field<bool>(r, "ok")) row.cells[fam] = {field<double>(r, "averaged_wf1"), field<double>(r, "ri")};
    }
    std::vector<std::string> fams;
    for (const auto& f : family_order())
        if (families.count(f)) fams.push_back(f);
    for (const auto& f : families)
        if (std::find(fams.begin(), fams.end(), f) == fams.end()) fams.push_back(f);

    std::vector<std::vector<std::string>> out;
    std::vector<std::string> header = {"Setting", "Metric", "Baseline wF1"};
    for (const auto& f : fams) {
        header.push_back(f + " wF1");
        header.push_back(f + " RI");
    }
    out.push_back(header);
    for (const auto& [key, row] : rows) {
        std::vector<std::string> line = {key.first, key.second, row.baseline};
        for (const auto& f : fams) {
            const auto it = row.cells.find(f);
            if (it == row.cells.end()) {
                line.push_back("-");
                line.push_back("-");
            } else {
                line.push_back(fixed3(it->second.first));
                // sign marks improvement (+) or regression (-) over the baseline
                line.push_back(percent(it->second.second));
            }
        }
        out.push_back(line);
    }
    return render(out, format);
}

std::string render_delta_table(const std::vector<nlohmann::json>& comparisons, TableFormat format) {
    if (comparisons.empty()) throw SchemaError("no comparison reports to render");
    struct Cell {
        double ri_ac, ri_rc, delta, p;
    };
    std::map<std::tuple<std::string, std::string, double>, std::map<std::string, Cell>> rows;
    std::set<std::string> families;
    for (const auto& c : comparisons) {
        if (field<std::string>(c, "kind") != "comparison") throw SchemaError("not a comparison report");
        const auto fam = field<std::string>(c, "family");
        families.insert(fam);
        rows[{field<std::string>(c, "setting"), field<std::string>(c, "metric"), field<double>(c, "epsilon")}][fam] = {
            field<double>(c, "ri_ac"), field<double>(c, "ri_rc"), field<double>(c, "delta_ri"),
            field<double>(c.at("mann_whitney"), "p")};
    }
    std::vector<std::string> fams;
    for (const auto& f : family_order())
        if (families.count(f)) fams.push_back(f);
    for (const auto& f : families)
        if (std::find(fams.begin(), fams.end(), f) == fams.end()) fams.push_back(f);

    std::vector<std::vector<std::string>> out;
    std::vector<std::string> header = {"Setting", "Metric", "eps"};
    for (const auto& f : fams)
        for (const char* s : {" RI_AC", " RI_RC", " dRI", " p"}) header.push_back(f + s);
    out.push_back(header);
    for (const auto& [key, cells] : rows) {
        std::vector<std::string> line = {std::get<0>(key), std::get<1>(key), fixed3(std::get<2>(key)).substr(0, 4)};
        for (const auto& f : fams) {
            const auto it = cells.find(f);
            if (it == cells.end()) {
                for (int k = 0; k < 4; ++k) line.push_back("-");
                continue;
            }
            line.push_back(percent(it->second.ri_ac));
            line.push_back(percent(it->second.ri_rc));
            line.push_back(percent(it->second.delta));
            line.push_back(fixed3(it->second.p));
        }
        out.push_back(line);
    }
    return render(out, format);
}

}  // namespace cl::eval
