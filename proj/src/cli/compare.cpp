#include "cl/cli/app.hpp"
#include "cl/extract/catalog.hpp"

namespace cl::cli {

namespace {

std::string meta(const learn::TrainedModel& m, const char* key) {
    const auto it = m.metadata.find(key);
    return it != m.metadata.end() && it->is_string() ? it->get<std::string>() : std::string();
}

int mirrored(int label) { return label == 0 ? 1 : label == 1 ? 0 : label; }

}  // namespace

void check_rc_model(const learn::TrainedModel& model) {
    const auto task = meta(model, "task");
    if (task != "RC") throw ModelMismatch("model was trained for task '" + task + "', compare needs an RC model");
    const auto setting = meta(model, "setting");
    if (setting != "snippet-wise")
        throw ModelMismatch("model was trained " + setting + ", compare needs a snippet-wise model");
    if (model.catalog_version != extract::kCatalogVersion)
        throw ModelMismatch("model uses feature catalog '" + model.catalog_version + "', this build extracts '" +
                            std::string(extract::kCatalogVersion) + "'");
    const auto& cat = extract::feature_catalog();
    bool ok = model.input_names.size() == 2 * cat.size();
    for (std::size_t i = 0; ok && i < cat.size(); ++i)
        ok = model.input_names[i] == "s1_" + std::string(cat[i].name) &&
             model.input_names[cat.size() + i] == "s2_" + std::string(cat[i].name);
    if (!ok) throw ModelMismatch("model inputs are not a pair of feature vectors");
}

Verdict compare_snippets(const learn::TrainedModel& model, const extract::Snippet& a, const extract::Snippet& b,
                         bool both_orders) {
    check_rc_model(model);
    const auto fa = extract::extract_features(a);
    const auto fb = extract::extract_features(b);
    auto pair_row = [](const extract::FeatureVector& x, const extract::FeatureVector& y) {
        std::vector<double> row(x.values.begin(), x.values.end());
        row.insert(row.end(), y.values.begin(), y.values.end());
        return row;
    };
    Verdict v;
    const auto row = pair_row(fa, fb);
    v.label = model.predict_full(row);
    v.labels = model.labels;
    v.scores = model.scores_full(row);
    if (both_orders) {
        v.reverse_label = model.predict_full(pair_row(fb, fa));
        v.consistent = *v.reverse_label == mirrored(v.label);
    }
    return v;
}

}  // namespace cl::cli
