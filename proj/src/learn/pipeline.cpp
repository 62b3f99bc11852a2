#include "cl/learn/pipeline.hpp"

#include "cl/common/error.hpp"
#include "cl/extract/catalog.hpp"

#include <algorithm>

namespace cl::learn {

Ranked dedup_and_rank(const Matrix& X, std::span<const int> y) {
    Ranked r;
    r.n_input = X.rows();
    r.rows = dedup_training(X, y);
    if (r.rows.X.rows() == 0) throw EmptyTraining("no training rows");
    r.ranking = r.rows.X.rows() >= 2 ? rank_features(r.rows.X, r.rows.y)
                                     : FeatureRanking{std::vector<double>(X.cols(), 0.0), {}};
    if (r.ranking.order.empty())
        for (std::size_t c = 0; c < X.cols(); ++c) r.ranking.order.push_back(c);
    return r;
}

std::vector<double> Prepared::project(std::span<const double> full_row) const {
    std::vector<double> picked(subset.size()), out(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) picked[i] = full_row[subset[i]];
    standardizer.transform_row(picked, out);
    return out;
}

Prepared prepare(const Ranked& ranked, double fraction, const SmoteConfig& smote_config) {
    Prepared p;
    p.subset = select_features(ranked.ranking, fraction);
    p.n_dedup = ranked.rows.X.rows();
    const Matrix picked = ranked.rows.X.select_cols(p.subset);
    p.standardizer = Standardizer::fit(picked);
    auto res = smote(p.standardizer.transform(picked), ranked.rows.y, smote_config);
    p.n_synthetic = res.X.rows() - res.n_original;
    p.X = std::move(res.X);
    p.y = std::move(res.y);
    p.warnings = std::move(res.warnings);
    return p;
}

std::vector<std::string> TrainedModel::subset_names() const {
    std::vector<std::string> out;
    for (auto c : subset) out.push_back(input_names.at(c));
    return out;
}

std::vector<double> TrainedModel::scores(std::span<const double> subset_row) const {
    if (subset_row.size() != subset.size())
        throw ArityMismatch("model expects " + std::to_string(subset.size()) + " selected features, got " +
                            std::to_string(subset_row.size()));
    std::vector<double> z(subset.size());
    standardizer.transform_row(subset_row, z);
    return classifier->scores(z);
}

int TrainedModel::predict(std::span<const double> subset_row) const {
    if (subset_row.size() != subset.size())
        throw ArityMismatch("model expects " + std::to_string(subset.size()) + " selected features, got " +
                            std::to_string(subset_row.size()));
    std::vector<double> z(subset.size());
    standardizer.transform_row(subset_row, z);
    return classifier->predict(z);
}

namespace {

std::vector<double> pick(const TrainedModel& m, std::span<const double> full_row) {
    if (full_row.size() != m.input_names.size())
        throw ArityMismatch("model expects rows of " + std::to_string(m.input_names.size()) + " features, got " +
                            std::to_string(full_row.size()));
    std::vector<double> out;
    out.reserve(m.subset.size());
    for (auto c : m.subset) out.push_back(full_row[c]);
    return out;
}

}  // namespace

int TrainedModel::predict_full(std::span<const double> full_row) const { return predict(pick(*this, full_row)); }

std::vector<double> TrainedModel::scores_full(std::span<const double> full_row) const {
    return scores(pick(*this, full_row));
}

TrainedModel train_model(const Matrix& X, std::span<const int> y, const std::vector<std::string>& names,
                         Family family, const Hyperparams& hp, const TrainOptions& options, std::uint64_t seed) {
    if (names.size() != X.cols())
        throw ArityMismatch(std::to_string(names.size()) + " feature names for " + std::to_string(X.cols()) +
                            " columns");
    if (X.rows() != y.size()) throw ArityMismatch("feature rows and labels differ in count");
    auto clf = make_classifier(family, hp, seed);  // rejects bad hyperparameters before any work
    const auto ranked = dedup_and_rank(X, y);
    const auto prep = prepare(ranked, options.fraction, options.smote);
    clf->fit(prep.X, prep.y);

    TrainedModel m;
    m.family = family;
    m.hyperparams = hp;
    m.input_names = names;
    m.subset = prep.subset;
    m.standardizer = prep.standardizer;
    m.labels = clf->labels();
    m.catalog_version = std::string(extract::kCatalogVersion);
    m.seed = seed;
    m.metadata["feature_fraction"] = options.fraction;
    m.metadata["training_rows"] = X.rows();
    m.metadata["rows_after_dedup"] = prep.n_dedup;
    m.metadata["synthetic_rows"] = prep.n_synthetic;
    m.classifier = std::move(clf);
    return m;
}

std::string serialize(const TrainedModel& m) {
    nlohmann::ordered_json j;
    j["format_version"] = kModelFormatVersion;
    j["family"] = family_name(m.family);
    j["hyperparams"] = params_to_json(m.hyperparams);
    j["input_features"] = m.input_names;
    j["feature_subset"] = m.subset_names();
    j["subset_indices"] = m.subset;
    j["standardizer"] = {{"mean", m.standardizer.mean()}, {"sd", m.standardizer.sd()}};
    j["labels"] = m.labels;
    j["catalog_version"] = m.catalog_version;
    j["master_seed"] = m.seed;
    j["metadata"] = m.metadata;
    j["parameters"] = m.classifier->save();
    return j.dump() + "\n";
}

TrainedModel deserialize(std::string_view bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("format_version")) throw CorruptModel("model file has no format_version");
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw VersionMismatch("model format_version " + std::to_string(version) + " but this build reads version " +
                                  std::to_string(kModelFormatVersion));
        TrainedModel m;
        try {
            m.family = parse_family(j.at("family").get<std::string>());
        } catch (const InvalidArgument& e) {
            throw CorruptModel(e.what());
        }
        m.hyperparams = params_from_json(j.at("hyperparams"));
        m.input_names = j.at("input_features").get<std::vector<std::string>>();
        m.subset = j.at("subset_indices").get<std::vector<std::size_t>>();
        const auto names = j.at("feature_subset").get<std::vector<std::string>>();
        if (m.subset.empty() || names.size() != m.subset.size()) throw CorruptModel("feature subset is inconsistent");
        for (std::size_t i = 0; i < m.subset.size(); ++i)
            if (m.subset[i] >= m.input_names.size() || m.input_names[m.subset[i]] != names[i])
                throw CorruptModel("feature subset does not match the input features");
        auto mean = j.at("standardizer").at("mean").get<std::vector<double>>();
        auto sd = j.at("standardizer").at("sd").get<std::vector<double>>();
        if (mean.size() != m.subset.size() || sd.size() != m.subset.size())
            throw CorruptModel("standardizer width does not match the feature subset");
        m.standardizer = Standardizer(std::move(mean), std::move(sd));
        m.labels = j.at("labels").get<std::vector<int>>();
        m.catalog_version = j.at("catalog_version").get<std::string>();
        m.seed = j.at("master_seed").get<std::uint64_t>();
        m.metadata = j.at("metadata");
        auto clf = make_classifier(m.family, m.hyperparams, m.seed);
        clf->restore(m.labels, m.subset.size(), j.at("parameters"));
        m.classifier = std::move(clf);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("model file is malformed: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw CorruptModel(std::string("model hyperparameters: ") + e.what());
    }
}

}  // namespace cl::learn
