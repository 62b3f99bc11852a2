#include "cl/extract/corpus.hpp"

#include "cl/common/csv.hpp"
#include "cl/common/error.hpp"
#include "cl/common/io.hpp"
#include "cl/common/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>

namespace cl::extract {

namespace {

std::string describe(const std::vector<SkipRecord>& failures) {
    std::string msg = std::to_string(failures.size()) + " snippet(s) failed to parse:";
    for (const auto& f : failures)
        msg += " [" + f.snippet_id + " " + std::to_string(f.line) + ":" + std::to_string(f.column) + " " +
               f.message + "]";
    return msg;
}

struct Outcome {
    std::optional<FeatureVector> vector;
    std::optional<SkipRecord> skip;
};

Outcome run_one(const Snippet& s) {
    Outcome out;
    try {
        out.vector = extract_features(s);
    } catch (const ParseError& e) {
        out.skip = SkipRecord{s.id, e.line(), e.column(), e.bare_message()};
    }
    return out;
}

CorpusResult assemble(std::vector<Outcome>& outcomes, Ingestion mode) {
    CorpusResult result;
    for (auto& o : outcomes) {
        if (o.vector) result.table.rows.push_back(std::move(*o.vector));
        else result.skipped.push_back(std::move(*o.skip));
    }
    if (mode == Ingestion::Strict && !result.skipped.empty()) throw CorpusError(result.skipped);
    return result;
}

}  // namespace

CorpusError::CorpusError(std::vector<SkipRecord> failures)
    : ParseError(describe(failures), failures.front().line, failures.front().column),
      failures_(std::move(failures)) {}

std::size_t FeatureTable::find(std::string_view snippet_id) const {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].snippet_id == snippet_id) return i;
    return npos;
}

CorpusResult extract_corpus(const std::vector<Snippet>& snippets, Ingestion mode) {
    std::vector<Outcome> outcomes(snippets.size());
    const auto n = static_cast<long>(snippets.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(parallel::thread_count())
    for (long i = 0; i < n; ++i) outcomes[i] = run_one(snippets[i]);
    return assemble(outcomes, mode);
}

CorpusResult extract_corpus_serial(const std::vector<Snippet>& snippets, Ingestion mode) {
    std::vector<Outcome> outcomes;
    outcomes.reserve(snippets.size());
    for (const auto& s : snippets) outcomes.push_back(run_one(s));
    return assemble(outcomes, mode);
}

std::vector<Snippet> load_manifest(const std::filesystem::path& manifest) {
    const auto rows = csv::read_file(manifest);
    if (rows.empty()) throw SchemaError(manifest.string() + ": empty manifest");
    const auto& header = rows.front();
    auto col = [&](std::string_view name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw SchemaError(manifest.string() + ": missing column " + std::string(name));
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto c_id = col("snippet_id"), c_ds = col("dataset_id"), c_path = col("path");
    const auto base = manifest.parent_path();
    std::vector<Snippet> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw SchemaError(manifest.string() + ": row " + std::to_string(r + 1) + " has " +
                              std::to_string(row.size()) + " fields");
        out.push_back({row[c_id], row[c_ds], io::read_text(base / row[c_path])});
    }
    return out;
}

std::vector<Snippet> load_directory(const std::filesystem::path& dir, const std::string& dataset_id) {
    if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + ": not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".java") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<Snippet> out;
    for (const auto& f : files) out.push_back({f.stem().string(), dataset_id, io::read_text(f)});
    return out;
}

std::string feature_table_csv(const FeatureTable& table) {
    std::string out = "snippet_id";
    for (const auto& def : feature_catalog()) {
        out += ',';
        out += def.name;
    }
    out += '\n';
    for (const auto& row : table.rows) {
        out += csv::escape(row.snippet_id);
        for (double v : row.values) {
            out += ',';
            out += csv::format_fixed(v);
        }
        out += '\n';
    }
    return out;
}

FeatureTable parse_feature_table(std::string_view text) {
    const auto rows = csv::parse(text);
    if (rows.empty()) throw SchemaError("feature table: no header");
    const auto& header = rows.front();
    const auto& catalog = feature_catalog();
    if (header.size() != kFeatureCount + 1 || header[0] != "snippet_id")
        throw SchemaError("feature table: expected snippet_id + " + std::to_string(kFeatureCount) + " columns");
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        if (header[i + 1] != catalog[i].name)
            throw SchemaError("feature table: column " + std::to_string(i + 2) + " is " + header[i + 1] +
                              ", expected " + std::string(catalog[i].name));
    FeatureTable table;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw SchemaError("feature table: row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                              " fields");
        FeatureVector fv;
        fv.snippet_id = row[0];
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            const auto& cell = row[i + 1];
            double v = 0;
            auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || p != cell.data() + cell.size() || !std::isfinite(v))
                throw ValueError("feature table: row " + std::to_string(r + 1) + " column " + header[i + 1] +
                                 ": not a finite number '" + cell + "'");
            fv.values[i] = v;
        }
        table.rows.push_back(std::move(fv));
    }
    return table;
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
    return parse_feature_table(io::read_text(path));
}

}  // namespace cl::extract
