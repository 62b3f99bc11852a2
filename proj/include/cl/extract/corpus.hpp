#pragma once

#include "cl/common/error.hpp"
#include "cl/extract/features.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cl::extract {

struct SkipRecord {
    std::string snippet_id;
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;
};

struct FeatureTable {
    std::vector<FeatureVector> rows;

    std::size_t size() const { return rows.size(); }
    // Row index by snippet id, or npos.
    std::size_t find(std::string_view snippet_id) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct CorpusResult {
    FeatureTable table;
    std::vector<SkipRecord> skipped;
};

enum class Ingestion { Strict, Lenient };

// Rows come back in input order. Strict mode throws CorpusError listing
// every failing snippet; lenient mode records them in `skipped`.
CorpusResult extract_corpus(const std::vector<Snippet>& snippets, Ingestion mode = Ingestion::Strict);

// Single-threaded reference with identical output.
CorpusResult extract_corpus_serial(const std::vector<Snippet>& snippets, Ingestion mode = Ingestion::Strict);

class CorpusError : public ParseError {
public:
    CorpusError(std::vector<SkipRecord> failures);
    const std::vector<SkipRecord>& failures() const noexcept { return failures_; }

private:
    std::vector<SkipRecord> failures_;
};

// Manifest CSV: snippet_id,dataset_id,path (paths relative to the manifest).
std::vector<Snippet> load_manifest(const std::filesystem::path& manifest);

// Every *.java file in a directory, sorted by name; id = file stem.
std::vector<Snippet> load_directory(const std::filesystem::path& dir, const std::string& dataset_id = "default");

std::string feature_table_csv(const FeatureTable& table);
FeatureTable parse_feature_table(std::string_view csv_text);
FeatureTable read_feature_table(const std::filesystem::path& path);

}  // namespace cl::extract
