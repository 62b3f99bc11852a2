#pragma once

#include "cl/extract/catalog.hpp"
#include "cl/extract/syntax.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace cl::extract {

struct Snippet {
    std::string id;
    std::string dataset_id;
    std::string source;
};

struct FeatureVector {
    std::string snippet_id;
    std::array<double, kFeatureCount> values{};

    double operator[](Feature f) const { return values[index_of(f)]; }
    double& operator[](Feature f) { return values[index_of(f)]; }
};

// camelCase / underscore / dollar split, original case kept.
std::vector<std::string> identifier_terms(std::string_view identifier);

// Comment body with //, /*, */ and leading '*' decorations removed.
std::string comment_text(std::string_view raw_comment);

FeatureVector compute_features(const SyntaxTree& tree, std::string snippet_id = {});

// Parses and measures one snippet; ParseError propagates.
FeatureVector extract_features(const Snippet& snippet);

}  // namespace cl::extract
