#include "cl/extract/catalog.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace cl::extract {

namespace {
constexpr std::array<FeatureDef, kFeatureCount> kCatalog = {{
#define CL_X(name, cat, desc) {#name, Category::cat, desc},
    CL_FEATURE_LIST(CL_X)
#undef CL_X
}};
}  // namespace

std::string_view category_name(Category c) {
    switch (c) {
        case Category::Complexity: return "complexity";
        case Category::Size: return "size";
        case Category::Lexicon: return "lexicon";
        case Category::Format: return "format";
        case Category::Documentation: return "documentation";
    }
    return "?";
}

const std::array<FeatureDef, kFeatureCount>& feature_catalog() { return kCatalog; }

std::array<std::size_t, 5> category_counts() {
    std::array<std::size_t, 5> counts{};
    for (const auto& f : kCatalog) ++counts[static_cast<std::size_t>(f.category)];
    return counts;
}

void verify_catalog() {
    constexpr std::array<std::size_t, 5> expected = {10, 17, 27, 18, 12};
    if (category_counts() != expected) throw std::logic_error("feature catalog category counts drifted");
    std::set<std::string_view> names;
    for (const auto& f : kCatalog)
        if (!names.insert(f.name).second) throw std::logic_error("duplicate feature name " + std::string(f.name));
}

}  // namespace cl::extract
