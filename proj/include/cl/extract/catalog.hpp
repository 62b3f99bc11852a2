#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace cl::extract {

enum class Category { Complexity, Size, Lexicon, Format, Documentation };

std::string_view category_name(Category c);

// X(name, category, description). Order is the column order of every
// feature table; bump kCatalogVersion whenever it changes.
#define CL_FEATURE_LIST(X)                                                                                     \
    X(cyclomatic_complexity, Complexity, "decision points (if, loops, non-default case, catch, ?:, &&, ||) + 1") \
    X(max_nesting_depth, Complexity, "deepest chain of nested control structures; else-if stays on its level") \
    X(num_loops, Complexity, "for, enhanced for, while and do statements")                                    \
    X(num_if, Complexity, "if statements, including else-if")                                                 \
    X(num_switch, Complexity, "switch statements")                                                            \
    X(num_case_labels, Complexity, "case labels, excluding default")                                          \
    X(num_comparisons, Complexity, "binary ==, !=, <, >, <=, >=")                                             \
    X(num_logical_operators, Complexity, "binary &&, || and unary !")                                         \
    X(num_ternary, Complexity, "conditional ?: expressions")                                                  \
    X(num_returns, Complexity, "return statements")                                                           \
    X(total_lines, Size, "physical lines")                                                                    \
    X(ncnb_lines, Size, "lines holding at least one code token")                                              \
    X(num_statements, Size, "statements, excluding blocks, empty and labeled wrappers")                       \
    X(num_parameters, Size, "formal parameters of the method")                                                \
    X(num_local_variables, Size, "declared local variables, for/foreach variables and try resources")         \
    X(num_assignments, Size, "assignment expressions (= and compound)")                                       \
    X(num_method_invocations, Size, "method and explicit constructor calls")                                  \
    X(num_literals, Size, "literal tokens, true/false/null included")                                         \
    X(num_numeric_literals, Size, "integer and floating point literal tokens")                                \
    X(num_string_literals, Size, "string literal tokens")                                                     \
    X(num_casts, Size, "cast expressions")                                                                    \
    X(num_array_accesses, Size, "array element accesses")                                                     \
    X(total_characters, Size, "non-whitespace characters")                                                    \
    X(avg_line_length, Size, "mean trimmed length of non-blank lines")                                        \
    X(max_line_length, Size, "longest trimmed non-blank line")                                                \
    X(avg_statements_per_line, Size, "statements starting on a code line, averaged over code lines")          \
    X(max_statements_per_line, Size, "most statements starting on one line")                                  \
    X(num_identifiers, Lexicon, "identifier tokens")                                                          \
    X(num_unique_identifiers, Lexicon, "distinct identifier spellings")                                       \
    X(avg_identifier_length, Lexicon, "mean identifier token length")                                         \
    X(max_identifier_length, Lexicon, "longest identifier token")                                             \
    X(min_identifier_length, Lexicon, "shortest identifier token")                                            \
    X(avg_identifiers_per_line, Lexicon, "identifiers per code line")                                         \
    X(max_identifiers_per_line, Lexicon, "most identifiers on one line")                                      \
    X(num_keywords, Lexicon, "reserved-word tokens")                                                          \
    X(num_unique_keywords, Lexicon, "distinct reserved words")                                                \
    X(avg_keywords_per_line, Lexicon, "keywords per code line")                                               \
    X(max_keywords_per_line, Lexicon, "most keywords on one line")                                            \
    X(num_operators, Lexicon, "operator tokens, excluding generic type syntax")                               \
    X(num_unique_operators, Lexicon, "distinct operators")                                                    \
    X(avg_operators_per_line, Lexicon, "operators per code line")                                             \
    X(max_operators_per_line, Lexicon, "most operators on one line")                                          \
    X(num_tokens, Lexicon, "code tokens (comments excluded)")                                                 \
    X(avg_tokens_per_line, Lexicon, "tokens per code line")                                                   \
    X(max_tokens_per_line, Lexicon, "most tokens on one line")                                                \
    X(identifier_token_ratio, Lexicon, "identifiers / tokens")                                                \
    X(avg_terms_per_identifier, Lexicon, "camelCase/underscore terms per identifier token")                   \
    X(max_terms_per_identifier, Lexicon, "most terms in one identifier")                                      \
    X(num_single_char_identifiers, Lexicon, "one-character identifier tokens")                                \
    X(avg_numeric_tokens_per_line, Lexicon, "numeric literals per code line")                                 \
    X(max_numeric_tokens_per_line, Lexicon, "most numeric literals on one line")                              \
    X(token_entropy, Lexicon, "Shannon entropy (bits) of token spellings")                                    \
    X(identifier_entropy, Lexicon, "Shannon entropy (bits) of identifier spellings")                          \
    X(term_vocabulary_size, Lexicon, "distinct lowercased identifier terms")                                  \
    X(num_blank_lines, Format, "whitespace-only lines")                                                       \
    X(blank_line_ratio, Format, "blank lines / total lines")                                                  \
    X(num_spaces, Format, "space and tab characters")                                                         \
    X(avg_leading_whitespace, Format, "mean indentation width of non-blank lines")                            \
    X(max_leading_whitespace, Format, "widest indentation")                                                   \
    X(num_parentheses, Format, "( and ) tokens")                                                              \
    X(avg_parentheses_per_line, Format, "parentheses per code line")                                          \
    X(max_parentheses_per_line, Format, "most parentheses on one line")                                       \
    X(num_commas, Format, "comma tokens")                                                                     \
    X(avg_commas_per_line, Format, "commas per code line")                                                    \
    X(max_commas_per_line, Format, "most commas on one line")                                                 \
    X(num_periods, Format, "period tokens")                                                                   \
    X(avg_periods_per_line, Format, "periods per code line")                                                  \
    X(num_semicolons, Format, "semicolon tokens")                                                             \
    X(num_braces, Format, "{ and } tokens")                                                                   \
    X(num_brackets, Format, "[ and ] tokens")                                                                 \
    X(num_lines_ending_open_brace, Format, "lines whose last code token is {")                                \
    X(num_empty_blocks, Format, "blocks without statements")                                                  \
    X(num_comment_lines, Documentation, "lines touched by a comment")                                         \
    X(num_comment_blocks, Documentation, "comments after merging // runs on consecutive lines")               \
    X(comment_density, Documentation, "comment lines / total lines")                                          \
    X(has_javadoc, Documentation, "1 when a /** comment is present")                                          \
    X(num_todo_markers, Documentation, "TODO and FIXME occurrences in comments")                              \
    X(avg_comment_words, Documentation, "mean words per comment block")                                       \
    X(comment_readability, Documentation, "Flesch reading ease of all comment text")                          \
    X(num_inline_comments, Documentation, "// comments")                                                      \
    X(num_block_comments, Documentation, "/* */ comments, Javadoc included")                                  \
    X(comment_statement_ratio, Documentation, "comment lines / statements")                                   \
    X(comment_identifier_overlap, Documentation, "Jaccard of comment words and identifier terms")             \
    X(num_commented_out_code_lines, Documentation, "comment lines ending in ; { or }")

enum class Feature : std::size_t {
#define CL_X(name, cat, desc) name,
    CL_FEATURE_LIST(CL_X)
#undef CL_X
};

inline constexpr std::size_t kFeatureCount = 84;
inline constexpr std::string_view kCatalogVersion = "cl-features-1";

struct FeatureDef {
    std::string_view name;
    Category category;
    std::string_view description;
};

const std::array<FeatureDef, kFeatureCount>& feature_catalog();

constexpr std::size_t index_of(Feature f) { return static_cast<std::size_t>(f); }

// Features per category in catalog order: complexity, size, lexicon,
// format, documentation.
std::array<std::size_t, 5> category_counts();

// Throws std::logic_error unless the counts are (10, 17, 27, 18, 12) and
// names are unique.
void verify_catalog();

}  // namespace cl::extract
