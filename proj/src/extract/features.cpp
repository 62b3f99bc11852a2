#include "cl/extract/features.hpp"

#include "cl/extract/flesch.hpp"
#include "cl/extract/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

namespace cl::extract {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\n'; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view src) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (src[i] == '\n') {
            lines.push_back(src.substr(start, i - start));
            start = i + 1;
        }
    }
    if (start < src.size()) lines.push_back(src.substr(start));
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return lines;
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

template <typename Map>
double entropy_bits(const Map& freq, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (const auto& [_, n] : freq) {
        const double p = static_cast<double>(n) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h == 0.0 ? 0.0 : h;  // no negative zero
}

// Per-line tallies over code lines: average over lines that hold code,
// maximum over all lines.
struct LineTally {
    std::vector<double> per_line;
    explicit LineTally(std::size_t lines) : per_line(lines, 0.0) {}
    void add(std::size_t line) { per_line[line - 1] += 1.0; }
    double total() const {
        double s = 0.0;
        for (double v : per_line) s += v;
        return s;
    }
    double avg(std::size_t code_lines) const { return ratio(total(), static_cast<double>(code_lines)); }
    double max() const { return per_line.empty() ? 0.0 : *std::max_element(per_line.begin(), per_line.end()); }
};

bool is_comparison(std::string_view op) {
    return op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=";
}

struct TreeCounts {
    double ifs = 0, loops = 0, switches = 0, cases = 0, catches = 0, ternaries = 0, and_or = 0, nots = 0;
    double comparisons = 0, returns = 0, assignments = 0, calls = 0, casts = 0, array_accesses = 0;
    double local_vars = 0, empty_blocks = 0;
    double max_depth = 0;
    std::vector<std::size_t> statement_lines;
};

void walk(const Node& n, const Node* parent, int depth, const SyntaxTree& tree, TreeCounts& c) {
    int here = depth;
    switch (n.kind) {
        case NodeKind::If: ++c.ifs; break;
        case NodeKind::For:
        case NodeKind::ForEach:
        case NodeKind::While:
        case NodeKind::DoWhile: ++c.loops; break;
        case NodeKind::Switch: ++c.switches; break;
        case NodeKind::SwitchLabel: c.cases += n.text == "case"; break;
        case NodeKind::Catch: ++c.catches; break;
        case NodeKind::Conditional: ++c.ternaries; break;
        case NodeKind::Binary:
            if (n.text == "&&" || n.text == "||") ++c.and_or;
            if (is_comparison(n.text)) ++c.comparisons;
            break;
        case NodeKind::Unary: c.nots += n.text == "!"; break;
        case NodeKind::Return: ++c.returns; break;
        case NodeKind::Assign: ++c.assignments; break;
        case NodeKind::MethodCall: ++c.calls; break;
        case NodeKind::Cast: ++c.casts; break;
        case NodeKind::ArrayAccess: ++c.array_accesses; break;
        case NodeKind::Block: c.empty_blocks += n.children.empty(); break;
        case NodeKind::VarDeclarator:
            if (parent && (parent->kind == NodeKind::LocalVarDecl || parent->kind == NodeKind::Resource))
                ++c.local_vars;
            break;
        default: break;
    }

    if (is_control(n.kind)) {
        const bool else_if = n.kind == NodeKind::If && parent && parent->kind == NodeKind::If &&
                             parent->children.size() == 3 && parent->children[2].get() == &n;
        here = else_if ? depth : depth + 1;
        c.max_depth = std::max(c.max_depth, static_cast<double>(here));
    }

    if (is_statement(n.kind)) {
        const bool loop_header_decl = n.kind == NodeKind::LocalVarDecl && parent &&
                                      (parent->kind == NodeKind::For || parent->kind == NodeKind::ForEach);
        if (!loop_header_decl) c.statement_lines.push_back(tree.tokens[n.first_token].line);
    }

    for (const auto& child : n.children) walk(*child, &n, here, tree, c);
}

}  // namespace

std::vector<std::string> identifier_terms(std::string_view id) {
    std::vector<std::string> terms;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) terms.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t i = 0; i < id.size(); ++i) {
        const char c = id[i];
        if (!is_alnum(c)) {
            flush();
            continue;
        }
        if (i > 0 && is_upper(c)) {
            const char prev = id[i - 1];
            const bool camel = is_lower(prev) || is_digit(prev);
            const bool acronym_end = is_upper(prev) && i + 1 < id.size() && is_lower(id[i + 1]);
            if (camel || acronym_end) flush();
        }
        current.push_back(c);
    }
    flush();
    return terms;
}

std::string comment_text(std::string_view raw) {
    std::string_view body = raw;
    if (body.starts_with("//")) {
        body.remove_prefix(2);
        return std::string(trim(body));
    }
    if (body.starts_with("/*")) body.remove_prefix(2);
    if (body.ends_with("*/")) body.remove_suffix(2);
    std::string out;
    for (auto line : split_lines(body)) {
        line = trim(line);
        while (!line.empty() && line.front() == '*') line.remove_prefix(1);
        line = trim(line);
        if (line.empty()) continue;
        if (!out.empty()) out.push_back('\n');
        out += line;
    }
    return out;
}

FeatureVector compute_features(const SyntaxTree& tree, std::string snippet_id) {
    FeatureVector fv;
    fv.snippet_id = std::move(snippet_id);
    auto set = [&](Feature f, double v) { fv[f] = std::isfinite(v) ? v : 0.0; };

    const auto lines = split_lines(tree.source);
    const std::size_t n_lines = std::max<std::size_t>(lines.size(), 1);

    std::vector<const Token*> code;
    std::vector<const Token*> comments;
    for (const auto& t : tree.tokens) {
        if (t.kind == TokenKind::EndOfInput) continue;
        (t.is_comment() ? comments : code).push_back(&t);
    }

    // ---- line geometry
    std::vector<bool> code_line(n_lines, false);
    for (const auto* t : code) code_line[t->line - 1] = true;
    const auto n_code_lines = static_cast<std::size_t>(std::count(code_line.begin(), code_line.end(), true));

    double blank = 0, spaces = 0, chars = 0, len_sum = 0, len_max = 0, lead_sum = 0, lead_max = 0, non_blank = 0;
    for (auto line : lines) {
        for (char ch : line) {
            if (ch == ' ' || ch == '\t') ++spaces;
            if (!is_space(ch)) ++chars;
        }
        const auto content = trim(line);
        if (content.empty()) {
            ++blank;
            continue;
        }
        ++non_blank;
        const double len = static_cast<double>(content.size());
        len_sum += len;
        len_max = std::max(len_max, len);
        double lead = 0;
        for (char ch : line) {
            if (ch == ' ' || ch == '\t') ++lead;
            else break;
        }
        lead_sum += lead;
        lead_max = std::max(lead_max, lead);
    }

    // ---- tree counts
    TreeCounts tc;
    walk(*tree.root, nullptr, 0, tree, tc);
    double params = 0;
    for (const auto& c : tree.root->children) params += c->kind == NodeKind::Parameter;
    const double statements = static_cast<double>(tc.statement_lines.size());
    LineTally stmt_lines(n_lines);
    for (auto l : tc.statement_lines) stmt_lines.add(l);

    set(Feature::cyclomatic_complexity,
        1 + tc.ifs + tc.loops + tc.cases + tc.catches + tc.ternaries + tc.and_or);
    set(Feature::max_nesting_depth, tc.max_depth);
    set(Feature::num_loops, tc.loops);
    set(Feature::num_if, tc.ifs);
    set(Feature::num_switch, tc.switches);
    set(Feature::num_case_labels, tc.cases);
    set(Feature::num_comparisons, tc.comparisons);
    set(Feature::num_logical_operators, tc.and_or + tc.nots);
    set(Feature::num_ternary, tc.ternaries);
    set(Feature::num_returns, tc.returns);

    // ---- token tallies
    LineTally ids(n_lines), kws(n_lines), ops(n_lines), toks(n_lines), nums(n_lines), parens(n_lines),
        commas(n_lines), periods(n_lines);
    std::map<std::string, std::size_t> token_freq, ident_freq;
    std::set<std::string> keyword_set, operator_set, term_vocab;
    double literals = 0, numeric = 0, strings = 0, semicolons = 0, braces = 0, brackets = 0;
    double id_len_sum = 0, id_len_max = 0, id_len_min = 0, terms_sum = 0, terms_max = 0, single_char = 0;
    std::vector<const Token*> last_on_line(n_lines, nullptr);

    for (const auto* t : code) {
        const auto line = t->line;
        toks.add(line);
        ++token_freq[t->text];
        last_on_line[line - 1] = t;
        if (t->is_literal()) ++literals;
        if (t->is_numeric()) {
            ++numeric;
            nums.add(line);
        }
        if (t->kind == TokenKind::StringLiteral) ++strings;
        switch (t->kind) {
            case TokenKind::Identifier: {
                ids.add(line);
                ++ident_freq[t->text];
                const double len = static_cast<double>(t->text.size());
                id_len_sum += len;
                id_len_max = std::max(id_len_max, len);
                id_len_min = id_len_min == 0 ? len : std::min(id_len_min, len);
                if (t->text.size() == 1) ++single_char;
                const auto terms = identifier_terms(t->text);
                terms_sum += static_cast<double>(terms.size());
                terms_max = std::max(terms_max, static_cast<double>(terms.size()));
                for (const auto& term : terms) term_vocab.insert(lower(term));
                break;
            }
            case TokenKind::Keyword:
                kws.add(line);
                keyword_set.insert(t->text);
                break;
            case TokenKind::Operator:
                if (t->counts_as_operator()) {
                    ops.add(line);
                    operator_set.insert(t->text);
                }
                break;
            case TokenKind::Separator: {
                const auto& s = t->text;
                if (s == "(" || s == ")") parens.add(line);
                else if (s == ",") commas.add(line);
                else if (s == ".") periods.add(line);
                else if (s == ";") ++semicolons;
                else if (s == "{" || s == "}") ++braces;
                else if (s == "[" || s == "]") ++brackets;
                break;
            }
            default: break;
        }
    }

    const double n_ids = ids.total();
    const double n_tokens = toks.total();

    set(Feature::total_lines, static_cast<double>(lines.size()));
    set(Feature::ncnb_lines, static_cast<double>(n_code_lines));
    set(Feature::num_statements, statements);
    set(Feature::num_parameters, params);
    set(Feature::num_local_variables, tc.local_vars);
    set(Feature::num_assignments, tc.assignments);
    set(Feature::num_method_invocations, tc.calls);
    set(Feature::num_literals, literals);
    set(Feature::num_numeric_literals, numeric);
    set(Feature::num_string_literals, strings);
    set(Feature::num_casts, tc.casts);
    set(Feature::num_array_accesses, tc.array_accesses);
    set(Feature::total_characters, chars);
    set(Feature::avg_line_length, ratio(len_sum, non_blank));
    set(Feature::max_line_length, len_max);
    set(Feature::avg_statements_per_line, stmt_lines.avg(n_code_lines));
    set(Feature::max_statements_per_line, stmt_lines.max());

    set(Feature::num_identifiers, n_ids);
    set(Feature::num_unique_identifiers, static_cast<double>(ident_freq.size()));
    set(Feature::avg_identifier_length, ratio(id_len_sum, n_ids));
    set(Feature::max_identifier_length, id_len_max);
    set(Feature::min_identifier_length, id_len_min);
    set(Feature::avg_identifiers_per_line, ids.avg(n_code_lines));
    set(Feature::max_identifiers_per_line, ids.max());
    set(Feature::num_keywords, kws.total());
    set(Feature::num_unique_keywords, static_cast<double>(keyword_set.size()));
    set(Feature::avg_keywords_per_line, kws.avg(n_code_lines));
    set(Feature::max_keywords_per_line, kws.max());
    set(Feature::num_operators, ops.total());
    set(Feature::num_unique_operators, static_cast<double>(operator_set.size()));
    set(Feature::avg_operators_per_line, ops.avg(n_code_lines));
    set(Feature::max_operators_per_line, ops.max());
    set(Feature::num_tokens, n_tokens);
    set(Feature::avg_tokens_per_line, toks.avg(n_code_lines));
    set(Feature::max_tokens_per_line, toks.max());
    set(Feature::identifier_token_ratio, ratio(n_ids, n_tokens));
    set(Feature::avg_terms_per_identifier, ratio(terms_sum, n_ids));
    set(Feature::max_terms_per_identifier, terms_max);
    set(Feature::num_single_char_identifiers, single_char);
    set(Feature::avg_numeric_tokens_per_line, nums.avg(n_code_lines));
    set(Feature::max_numeric_tokens_per_line, nums.max());
    set(Feature::token_entropy, entropy_bits(token_freq, static_cast<std::size_t>(n_tokens)));
    set(Feature::identifier_entropy, entropy_bits(ident_freq, static_cast<std::size_t>(n_ids)));
    set(Feature::term_vocabulary_size, static_cast<double>(term_vocab.size()));

    double open_brace_lines = 0;
    for (const auto* t : last_on_line) open_brace_lines += t && t->is(TokenKind::Separator, "{");

    set(Feature::num_blank_lines, blank);
    set(Feature::blank_line_ratio, ratio(blank, static_cast<double>(lines.size())));
    set(Feature::num_spaces, spaces);
    set(Feature::avg_leading_whitespace, ratio(lead_sum, non_blank));
    set(Feature::max_leading_whitespace, lead_max);
    set(Feature::num_parentheses, parens.total());
    set(Feature::avg_parentheses_per_line, parens.avg(n_code_lines));
    set(Feature::max_parentheses_per_line, parens.max());
    set(Feature::num_commas, commas.total());
    set(Feature::avg_commas_per_line, commas.avg(n_code_lines));
    set(Feature::max_commas_per_line, commas.max());
    set(Feature::num_periods, periods.total());
    set(Feature::avg_periods_per_line, periods.avg(n_code_lines));
    set(Feature::num_semicolons, semicolons);
    set(Feature::num_braces, braces);
    set(Feature::num_brackets, brackets);
    set(Feature::num_lines_ending_open_brace, open_brace_lines);
    set(Feature::num_empty_blocks, tc.empty_blocks);

    // ---- documentation
    std::vector<bool> comment_line(n_lines, false);
    std::set<std::size_t> commented_code;
    std::set<std::string> comment_words;
    std::string all_text;
    double todo = 0, inline_comments = 0, block_comments = 0, javadoc = 0, blocks = 0, words = 0;

    // Tokens are in source order; a // comment joins the previous block when
    // it sits on the next line with no code token in between.
    const Token* prev_comment = nullptr;
    std::size_t prev_comment_index = 0;
    for (std::size_t i = 0; i < tree.tokens.size(); ++i) {
        const auto& t = tree.tokens[i];
        if (!t.is_comment()) continue;
        for (auto l = t.line; l <= t.end_line; ++l) comment_line[l - 1] = true;
        if (t.kind == TokenKind::LineComment) ++inline_comments;
        else ++block_comments;
        if (t.is_javadoc()) javadoc = 1;
        for (std::size_t pos = 0; (pos = t.text.find("TODO", pos)) != std::string::npos; pos += 4) ++todo;
        for (std::size_t pos = 0; (pos = t.text.find("FIXME", pos)) != std::string::npos; pos += 5) ++todo;

        bool merged = false;
        if (prev_comment && prev_comment->kind == TokenKind::LineComment && t.kind == TokenKind::LineComment &&
            t.line == prev_comment->line + 1) {
            merged = true;
            for (std::size_t j = prev_comment_index + 1; j < i; ++j)
                if (!tree.tokens[j].is_comment()) merged = false;
        }
        if (!merged) ++blocks;
        prev_comment = &t;
        prev_comment_index = i;

        const auto text = comment_text(t.text);
        const auto counts = count_text(text);
        words += static_cast<double>(counts.words);
        if (!all_text.empty()) all_text.push_back('\n');
        all_text += text;
        for (std::size_t k = 0; k < text.size();) {
            if (std::isalpha(static_cast<unsigned char>(text[k]))) {
                std::size_t e = k;
                while (e < text.size() && std::isalpha(static_cast<unsigned char>(text[e]))) ++e;
                comment_words.insert(lower(std::string_view(text).substr(k, e - k)));
                k = e;
            } else {
                ++k;
            }
        }

        // Commented-out code: a physical comment line whose content ends in ; { or }.
        const auto segments = split_lines(t.text);
        for (std::size_t s = 0; s < segments.size(); ++s) {
            std::string_view seg = segments[s];
            if (s == 0) seg.remove_prefix(2);  // "//" or "/*"
            if (t.kind == TokenKind::BlockComment && s + 1 == segments.size() && seg.ends_with("*/"))
                seg.remove_suffix(2);
            seg = trim(seg);
            while (!seg.empty() && seg.front() == '*') seg.remove_prefix(1);
            seg = trim(seg);
            if (!seg.empty() && (seg.back() == ';' || seg.back() == '{' || seg.back() == '}'))
                commented_code.insert(t.line + s);
        }
    }

    const auto n_comment_lines =
        static_cast<double>(std::count(comment_line.begin(), comment_line.end(), true));
    std::set<std::string> ident_terms_lower;
    for (const auto& [id, _] : ident_freq)
        for (const auto& term : identifier_terms(id)) ident_terms_lower.insert(lower(term));
    std::size_t inter = 0;
    for (const auto& w : comment_words) inter += ident_terms_lower.count(w);
    const std::size_t uni = comment_words.size() + ident_terms_lower.size() - inter;

    set(Feature::num_comment_lines, n_comment_lines);
    set(Feature::num_comment_blocks, blocks);
    set(Feature::comment_density, ratio(n_comment_lines, static_cast<double>(lines.size())));
    set(Feature::has_javadoc, javadoc);
    set(Feature::num_todo_markers, todo);
    set(Feature::avg_comment_words, ratio(words, blocks));
    set(Feature::comment_readability, flesch_reading_ease(all_text));
    set(Feature::num_inline_comments, inline_comments);
    set(Feature::num_block_comments, block_comments);
    set(Feature::comment_statement_ratio, ratio(n_comment_lines, statements));
    set(Feature::comment_identifier_overlap, ratio(static_cast<double>(inter), static_cast<double>(uni)));
    set(Feature::num_commented_out_code_lines, static_cast<double>(commented_code.size()));
    return fv;
}

FeatureVector extract_features(const Snippet& snippet) {
    const auto tree = parse_method(snippet.source);
    return compute_features(tree, snippet.id);
}

}  // namespace cl::extract
