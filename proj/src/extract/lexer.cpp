#include "cl/common/error.hpp"
#include "cl/extract/token.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace cl::extract {

namespace {

constexpr std::array<std::string_view, 50> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",         "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",      "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",      "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof",   "int",       "interface",
    "long",     "native",     "new",       "package",   "private",      "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",        "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",          "void",      "volatile",
    "while"};

// Longest first so maximal munch is a linear scan.
constexpr std::array<std::string_view, 38> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "->", "==", ">=", "<=", "!=", "&&", "||", "++", "--",
    "<<",   ">>",  "+=",  "-=",  "*=", "/=", "&=", "|=", "^=", "%=", "=",  ">",  "<",
    "!",    "~",   "?",   ":",   "+",  "-",  "*",  "/",  "&",  "|",  "^",  "%"};

constexpr std::array<std::string_view, 11> kSeparators = {"...", "::", "(", ")", "{", "}",
                                                          "[", "]", ";", ",", "@"};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_whitespace();
            if (pos_ >= src_.size()) break;
            out.push_back(next());
        }
        Token eof;
        eof.kind = TokenKind::EndOfInput;
        eof.offset = pos_;
        eof.line = eof.end_line = line_;
        eof.column = column();
        out.push_back(std::move(eof));
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t line_start_ = 0;

    std::size_t column() const { return pos_ - line_start_ + 1; }
    char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            line_start_ = pos_ + 1;
        }
        ++pos_;
    }

    void skip_whitespace() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') advance();
            else break;
        }
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t line, std::size_t col) const {
        throw ParseError(msg, line, col);
    }

    Token next() {
        Token t;
        t.offset = pos_;
        t.line = line_;
        t.column = column();
        const unsigned char c = static_cast<unsigned char>(peek());

        if (c == '/' && peek(1) == '/') {
            while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r') advance();
            t.kind = TokenKind::LineComment;
        } else if (c == '/' && peek(1) == '*') {
            advance();
            advance();
            bool closed = false;
            while (pos_ < src_.size()) {
                if (src_[pos_] == '*' && peek(1) == '/') {
                    advance();
                    advance();
                    closed = true;
                    break;
                }
                advance();
            }
            if (!closed) fail("unterminated block comment", t.line, t.column);
            t.kind = TokenKind::BlockComment;
        } else if (ident_start(c)) {
            while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) advance();
            const auto word = src_.substr(t.offset, pos_ - t.offset);
            if (word == "true" || word == "false") t.kind = TokenKind::BooleanLiteral;
            else if (word == "null") t.kind = TokenKind::NullLiteral;
            else if (is_java_keyword(word)) t.kind = TokenKind::Keyword;
            else t.kind = TokenKind::Identifier;
        } else if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            t.kind = number();
        } else if (c == '"') {
            quoted('"', t);
            t.kind = TokenKind::StringLiteral;
        } else if (c == '\'') {
            quoted('\'', t);
            t.kind = TokenKind::CharLiteral;
        } else if (!punctuation(t)) {
            fail(std::string("unexpected character '") + static_cast<char>(c) + "'", t.line, t.column);
        }
        t.text = std::string(src_.substr(t.offset, pos_ - t.offset));
        t.end_line = line_;
        return t;
    }

    bool punctuation(Token& t) {
        const auto rest = src_.substr(pos_);
        for (auto sep : kSeparators) {
            if (rest.starts_with(sep)) {
                for (std::size_t i = 0; i < sep.size(); ++i) advance();
                t.kind = TokenKind::Separator;
                return true;
            }
        }
        if (rest.starts_with(".")) {
            advance();
            t.kind = TokenKind::Separator;
            return true;
        }
        for (auto op : kOperators) {
            if (rest.starts_with(op)) {
                for (std::size_t i = 0; i < op.size(); ++i) advance();
                t.kind = TokenKind::Operator;
                return true;
            }
        }
        return false;
    }

    void digits(bool (*accept)(unsigned char)) {
        while (pos_ < src_.size() && (accept(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
    }

    TokenKind number() {
        static constexpr auto is_dec = [](unsigned char ch) { return std::isdigit(ch) != 0; };
        static constexpr auto is_hex = [](unsigned char ch) { return std::isxdigit(ch) != 0; };
        static constexpr auto is_bin = [](unsigned char ch) { return ch == '0' || ch == '1'; };
        bool is_float = false;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            advance();
            advance();
            digits(is_hex);
            if (peek() == '.') {
                is_float = true;
                advance();
                digits(is_hex);
            }
            if (peek() == 'p' || peek() == 'P') {
                is_float = true;
                advance();
                if (peek() == '+' || peek() == '-') advance();
                digits(is_dec);
            }
        } else if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
            advance();
            advance();
            digits(is_bin);
        } else {
            digits(is_dec);
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                is_float = true;
                advance();
                digits(is_dec);
            } else if (peek() == '.' && !std::isalpha(static_cast<unsigned char>(peek(1))) && peek(1) != '.') {
                // "1." is a double literal
                is_float = true;
                advance();
            } else if (peek() == '.' && (peek(1) == 'e' || peek(1) == 'E' || peek(1) == 'f' || peek(1) == 'F' ||
                                         peek(1) == 'd' || peek(1) == 'D')) {
                is_float = true;
                advance();
            }
            if (peek() == 'e' || peek() == 'E') {
                is_float = true;
                advance();
                if (peek() == '+' || peek() == '-') advance();
                digits(is_dec);
            }
        }
        const char s = peek();
        if (s == 'l' || s == 'L') {
            advance();
        } else if (s == 'f' || s == 'F' || s == 'd' || s == 'D') {
            is_float = true;
            advance();
        }
        if (ident_part(static_cast<unsigned char>(peek())))
            fail("malformed numeric literal", line_, column());
        return is_float ? TokenKind::FloatLiteral : TokenKind::IntegerLiteral;
    }

    void quoted(char quote, const Token& t) {
        advance();
        while (pos_ < src_.size()) {
            const char ch = src_[pos_];
            if (ch == '\\') {
                advance();
                if (pos_ < src_.size() && src_[pos_] != '\n') advance();
                continue;
            }
            if (ch == '\n' || ch == '\r') break;
            advance();
            if (ch == quote) return;
        }
        fail(quote == '"' ? "unterminated string literal" : "unterminated character literal", t.line, t.column);
    }
};

}  // namespace

bool is_java_keyword(std::string_view word) {
    return std::binary_search(kKeywords.begin(), kKeywords.end(), word);
}

const std::vector<std::string_view>& java_keywords() {
    static const std::vector<std::string_view> words(kKeywords.begin(), kKeywords.end());
    return words;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace cl::extract
