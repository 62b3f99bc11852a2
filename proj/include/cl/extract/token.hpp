#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cl::extract {

enum class TokenKind : std::uint8_t {
    Identifier,
    Keyword,
    IntegerLiteral,
    FloatLiteral,
    CharLiteral,
    StringLiteral,
    BooleanLiteral,
    NullLiteral,
    Operator,
    Separator,
    LineComment,
    BlockComment,  // includes Javadoc
    EndOfInput,
};

struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    std::string text;
    std::size_t offset = 0;  // byte offset into the source
    std::size_t line = 1;    // 1-based, line of the first byte
    std::size_t column = 1;  // 1-based byte column
    std::size_t end_line = 1;
    // Lexical operators that the parser consumed as type syntax
    // (generic brackets, wildcards, bounds, multi-catch bars).
    bool type_syntax = false;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_comment() const { return kind == TokenKind::LineComment || kind == TokenKind::BlockComment; }
    bool is_literal() const {
        return kind == TokenKind::IntegerLiteral || kind == TokenKind::FloatLiteral ||
               kind == TokenKind::CharLiteral || kind == TokenKind::StringLiteral ||
               kind == TokenKind::BooleanLiteral || kind == TokenKind::NullLiteral;
    }
    bool is_numeric() const { return kind == TokenKind::IntegerLiteral || kind == TokenKind::FloatLiteral; }
    bool is_javadoc() const { return kind == TokenKind::BlockComment && text.starts_with("/**") && text != "/**/"; }
    // Counted by the operator features.
    bool counts_as_operator() const { return kind == TokenKind::Operator && !type_syntax; }
};

bool is_java_keyword(std::string_view word);

// The 50 reserved words of Java 8, sorted.
const std::vector<std::string_view>& java_keywords();

// Tokenizes Java source, keeping comments. Throws ParseError on
// unterminated comments/literals or bytes that cannot start a token.
std::vector<Token> tokenize(std::string_view source);

}  // namespace cl::extract
