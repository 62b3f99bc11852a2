#pragma once

#include "cl/extract/token.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cl::extract {

enum class NodeKind : std::uint8_t {
    // declarations
    Method,
    Parameter,
    Annotation,
    Type,
    ClassBody,
    FieldDecl,
    Initializer,
    VarDeclarator,
    // statements
    Block,
    LocalVarDecl,
    LocalClassDecl,
    ExpressionStmt,
    If,
    For,
    ForEach,
    While,
    DoWhile,
    Switch,
    SwitchLabel,  // text is "case" or "default"
    Return,
    Break,
    Continue,
    Throw,
    Try,
    Resource,
    Catch,
    Synchronized,
    Labeled,
    Assert,
    Empty,
    // expressions
    Assign,       // text = operator
    Conditional,
    Binary,       // text = operator
    Unary,        // prefix; text = operator
    Postfix,      // text = operator
    InstanceOf,
    Cast,
    Literal,
    Name,
    FieldAccess,
    MethodCall,
    ArrayAccess,
    NewObject,
    NewArray,
    ArrayInit,
    Lambda,
    MethodRef,
    This,
    Super,
    ClassLiteral,
    Paren,
};

std::string_view node_kind_name(NodeKind kind);
bool is_statement(NodeKind kind);
// Control structures that open a nesting level.
bool is_control(NodeKind kind);

struct Node {
    NodeKind kind;
    std::string text;
    std::size_t first_token = 0;  // index into SyntaxTree::tokens
    std::size_t last_token = 0;   // inclusive
    std::vector<std::unique_ptr<Node>> children;

    Node(NodeKind k, std::size_t first) : kind(k), first_token(first), last_token(first) {}

    Node* add(std::unique_ptr<Node> child) {
        children.push_back(std::move(child));
        return children.back().get();
    }
};

// Concrete tree for one method declaration. Holds the full token stream,
// comments included, plus the source text, so whitespace and comments can
// be recovered from token offsets.
struct SyntaxTree {
    std::string source;
    std::vector<Token> tokens;
    std::unique_ptr<Node> root;  // NodeKind::Method

    // Pre-order walk; the callback receives each node and its parent chain.
    void visit(const std::function<void(const Node&, const std::vector<const Node*>&)>& fn) const;
    std::size_t count(NodeKind kind) const;
};

}  // namespace cl::extract
