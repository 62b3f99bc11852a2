#include "cl/extract/syntax.hpp"

namespace cl::extract {

std::string_view node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::Method: return "Method";
        case NodeKind::Parameter: return "Parameter";
        case NodeKind::Annotation: return "Annotation";
        case NodeKind::Type: return "Type";
        case NodeKind::ClassBody: return "ClassBody";
        case NodeKind::FieldDecl: return "FieldDecl";
        case NodeKind::Initializer: return "Initializer";
        case NodeKind::VarDeclarator: return "VarDeclarator";
        case NodeKind::Block: return "Block";
        case NodeKind::LocalVarDecl: return "LocalVarDecl";
        case NodeKind::LocalClassDecl: return "LocalClassDecl";
        case NodeKind::ExpressionStmt: return "ExpressionStmt";
        case NodeKind::If: return "If";
        case NodeKind::For: return "For";
        case NodeKind::ForEach: return "ForEach";
        case NodeKind::While: return "While";
        case NodeKind::DoWhile: return "DoWhile";
        case NodeKind::Switch: return "Switch";
        case NodeKind::SwitchLabel: return "SwitchLabel";
        case NodeKind::Return: return "Return";
        case NodeKind::Break: return "Break";
        case NodeKind::Continue: return "Continue";
        case NodeKind::Throw: return "Throw";
        case NodeKind::Try: return "Try";
        case NodeKind::Resource: return "Resource";
        case NodeKind::Catch: return "Catch";
        case NodeKind::Synchronized: return "Synchronized";
        case NodeKind::Labeled: return "Labeled";
        case NodeKind::Assert: return "Assert";
        case NodeKind::Empty: return "Empty";
        case NodeKind::Assign: return "Assign";
        case NodeKind::Conditional: return "Conditional";
        case NodeKind::Binary: return "Binary";
        case NodeKind::Unary: return "Unary";
        case NodeKind::Postfix: return "Postfix";
        case NodeKind::InstanceOf: return "InstanceOf";
        case NodeKind::Cast: return "Cast";
        case NodeKind::Literal: return "Literal";
        case NodeKind::Name: return "Name";
        case NodeKind::FieldAccess: return "FieldAccess";
        case NodeKind::MethodCall: return "MethodCall";
        case NodeKind::ArrayAccess: return "ArrayAccess";
        case NodeKind::NewObject: return "NewObject";
        case NodeKind::NewArray: return "NewArray";
        case NodeKind::ArrayInit: return "ArrayInit";
        case NodeKind::Lambda: return "Lambda";
        case NodeKind::MethodRef: return "MethodRef";
        case NodeKind::This: return "This";
        case NodeKind::Super: return "Super";
        case NodeKind::ClassLiteral: return "ClassLiteral";
        case NodeKind::Paren: return "Paren";
    }
    return "?";
}

bool is_statement(NodeKind kind) {
    switch (kind) {
        case NodeKind::LocalVarDecl:
        case NodeKind::LocalClassDecl:
        case NodeKind::ExpressionStmt:
        case NodeKind::If:
        case NodeKind::For:
        case NodeKind::ForEach:
        case NodeKind::While:
        case NodeKind::DoWhile:
        case NodeKind::Switch:
        case NodeKind::Return:
        case NodeKind::Break:
        case NodeKind::Continue:
        case NodeKind::Throw:
        case NodeKind::Try:
        case NodeKind::Synchronized:
        case NodeKind::Assert:
            return true;
        default:
            return false;
    }
}

bool is_control(NodeKind kind) {
    switch (kind) {
        case NodeKind::If:
        case NodeKind::For:
        case NodeKind::ForEach:
        case NodeKind::While:
        case NodeKind::DoWhile:
        case NodeKind::Switch:
        case NodeKind::Try:
        case NodeKind::Synchronized:
            return true;
        default:
            return false;
    }
}

void SyntaxTree::visit(const std::function<void(const Node&, const std::vector<const Node*>&)>& fn) const {
    if (!root) return;
    std::vector<const Node*> path;
    std::function<void(const Node&)> walk = [&](const Node& n) {
        fn(n, path);
        path.push_back(&n);
        for (const auto& c : n.children) walk(*c);
        path.pop_back();
    };
    walk(*root);
}

std::size_t SyntaxTree::count(NodeKind kind) const {
    std::size_t n = 0;
    visit([&](const Node& node, const auto&) { n += node.kind == kind; });
    return n;
}

}  // namespace cl::extract
