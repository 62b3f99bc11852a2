#include "cl/extract/parser.hpp"

#include "cl/common/error.hpp"

#include <array>
#include <string>
#include <utility>

namespace cl::extract {

namespace {

using NodePtr = std::unique_ptr<Node>;

constexpr std::array<std::string_view, 8> kPrimitives = {"boolean", "byte",  "char", "short",
                                                          "int",     "long",  "float", "double"};

constexpr std::array<std::string_view, 12> kModifiers = {
    "public", "protected", "private",   "static",   "abstract", "final",
    "native", "synchronized", "transient", "volatile", "strictfp", "default"};

bool is_primitive(const Token& t) {
    if (t.kind != TokenKind::Keyword) return false;
    for (auto p : kPrimitives)
        if (t.text == p) return true;
    return false;
}

bool is_modifier(const Token& t) {
    if (t.kind != TokenKind::Keyword) return false;
    for (auto m : kModifiers)
        if (t.text == m) return true;
    return false;
}

int binary_precedence(const Token& t) {
    if (t.kind == TokenKind::Keyword) return t.text == "instanceof" ? 7 : -1;
    if (t.kind != TokenKind::Operator) return -1;
    const auto& s = t.text;
    if (s == "||") return 1;
    if (s == "&&") return 2;
    if (s == "|") return 3;
    if (s == "^") return 4;
    if (s == "&") return 5;
    if (s == "==" || s == "!=") return 6;
    if (s == "<" || s == ">" || s == "<=" || s == ">=") return 7;
    if (s == "<<" || s == ">>" || s == ">>>") return 8;
    if (s == "+" || s == "-") return 9;
    if (s == "*" || s == "/" || s == "%") return 10;
    return -1;
}

bool is_assign_op(const Token& t) {
    if (t.kind != TokenKind::Operator) return false;
    const auto& s = t.text;
    return s == "=" || s == "+=" || s == "-=" || s == "*=" || s == "/=" || s == "%=" || s == "&=" ||
           s == "|=" || s == "^=" || s == "<<=" || s == ">>=" || s == ">>>=";
}

class Parser {
public:
    explicit Parser(SyntaxTree& tree) : tokens_(tree.tokens) {
        for (std::size_t i = 0; i < tokens_.size(); ++i)
            if (!tokens_[i].is_comment()) code_.push_back(i);
    }

    NodePtr method_declaration() {
        auto node = make(NodeKind::Method);
        modifiers(*node);
        member_after_modifiers(*node, /*top_level=*/true);
        if (cur().kind != TokenKind::EndOfInput) fail("unexpected tokens after method declaration");
        return node;
    }

private:
    std::vector<Token>& tokens_;
    std::vector<std::size_t> code_;
    std::size_t p_ = 0;
    std::size_t pending_gt_ = 0;
    std::vector<std::size_t> marks_;

    struct State {
        std::size_t p;
        std::size_t pending_gt;
        std::size_t marks;
    };

    State save() const { return {p_, pending_gt_, marks_.size()}; }
    void restore(const State& s) {
        p_ = s.p;
        pending_gt_ = s.pending_gt;
        while (marks_.size() > s.marks) {
            tokens_[marks_.back()].type_syntax = false;
            marks_.pop_back();
        }
    }

    // Runs fn speculatively; on ParseError rewinds and returns false.
    template <typename Fn>
    bool attempt(Fn&& fn) {
        const auto s = save();
        try {
            fn();
            return true;
        } catch (const ParseError&) {
            restore(s);
            return false;
        }
    }

    const Token& at_offset(std::size_t k) const {
        const std::size_t i = p_ + k;
        return tokens_[code_[i < code_.size() ? i : code_.size() - 1]];
    }
    const Token& cur() const { return at_offset(0); }
    const Token& peek(std::size_t k = 1) const { return at_offset(k); }
    std::size_t cur_index() const { return code_[p_ < code_.size() ? p_ : code_.size() - 1]; }
    std::size_t prev_index() const { return p_ == 0 ? code_[0] : code_[p_ - 1]; }

    bool at_op(std::string_view s) const { return cur().is(TokenKind::Operator, s); }
    bool at_sep(std::string_view s) const { return cur().is(TokenKind::Separator, s); }
    bool at_kw(std::string_view s) const { return cur().is(TokenKind::Keyword, s); }
    bool at_ident() const { return cur().kind == TokenKind::Identifier; }

    [[noreturn]] void fail(const std::string& msg) const {
        const auto& t = cur();
        if (t.kind == TokenKind::EndOfInput) throw ParseError("unexpected end of input: " + msg, t.line, t.column);
        throw ParseError(msg + " near '" + t.text + "'", t.line, t.column);
    }

    void advance() {
        if (cur().kind == TokenKind::EndOfInput) fail("unexpected end of input");
        ++p_;
    }

    void expect_sep(std::string_view s) {
        if (!at_sep(s)) fail("expected '" + std::string(s) + "'");
        advance();
    }
    void expect_op(std::string_view s) {
        if (!at_op(s)) fail("expected '" + std::string(s) + "'");
        advance();
    }
    void expect_kw(std::string_view s) {
        if (!at_kw(s)) fail("expected '" + std::string(s) + "'");
        advance();
    }
    std::string expect_ident() {
        if (!at_ident()) fail("expected identifier");
        std::string s = cur().text;
        advance();
        return s;
    }

    void mark_type_syntax() {
        auto idx = cur_index();
        if (!tokens_[idx].type_syntax) {
            tokens_[idx].type_syntax = true;
            marks_.push_back(idx);
        }
    }

    NodePtr make(NodeKind k) { return std::make_unique<Node>(k, cur_index()); }
    NodePtr finish(NodePtr n) {
        n->last_token = prev_index();
        if (n->last_token < n->first_token) n->last_token = n->first_token;
        return n;
    }

    // ---- generics ------------------------------------------------------

    bool at_close_angle() const {
        const auto& t = cur();
        return t.kind == TokenKind::Operator && !t.text.empty() && t.text[0] == '>' &&
               (t.text == ">" || t.text == ">>" || t.text == ">>>");
    }

    // Consumes one '>' character, splitting ">>" and ">>>" logically.
    void close_angle() {
        if (!at_close_angle()) fail("expected '>'");
        mark_type_syntax();
        ++pending_gt_;
        if (pending_gt_ == cur().text.size()) {
            pending_gt_ = 0;
            advance();
        }
    }

    void type_arguments(Node& parent) {
        if (!at_op("<")) fail("expected '<'");
        mark_type_syntax();
        advance();
        if (at_close_angle()) {  // diamond
            close_angle();
            return;
        }
        for (;;) {
            annotations(parent);
            if (at_op("?")) {
                mark_type_syntax();
                advance();
                if (at_kw("extends") || at_kw("super")) {
                    advance();
                    parent.add(type());
                }
            } else {
                parent.add(type());
            }
            if (pending_gt_ == 0 && at_sep(",")) {
                advance();
                continue;
            }
            break;
        }
        close_angle();
    }

    void type_parameters(Node& parent) {
        if (!at_op("<")) fail("expected '<'");
        mark_type_syntax();
        advance();
        for (;;) {
            annotations(parent);
            auto tp = make(NodeKind::Type);
            tp->text = expect_ident();
            if (at_kw("extends")) {
                advance();
                tp->add(type());
                while (at_op("&")) {
                    mark_type_syntax();
                    advance();
                    tp->add(type());
                }
            }
            parent.add(finish(std::move(tp)));
            if (pending_gt_ == 0 && at_sep(",")) {
                advance();
                continue;
            }
            break;
        }
        close_angle();
    }

    NodePtr type(bool allow_dims = true) {
        auto node = make(NodeKind::Type);
        annotations(*node);
        if (is_primitive(cur())) {
            node->text = cur().text;
            advance();
        } else if (at_ident()) {
            node->text = cur().text;
            advance();
            if (at_op("<")) type_arguments(*node);
            while (pending_gt_ == 0 && at_sep(".") && peek().kind == TokenKind::Identifier) {
                advance();
                node->text += "." + cur().text;
                advance();
                if (at_op("<")) type_arguments(*node);
            }
        } else {
            fail("expected type");
        }
        if (allow_dims && pending_gt_ == 0) dims(*node);
        return finish(std::move(node));
    }

    void dims(Node& node) {
        while (at_sep("[") && peek().is(TokenKind::Separator, "]")) {
            advance();
            advance();
            node.text += "[]";
        }
    }

    // ---- modifiers and annotations ------------------------------------

    void annotation(Node& parent) {
        auto node = make(NodeKind::Annotation);
        expect_sep("@");
        node->text = expect_ident();
        while (at_sep(".") && peek().kind == TokenKind::Identifier) {
            advance();
            node->text += "." + cur().text;
            advance();
        }
        if (at_sep("(")) skip_balanced("(", ")");
        parent.add(finish(std::move(node)));
    }

    void annotations(Node& parent) {
        while (at_sep("@") && !peek().is(TokenKind::Keyword, "interface")) annotation(parent);
    }

    void modifiers(Node& parent) {
        for (;;) {
            if (at_sep("@") && !peek().is(TokenKind::Keyword, "interface")) {
                annotation(parent);
            } else if (is_modifier(cur())) {
                advance();
            } else {
                break;
            }
        }
    }

    void skip_balanced(std::string_view open, std::string_view close) {
        expect_sep(open);
        int depth = 1;
        while (depth > 0) {
            if (cur().kind == TokenKind::EndOfInput) fail("unbalanced '" + std::string(open) + "'");
            if (at_sep(open)) ++depth;
            else if (at_sep(close)) --depth;
            advance();
        }
    }

    // ---- declarations --------------------------------------------------

    // After modifiers: [typeParams] (ctor | type/void name) params ... body
    void member_after_modifiers(Node& method, bool top_level) {
        if (at_op("<")) type_parameters(method);
        if (at_ident() && peek().is(TokenKind::Separator, "(")) {
            method.text = cur().text;  // constructor
            advance();
        } else {
            if (at_kw("void")) {
                auto t = make(NodeKind::Type);
                t->text = "void";
                advance();
                method.add(finish(std::move(t)));
            } else {
                method.add(type());
            }
            method.text = expect_ident();
        }
        parameters(method);
        dims(method);
        if (at_kw("throws")) {
            advance();
            method.add(type());
            while (at_sep(",")) {
                advance();
                method.add(type());
            }
        }
        if (at_sep("{")) {
            method.add(block());
        } else if (at_sep(";")) {
            advance();
        } else {
            fail(top_level ? "expected method body" : "expected member body");
        }
        method.last_token = prev_index();
    }

    void parameters(Node& method) {
        expect_sep("(");
        if (!at_sep(")")) {
            for (;;) {
                auto param = make(NodeKind::Parameter);
                modifiers(*param);
                param->add(type());
                annotations(*param);
                if (at_sep("...")) advance();
                if (at_kw("this")) {
                    advance();
                    param->text = "this";
                } else {
                    param->text = expect_ident();
                }
                dims(*param);
                method.add(finish(std::move(param)));
                if (at_sep(",")) {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect_sep(")");
    }

    NodePtr class_body() {
        auto body = make(NodeKind::ClassBody);
        expect_sep("{");
        while (!at_sep("}")) {
            if (cur().kind == TokenKind::EndOfInput) fail("unterminated class body");
            if (at_sep(";")) {
                advance();
                continue;
            }
            if (at_sep("{") || (at_kw("static") && peek().is(TokenKind::Separator, "{"))) {
                auto init = make(NodeKind::Initializer);
                if (at_kw("static")) advance();
                init->add(block());
                body->add(finish(std::move(init)));
                continue;
            }
            auto member = make(NodeKind::Method);
            modifiers(*member);
            if (at_kw("class") || at_kw("interface") || at_kw("enum") ||
                (at_sep("@") && peek().is(TokenKind::Keyword, "interface"))) {
                body->add(type_declaration_rest());
                continue;
            }
            const auto s = save();
            bool is_method = false;
            if (at_op("<")) {
                is_method = true;
            } else if (at_ident() && peek().is(TokenKind::Separator, "(")) {
                is_method = true;
            } else if (at_kw("void")) {
                is_method = true;
            } else {
                type();
                expect_ident();
                is_method = at_sep("(");
            }
            restore(s);
            if (is_method) {
                member_after_modifiers(*member, false);
                body->add(finish(std::move(member)));
            } else {
                auto field = std::make_unique<Node>(NodeKind::FieldDecl, member->first_token);
                for (auto& a : member->children) field->add(std::move(a));
                field->add(type());
                declarators(*field);
                expect_sep(";");
                body->add(finish(std::move(field)));
            }
        }
        expect_sep("}");
        return finish(std::move(body));
    }

    // class/interface/enum/@interface after modifiers.
    NodePtr type_declaration_rest() {
        auto decl = make(NodeKind::LocalClassDecl);
        if (at_kw("enum") || at_sep("@")) {
            if (at_sep("@")) advance();
            advance();
            decl->text = expect_ident();
            if (at_kw("implements")) {
                advance();
                decl->add(type());
                while (at_sep(",")) {
                    advance();
                    decl->add(type());
                }
            }
            skip_balanced("{", "}");
            return finish(std::move(decl));
        }
        advance();  // class | interface
        decl->text = expect_ident();
        if (at_op("<")) type_parameters(*decl);
        if (at_kw("extends")) {
            advance();
            decl->add(type());
            while (at_sep(",")) {
                advance();
                decl->add(type());
            }
        }
        if (at_kw("implements")) {
            advance();
            decl->add(type());
            while (at_sep(",")) {
                advance();
                decl->add(type());
            }
        }
        decl->add(class_body());
        return finish(std::move(decl));
    }

    void declarators(Node& parent) {
        for (;;) {
            auto d = make(NodeKind::VarDeclarator);
            d->text = expect_ident();
            dims(*d);
            if (at_op("=")) {
                advance();
                d->add(variable_initializer());
            }
            parent.add(finish(std::move(d)));
            if (at_sep(",")) {
                advance();
                continue;
            }
            break;
        }
    }

    NodePtr variable_initializer() { return at_sep("{") ? array_initializer() : expression(); }

    NodePtr array_initializer() {
        auto node = make(NodeKind::ArrayInit);
        expect_sep("{");
        while (!at_sep("}")) {
            node->add(variable_initializer());
            if (at_sep(",")) advance();
            else break;
        }
        expect_sep("}");
        return finish(std::move(node));
    }

    // ---- statements ------------------------------------------------------

    NodePtr block() {
        auto node = make(NodeKind::Block);
        expect_sep("{");
        while (!at_sep("}")) {
            if (cur().kind == TokenKind::EndOfInput) fail("expected '}'");
            node->add(block_statement());
        }
        expect_sep("}");
        return finish(std::move(node));
    }

    bool may_start_declaration() const {
        return at_ident() || is_primitive(cur()) || at_kw("final") || at_sep("@");
    }

    NodePtr block_statement() {
        {
            const auto s = save();
            Node scratch(NodeKind::Empty, 0);
            modifiers(scratch);
            if (at_kw("class") || at_kw("interface") || at_kw("enum")) {
                restore(s);
                const auto first = cur_index();
                Node mods(NodeKind::Empty, 0);
                modifiers(mods);
                auto decl = type_declaration_rest();
                decl->first_token = first;
                return decl;
            }
            restore(s);
        }
        if (may_start_declaration()) {
            NodePtr decl;
            if (attempt([&] { decl = local_variable_declaration(/*require_semicolon=*/true); })) return decl;
        }
        return statement();
    }

    // modifiers type declarators [;]
    NodePtr local_variable_declaration(bool require_semicolon) {
        auto node = make(NodeKind::LocalVarDecl);
        modifiers(*node);
        node->add(type());
        if (!at_ident()) fail("expected identifier");
        const Token& after = peek();
        const bool ok = after.is(TokenKind::Operator, "=") || after.is(TokenKind::Separator, ",") ||
                        after.is(TokenKind::Separator, ";") || after.is(TokenKind::Separator, "[") ||
                        after.is(TokenKind::Operator, ":");
        if (!ok) fail("not a declaration");
        declarators(*node);
        if (require_semicolon) expect_sep(";");
        return finish(std::move(node));
    }

    NodePtr statement() {
        const Token& t = cur();
        if (t.kind == TokenKind::Separator) {
            if (t.text == "{") return block();
            if (t.text == ";") {
                auto n = make(NodeKind::Empty);
                advance();
                return finish(std::move(n));
            }
        }
        if (t.kind == TokenKind::Keyword) {
            const auto& k = t.text;
            if (k == "if") return if_statement();
            if (k == "for") return for_statement();
            if (k == "while") {
                auto n = make(NodeKind::While);
                advance();
                n->add(paren_expression());
                n->add(statement());
                return finish(std::move(n));
            }
            if (k == "do") {
                auto n = make(NodeKind::DoWhile);
                advance();
                n->add(statement());
                expect_kw("while");
                n->add(paren_expression());
                expect_sep(";");
                return finish(std::move(n));
            }
            if (k == "switch") return switch_statement();
            if (k == "return") {
                auto n = make(NodeKind::Return);
                advance();
                if (!at_sep(";")) n->add(expression());
                expect_sep(";");
                return finish(std::move(n));
            }
            if (k == "break" || k == "continue") {
                auto n = make(k == "break" ? NodeKind::Break : NodeKind::Continue);
                advance();
                if (at_ident()) n->text = expect_ident();
                expect_sep(";");
                return finish(std::move(n));
            }
            if (k == "throw") {
                auto n = make(NodeKind::Throw);
                advance();
                n->add(expression());
                expect_sep(";");
                return finish(std::move(n));
            }
            if (k == "try") return try_statement();
            if (k == "synchronized") {
                auto n = make(NodeKind::Synchronized);
                advance();
                n->add(paren_expression());
                n->add(block());
                return finish(std::move(n));
            }
            if (k == "assert") {
                auto n = make(NodeKind::Assert);
                advance();
                n->add(expression());
                if (at_op(":")) {
                    advance();
                    n->add(expression());
                }
                expect_sep(";");
                return finish(std::move(n));
            }
            if (k == "else") fail("'else' without 'if'");
            if (k == "case" || k == "default") fail("label outside switch");
        }
        if (t.kind == TokenKind::Identifier && peek().is(TokenKind::Operator, ":")) {
            auto n = make(NodeKind::Labeled);
            n->text = expect_ident();
            advance();
            n->add(statement());
            return finish(std::move(n));
        }
        auto n = make(NodeKind::ExpressionStmt);
        n->add(expression());
        expect_sep(";");
        return finish(std::move(n));
    }

    NodePtr paren_expression() {
        expect_sep("(");
        auto e = expression();
        expect_sep(")");
        return e;
    }

    NodePtr if_statement() {
        auto n = make(NodeKind::If);
        expect_kw("if");
        n->add(paren_expression());
        n->add(statement());
        if (at_kw("else")) {
            advance();
            n->add(statement());
        }
        return finish(std::move(n));
    }

    NodePtr for_statement() {
        const auto first = cur_index();
        expect_kw("for");
        expect_sep("(");
        {
            NodePtr each;
            const bool is_each = attempt([&] {
                each = std::make_unique<Node>(NodeKind::ForEach, first);
                auto var = make(NodeKind::LocalVarDecl);
                modifiers(*var);
                var->add(type());
                auto d = make(NodeKind::VarDeclarator);
                d->text = expect_ident();
                dims(*d);
                var->add(finish(std::move(d)));
                each->add(finish(std::move(var)));
                if (!at_op(":")) fail("expected ':'");
                advance();
            });
            if (is_each) {
                each->add(expression());
                expect_sep(")");
                each->add(statement());
                return finish(std::move(each));
            }
        }
        auto n = std::make_unique<Node>(NodeKind::For, first);
        if (!at_sep(";")) {
            NodePtr decl;
            if (may_start_declaration() && attempt([&] { decl = local_variable_declaration(false); })) {
                n->add(std::move(decl));
            } else {
                expression_list(*n);
            }
        }
        expect_sep(";");
        if (!at_sep(";")) n->add(expression());
        expect_sep(";");
        if (!at_sep(")")) expression_list(*n);
        expect_sep(")");
        n->add(statement());
        return finish(std::move(n));
    }

    void expression_list(Node& parent) {
        for (;;) {
            parent.add(expression());
            if (at_sep(",")) {
                advance();
                continue;
            }
            break;
        }
    }

    NodePtr switch_statement() {
        auto n = make(NodeKind::Switch);
        expect_kw("switch");
        n->add(paren_expression());
        expect_sep("{");
        while (!at_sep("}")) {
            if (cur().kind == TokenKind::EndOfInput) fail("expected '}'");
            if (at_kw("case")) {
                auto label = make(NodeKind::SwitchLabel);
                label->text = "case";
                advance();
                label->add(conditional());
                expect_op(":");
                n->add(finish(std::move(label)));
            } else if (at_kw("default")) {
                auto label = make(NodeKind::SwitchLabel);
                label->text = "default";
                advance();
                expect_op(":");
                n->add(finish(std::move(label)));
            } else {
                n->add(block_statement());
            }
        }
        expect_sep("}");
        return finish(std::move(n));
    }

    NodePtr try_statement() {
        auto n = make(NodeKind::Try);
        expect_kw("try");
        if (at_sep("(")) {
            advance();
            while (!at_sep(")")) {
                auto r = make(NodeKind::Resource);
                modifiers(*r);
                r->add(type());
                auto d = make(NodeKind::VarDeclarator);
                d->text = expect_ident();
                expect_op("=");
                d->add(expression());
                r->add(finish(std::move(d)));
                n->add(finish(std::move(r)));
                if (at_sep(";")) advance();
                else break;
            }
            expect_sep(")");
        }
        n->add(block());
        bool handled = false;
        while (at_kw("catch")) {
            handled = true;
            auto c = make(NodeKind::Catch);
            advance();
            expect_sep("(");
            modifiers(*c);
            c->add(type());
            while (at_op("|")) {
                mark_type_syntax();
                advance();
                c->add(type());
            }
            c->text = expect_ident();
            expect_sep(")");
            c->add(block());
            n->add(finish(std::move(c)));
        }
        if (at_kw("finally")) {
            handled = true;
            advance();
            n->add(block());
        }
        if (!handled && n->children.size() == 1) fail("'try' without 'catch' or 'finally'");
        return finish(std::move(n));
    }

    // ---- expressions -------------------------------------------------------

    NodePtr expression() {
        if (lambda_ahead()) return lambda();
        auto lhs = conditional();
        if (is_assign_op(cur())) {
            auto n = std::make_unique<Node>(NodeKind::Assign, lhs->first_token);
            n->text = cur().text;
            advance();
            n->add(std::move(lhs));
            n->add(expression());
            return finish(std::move(n));
        }
        return lhs;
    }

    std::size_t matching_paren(std::size_t from) const {
        int depth = 0;
        for (std::size_t i = from; i < code_.size(); ++i) {
            const auto& t = tokens_[code_[i]];
            if (t.is(TokenKind::Separator, "(")) ++depth;
            else if (t.is(TokenKind::Separator, ")")) {
                if (--depth == 0) return i;
            } else if (t.kind == TokenKind::EndOfInput) {
                break;
            }
        }
        return code_.size();
    }

    bool lambda_ahead() const {
        if (at_ident() && peek().is(TokenKind::Operator, "->")) return true;
        if (!at_sep("(")) return false;
        const auto close = matching_paren(p_);
        return close + 1 < code_.size() && tokens_[code_[close + 1]].is(TokenKind::Operator, "->");
    }

    NodePtr lambda() {
        auto n = make(NodeKind::Lambda);
        if (at_ident()) {
            auto prm = make(NodeKind::Parameter);
            prm->text = expect_ident();
            n->add(finish(std::move(prm)));
        } else {
            expect_sep("(");
            while (!at_sep(")")) {
                auto prm = make(NodeKind::Parameter);
                if (at_ident() && (peek().is(TokenKind::Separator, ",") || peek().is(TokenKind::Separator, ")"))) {
                    prm->text = expect_ident();
                } else {
                    modifiers(*prm);
                    prm->add(type());
                    if (at_sep("...")) advance();
                    prm->text = expect_ident();
                    dims(*prm);
                }
                n->add(finish(std::move(prm)));
                if (at_sep(",")) advance();
                else break;
            }
            expect_sep(")");
        }
        expect_op("->");
        n->add(at_sep("{") ? block() : expression());
        return finish(std::move(n));
    }

    NodePtr conditional() {
        auto cond = binary(1);
        if (!at_op("?")) return cond;
        auto n = std::make_unique<Node>(NodeKind::Conditional, cond->first_token);
        n->add(std::move(cond));
        advance();
        n->add(lambda_ahead() ? lambda() : expression());
        expect_op(":");
        n->add(lambda_ahead() ? lambda() : conditional());
        return finish(std::move(n));
    }

    NodePtr binary(int min_prec) {
        auto left = unary();
        for (;;) {
            const int prec = binary_precedence(cur());
            if (prec < min_prec) break;
            if (at_kw("instanceof")) {
                auto n = std::make_unique<Node>(NodeKind::InstanceOf, left->first_token);
                advance();
                n->add(std::move(left));
                modifiers(*n);
                n->add(type());
                left = finish(std::move(n));
                continue;
            }
            auto n = std::make_unique<Node>(NodeKind::Binary, left->first_token);
            n->text = cur().text;
            advance();
            n->add(std::move(left));
            n->add(binary(prec + 1));
            left = finish(std::move(n));
        }
        return left;
    }

    bool starts_cast_operand(const Token& t) const {
        switch (t.kind) {
            case TokenKind::Identifier:
            case TokenKind::IntegerLiteral:
            case TokenKind::FloatLiteral:
            case TokenKind::CharLiteral:
            case TokenKind::StringLiteral:
            case TokenKind::BooleanLiteral:
            case TokenKind::NullLiteral:
                return true;
            case TokenKind::Separator:
                return t.text == "(";
            case TokenKind::Operator:
                return t.text == "!" || t.text == "~";
            case TokenKind::Keyword:
                return t.text == "this" || t.text == "super" || t.text == "new" || is_primitive(t) ||
                       t.text == "void";
            default:
                return false;
        }
    }

    NodePtr unary() {
        const Token& t = cur();
        if (t.kind == TokenKind::Operator &&
            (t.text == "++" || t.text == "--" || t.text == "+" || t.text == "-" || t.text == "!" || t.text == "~")) {
            auto n = make(NodeKind::Unary);
            n->text = t.text;
            advance();
            n->add(unary());
            return finish(std::move(n));
        }
        if (at_sep("(")) {
            NodePtr cast;
            const bool primitive = is_primitive(peek());
            const bool ok = attempt([&] {
                cast = make(NodeKind::Cast);
                advance();
                cast->add(type());
                while (at_op("&")) {
                    mark_type_syntax();
                    advance();
                    cast->add(type());
                }
                expect_sep(")");
                if (!primitive && !starts_cast_operand(cur())) fail("not a cast");
                if (primitive && !starts_cast_operand(cur()) && binary_precedence(cur()) >= 0 && !at_op("+") &&
                    !at_op("-"))
                    fail("not a cast");
            });
            if (ok) {
                cast->add(lambda_ahead() ? lambda() : unary());
                return finish(std::move(cast));
            }
        }
        return postfix(primary());
    }

    NodePtr postfix(NodePtr expr) {
        for (;;) {
            if (at_sep(".")) {
                advance();
                if (at_op("<")) {
                    auto call = std::make_unique<Node>(NodeKind::MethodCall, expr->first_token);
                    call->add(std::move(expr));
                    type_arguments(*call);
                    call->text = expect_ident();
                    arguments(*call);
                    expr = finish(std::move(call));
                } else if (at_ident()) {
                    std::string name = expect_ident();
                    if (at_sep("(")) {
                        auto call = std::make_unique<Node>(NodeKind::MethodCall, expr->first_token);
                        call->text = name;
                        call->add(std::move(expr));
                        arguments(*call);
                        expr = finish(std::move(call));
                    } else {
                        auto fa = std::make_unique<Node>(NodeKind::FieldAccess, expr->first_token);
                        fa->text = name;
                        fa->add(std::move(expr));
                        expr = finish(std::move(fa));
                    }
                } else if (at_kw("new")) {
                    auto created = creator();
                    created->first_token = expr->first_token;
                    created->add(std::move(expr));
                    expr = finish(std::move(created));
                } else if (at_kw("this") || at_kw("class") || at_kw("super")) {
                    const NodeKind k = at_kw("class") ? NodeKind::ClassLiteral : NodeKind::FieldAccess;
                    auto fa = std::make_unique<Node>(k, expr->first_token);
                    fa->text = cur().text;
                    advance();
                    fa->add(std::move(expr));
                    if (fa->text == "super" && at_sep("(")) {
                        fa->kind = NodeKind::MethodCall;
                        arguments(*fa);
                    }
                    expr = finish(std::move(fa));
                } else {
                    fail("expected member name after '.'");
                }
            } else if (at_sep("[")) {
                auto aa = std::make_unique<Node>(NodeKind::ArrayAccess, expr->first_token);
                advance();
                aa->add(std::move(expr));
                aa->add(expression());
                expect_sep("]");
                expr = finish(std::move(aa));
            } else if (at_sep("::")) {
                auto ref = std::make_unique<Node>(NodeKind::MethodRef, expr->first_token);
                advance();
                ref->add(std::move(expr));
                if (at_op("<")) type_arguments(*ref);
                if (at_kw("new")) {
                    ref->text = "new";
                    advance();
                } else {
                    ref->text = expect_ident();
                }
                expr = finish(std::move(ref));
            } else if (at_op("++") || at_op("--")) {
                auto pf = std::make_unique<Node>(NodeKind::Postfix, expr->first_token);
                pf->text = cur().text;
                advance();
                pf->add(std::move(expr));
                expr = finish(std::move(pf));
            } else {
                return expr;
            }
        }
    }

    void arguments(Node& call) {
        expect_sep("(");
        while (!at_sep(")")) {
            call.add(expression());
            if (at_sep(",")) advance();
            else break;
        }
        expect_sep(")");
    }

    NodePtr creator() {
        auto first = cur_index();
        expect_kw("new");
        Node scratch(NodeKind::Empty, 0);
        if (at_op("<")) type_arguments(scratch);
        auto t = type(/*allow_dims=*/false);
        if (at_sep("[")) {
            auto arr = std::make_unique<Node>(NodeKind::NewArray, first);
            arr->add(std::move(t));
            bool sized = false;
            while (at_sep("[")) {
                advance();
                if (at_sep("]")) {
                    advance();
                    continue;
                }
                sized = true;
                arr->add(expression());
                expect_sep("]");
            }
            if (!sized) {
                if (!at_sep("{")) fail("array creation needs a size or initializer");
                arr->add(array_initializer());
            }
            return finish(std::move(arr));
        }
        auto obj = std::make_unique<Node>(NodeKind::NewObject, first);
        obj->text = t->text;
        obj->add(std::move(t));
        arguments(*obj);
        if (at_sep("{")) obj->add(class_body());
        return finish(std::move(obj));
    }

    NodePtr primary() {
        const Token& t = cur();
        if (t.is_literal()) {
            auto n = make(NodeKind::Literal);
            n->text = t.text;
            advance();
            return finish(std::move(n));
        }
        if (t.kind == TokenKind::Separator && t.text == "(") {
            auto n = make(NodeKind::Paren);
            advance();
            n->add(expression());
            expect_sep(")");
            return finish(std::move(n));
        }
        if (t.kind == TokenKind::Keyword) {
            if (t.text == "this" || t.text == "super") {
                auto n = make(t.text == "this" ? NodeKind::This : NodeKind::Super);
                n->text = t.text;
                advance();
                if (at_sep("(")) {
                    auto call = std::make_unique<Node>(NodeKind::MethodCall, n->first_token);
                    call->text = n->text;
                    arguments(*call);
                    return finish(std::move(call));
                }
                return finish(std::move(n));
            }
            if (t.text == "new") return creator();
            if (is_primitive(t) || t.text == "void") {
                auto n = make(NodeKind::ClassLiteral);
                auto ty = make(NodeKind::Type);
                ty->text = t.text;
                advance();
                dims(*ty);
                n->add(finish(std::move(ty)));
                if (at_sep("::")) return finish(std::move(n));
                expect_sep(".");
                expect_kw("class");
                return finish(std::move(n));
            }
        }
        if (t.kind == TokenKind::Identifier) {
            auto n = make(NodeKind::Name);
            n->text = t.text;
            advance();
            if (at_sep("(")) {
                n->kind = NodeKind::MethodCall;
                arguments(*n);
                return finish(std::move(n));
            }
            if (at_sep("[") && peek().is(TokenKind::Separator, "]")) {
                auto lit = std::make_unique<Node>(NodeKind::ClassLiteral, n->first_token);
                auto ty = std::make_unique<Node>(NodeKind::Type, n->first_token);
                ty->text = n->text;
                dims(*ty);
                lit->add(finish(std::move(ty)));
                if (at_sep("::")) return finish(std::move(lit));
                expect_sep(".");
                expect_kw("class");
                return finish(std::move(lit));
            }
            return finish(std::move(n));
        }
        fail("expected expression");
    }
};

}  // namespace

SyntaxTree parse_method(std::string_view source) {
    SyntaxTree tree;
    tree.source = std::string(source);
    tree.tokens = tokenize(tree.source);
    Parser parser(tree);
    tree.root = parser.method_declaration();
    return tree;
}

}  // namespace cl::extract
