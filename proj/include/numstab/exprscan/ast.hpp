#pragma once

// Arithmetic expression AST for the vulnerability scanner: decimal literals,
// identifiers, unary negation, the binary operators + - * / %, and calls to
// a fixed set of math functions. Rule patterns additionally contain
// metavariables written ?name. parse and render are mutual inverses:
// render(parse(t)) == t for canonical text and parse(render(e)) == e for
// every AST.

#include <cctype>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace numstab::exprscan {

enum class ExprKind { number, ident, neg, binary, call, metavar };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    // number: the decimal literal text; ident/metavar: the name;
    // binary: one of "+","-","*","/","%"; call: the function name.
    std::string text;
    std::vector<ExprPtr> children;
    // 1-based source span (line fixed per parsed line; columns inclusive).
    int line = 0;
    int column = 0;
    int end_column = 0;
};

inline ExprPtr make_expr(ExprKind kind, std::string text, std::vector<ExprPtr> children = {},
                         int line = 0, int column = 0, int end_column = 0) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->text = std::move(text);
    e->children = std::move(children);
    e->line = line;
    e->column = column;
    e->end_column = end_column;
    return e;
}

/// Structural equality; source positions are ignored. Number literals
/// compare textually, so "2" and "2.0" are distinct nodes.
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind || a->text != b->text ||
        a->children.size() != b->children.size())
        return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!expr_equal(a->children[i], b->children[i])) return false;
    return true;
}

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(std::string msg, int l, int c)
        : std::runtime_error(std::move(msg)), line(l), column(c) {}
};

inline const std::vector<std::string>& known_functions() {
    static const std::vector<std::string> fns = {"exp", "log", "log1p", "sqrt", "sum",
                                                 "max", "min", "pow",   "abs"};
    return fns;
}

namespace detail {

struct Token {
    enum Kind { number, ident, metavar, op, lparen, rparen, comma, equals, end } kind;
    std::string text;
    int column; // 1-based
};

class Lexer {
public:
    Lexer(const std::string& src, int line, bool allow_metavars)
        : src_(src), line_(line), allow_metavars_(allow_metavars) {
        advance();
    }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    int line() const { return line_; }

private:
    void advance() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
        const int col = static_cast<int>(pos_) + 1;
        if (pos_ >= src_.size() || src_[pos_] == '#') { // '#' starts a comment
            current_ = {Token::end, "", col};
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t mark = pos_;
                ++pos_;
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
                if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark; // not an exponent after all
                }
            }
            current_ = {Token::number, src_.substr(start, pos_ - start), col};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            current_ = {Token::ident, src_.substr(start, pos_ - start), col};
            return;
        }
        if (c == '?' && allow_metavars_) {
            std::size_t start = ++pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            if (pos_ == start) throw ParseError("expected metavariable name after '?'", line_, col);
            current_ = {Token::metavar, src_.substr(start, pos_ - start), col};
            return;
        }
        ++pos_;
        switch (c) {
            case '+': case '-': case '*': case '/': case '%':
                current_ = {Token::op, std::string(1, c), col};
                return;
            case '(': current_ = {Token::lparen, "(", col}; return;
            case ')': current_ = {Token::rparen, ")", col}; return;
            case ',': current_ = {Token::comma, ",", col}; return;
            case '=': current_ = {Token::equals, "=", col}; return;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_, col);
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token current_{Token::end, "", 1};
    int line_;
    bool allow_metavars_;
};

class Parser {
public:
    Parser(const std::string& src, int line, bool allow_metavars)
        : lex_(src, line, allow_metavars), line_(line) {}

    ExprPtr parse_full() {
        ExprPtr e = parse_expression();
        if (lex_.peek().kind != Token::end)
            throw ParseError("unexpected trailing input", line_, lex_.peek().column);
        return e;
    }

    ExprPtr parse_expression() {
        ExprPtr left = parse_term();
        while (lex_.peek().kind == Token::op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            const Token op = lex_.next();
            ExprPtr right = parse_term();
            left = make_expr(ExprKind::binary, op.text, {left, right}, line_, left->column,
                             right->end_column);
        }
        return left;
    }

private:
    ExprPtr parse_term() {
        ExprPtr left = parse_unary();
        while (lex_.peek().kind == Token::op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/" || lex_.peek().text == "%")) {
            const Token op = lex_.next();
            ExprPtr right = parse_unary();
            left = make_expr(ExprKind::binary, op.text, {left, right}, line_, left->column,
                             right->end_column);
        }
        return left;
    }

    ExprPtr parse_unary() {
        if (lex_.peek().kind == Token::op && lex_.peek().text == "-") {
            const Token minus = lex_.next();
            ExprPtr child = parse_unary();
            return make_expr(ExprKind::neg, "-", {child}, line_, minus.column, child->end_column);
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Token::number: {
                lex_.next();
                const int end = t.column + static_cast<int>(t.text.size()) - 1;
                return make_expr(ExprKind::number, t.text, {}, line_, t.column, end);
            }
            case Token::metavar: {
                lex_.next();
                const int end = t.column + static_cast<int>(t.text.size());
                return make_expr(ExprKind::metavar, t.text, {}, line_, t.column, end);
            }
            case Token::ident: {
                lex_.next();
                if (lex_.peek().kind == Token::lparen) {
                    bool known = false;
                    for (const auto& fn : known_functions())
                        if (fn == t.text) { known = true; break; }
                    if (!known)
                        throw ParseError("unknown function '" + t.text + "'", line_, t.column);
                    lex_.next(); // '('
                    std::vector<ExprPtr> args;
                    if (lex_.peek().kind != Token::rparen) {
                        args.push_back(parse_expression());
                        while (lex_.peek().kind == Token::comma) {
                            lex_.next();
                            args.push_back(parse_expression());
                        }
                    }
                    if (lex_.peek().kind != Token::rparen)
                        throw ParseError("expected ')'", line_, lex_.peek().column);
                    const Token close = lex_.next();
                    if (args.empty())
                        throw ParseError("call to '" + t.text + "' needs at least one argument",
                                         line_, close.column);
                    return make_expr(ExprKind::call, t.text, std::move(args), line_, t.column,
                                     close.column);
                }
                const int end = t.column + static_cast<int>(t.text.size()) - 1;
                return make_expr(ExprKind::ident, t.text, {}, line_, t.column, end);
            }
            case Token::lparen: {
                lex_.next();
                ExprPtr inner = parse_expression();
                if (lex_.peek().kind != Token::rparen)
                    throw ParseError("expected ')'", line_, lex_.peek().column);
                lex_.next();
                return inner;
            }
            default:
                throw ParseError("expected expression", line_, t.column);
        }
    }

    Lexer lex_;
    int line_;
};

inline int precedence(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::binary: return (e->text == "+" || e->text == "-") ? 1 : 2;
        case ExprKind::neg: return 3;
        default: return 4;
    }
}

} // namespace detail

/// Parses one expression. Metavariables (?name) are accepted only when
/// requested, i.e. for rule patterns and rewrite templates.
inline ExprPtr parse_expr(const std::string& text, bool allow_metavars = false, int line = 1) {
    detail::Parser p(text, line, allow_metavars);
    return p.parse_full();
}

/// Canonical minimal-parentheses rendering.
inline std::string render_expr(const ExprPtr& e) {
    using detail::precedence;
    switch (e->kind) {
        case ExprKind::number:
        case ExprKind::ident:
            return e->text;
        case ExprKind::metavar:
            return "?" + e->text;
        case ExprKind::neg: {
            const std::string inner = render_expr(e->children[0]);
            if (precedence(e->children[0]) < 4 ||
                e->children[0]->kind == ExprKind::neg)
                return "-(" + inner + ")";
            return "-" + inner;
        }
        case ExprKind::binary: {
            const int prec = precedence(e);
            const ExprPtr& l = e->children[0];
            const ExprPtr& r = e->children[1];
            std::string ls = render_expr(l);
            if (precedence(l) < prec) ls = "(" + ls + ")";
            std::string rs = render_expr(r);
            if (precedence(r) <= prec) rs = "(" + rs + ")"; // left-associative grammar
            return ls + " " + e->text + " " + rs;
        }
        case ExprKind::call: {
            std::string out = e->text + "(";
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                if (i) out += ", ";
                out += render_expr(e->children[i]);
            }
            return out + ")";
        }
    }
    throw std::logic_error("render_expr: unreachable");
}

/// Pre-order visit of every node.
template <typename Fn>
void visit_exprs(const ExprPtr& e, Fn&& fn) {
    fn(e);
    for (const auto& c : e->children) visit_exprs(c, fn);
}

} // namespace numstab::exprscan
