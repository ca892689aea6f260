#pragma once

// Small expression language for user-supplied right-hand sides, weights,
// normalizations and exact solutions.
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//
// Names are t, y, alpha, pi, e; functions are sin cos tan exp ln sqrt abs gamma.

#include "powfrac/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>

namespace powfrac::expr {

class ParseError : public DomainError {
public:
    ParseError(const std::string& what, std::size_t column)
        : DomainError("column " + std::to_string(column) + ": " + what), column_(column) {}
    /// 1-based column of the first offending character (input length + 1 at end).
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

enum class Kind { Number, Var, Const, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Var { T, Y, Alpha };
enum class Const { Pi, E };
enum class Func { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs, Gamma };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Kind kind = Kind::Number;
    double value = 0.0;
    Var var = Var::T;
    Const constant = Const::Pi;
    Func func = Func::Sin;
    NodePtr lhs;
    NodePtr rhs;
};

struct Vars {
    double t = 0.0;
    double y = 0.0;
    double alpha = 0.0;
};

namespace detail {

inline constexpr std::array<std::pair<std::string_view, Func>, 8> kFuncs{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"exp", Func::Exp},
    {"ln", Func::Ln},
    {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
    {"gamma", Func::Gamma},
}};

inline constexpr std::array<std::pair<std::string_view, Var>, 3> kVars{{
    {"t", Var::T},
    {"y", Var::Y},
    {"alpha", Var::Alpha},
}};

inline constexpr std::array<std::pair<std::string_view, Const>, 2> kConsts{{
    {"pi", Const::Pi},
    {"e", Const::E},
}};

template <class Table>
const auto* lookup(const Table& table, std::string_view name) {
    for (const auto& entry : table) {
        if (entry.first == name) {
            return &entry.second;
        }
    }
    return static_cast<const typename Table::value_type::second_type*>(nullptr);
}

template <class Table, class Key>
std::string_view name_of(const Table& table, Key key) {
    for (const auto& entry : table) {
        if (entry.second == key) {
            return entry.first;
        }
    }
    return "?";
}

inline NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        skip_space();
        if (pos_ == src_.size()) {
            throw ParseError("empty expression", 1);
        }
        NodePtr root = sum();
        skip_space();
        if (pos_ != src_.size()) {
            if (src_[pos_] == ')') {
                throw ParseError("unbalanced ')'", column());
            }
            throw ParseError(std::string("unexpected '") + src_[pos_] + "'", column());
        }
        return root;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[nodiscard]] std::size_t column() const { return pos_ + 1; }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        NodePtr lhs = product();
        for (;;) {
            if (accept('+')) {
                lhs = make(Kind::Add, lhs, product());
            } else if (accept('-')) {
                lhs = make(Kind::Sub, lhs, product());
            } else {
                return lhs;
            }
        }
    }

    NodePtr product() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Kind::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make(Kind::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            return make(Kind::Neg, unary());
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) {
            return make(Kind::Pow, base, unary());
        }
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ == src_.size()) {
            throw ParseError("unexpected end of expression", column());
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = sum();
            if (!accept(')')) {
                throw ParseError("expected ')'", column());
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return name();
        }
        throw ParseError(std::string("unexpected '") + c + "'", column());
    }

    NodePtr number() {
        const std::size_t start = pos_;
        double value = 0.0;
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec == std::errc::result_out_of_range) {
            throw ParseError("numeric literal out of range", start + 1);
        }
        if (ec != std::errc() || ptr == first) {
            throw ParseError("malformed numeric literal", start + 1);
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        auto n = std::make_shared<Node>();
        n->kind = Kind::Number;
        n->value = value;
        return n;
    }

    NodePtr name() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view id = src_.substr(start, pos_ - start);
        if (const Func* f = lookup(kFuncs, id)) {
            if (!accept('(')) {
                throw ParseError("expected '(' after " + std::string(id), column());
            }
            NodePtr arg = sum();
            if (!accept(')')) {
                throw ParseError("expected ')'", column());
            }
            auto n = std::make_shared<Node>();
            n->kind = Kind::Call;
            n->func = *f;
            n->lhs = std::move(arg);
            return n;
        }
        auto n = std::make_shared<Node>();
        if (const Var* v = lookup(kVars, id)) {
            n->kind = Kind::Var;
            n->var = *v;
            return n;
        }
        if (const Const* k = lookup(kConsts, id)) {
            n->kind = Kind::Const;
            n->constant = *k;
            return n;
        }
        throw ParseError("unknown identifier '" + std::string(id) + "'", start + 1);
    }
};

inline char op_char(Kind k) {
    switch (k) {
        case Kind::Add: return '+';
        case Kind::Sub: return '-';
        case Kind::Mul: return '*';
        case Kind::Div: return '/';
        default: return '^';
    }
}

inline void print(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::Number: {
            std::array<char, 32> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
            (void)ec;
            out.append(buf.data(), ptr);
            return;
        }
        case Kind::Var: out += name_of(kVars, n.var); return;
        case Kind::Const: out += name_of(kConsts, n.constant); return;
        case Kind::Neg:
            out += "(-";
            print(*n.lhs, out);
            out += ')';
            return;
        case Kind::Call:
            out += name_of(kFuncs, n.func);
            out += '(';
            print(*n.lhs, out);
            out += ')';
            return;
        default:
            out += '(';
            print(*n.lhs, out);
            out += ' ';
            out += op_char(n.kind);
            out += ' ';
            print(*n.rhs, out);
            out += ')';
            return;
    }
}

inline double apply(Func f, double x) {
    switch (f) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Tan: return std::tan(x);
        case Func::Exp: return std::exp(x);
        case Func::Ln: return std::log(x);
        case Func::Sqrt: return std::sqrt(x);
        case Func::Abs: return std::abs(x);
        case Func::Gamma: return std::tgamma(x);
    }
    return x;
}

inline double eval(const Node& n, const Vars& v) {
    switch (n.kind) {
        case Kind::Number: return n.value;
        case Kind::Var:
            return n.var == Var::T ? v.t : n.var == Var::Y ? v.y : v.alpha;
        case Kind::Const: return n.constant == Const::Pi ? std::numbers::pi : std::numbers::e;
        case Kind::Neg: return -eval(*n.lhs, v);
        case Kind::Add: return eval(*n.lhs, v) + eval(*n.rhs, v);
        case Kind::Sub: return eval(*n.lhs, v) - eval(*n.rhs, v);
        case Kind::Mul: return eval(*n.lhs, v) * eval(*n.rhs, v);
        case Kind::Div: return eval(*n.lhs, v) / eval(*n.rhs, v);
        case Kind::Pow: return std::pow(eval(*n.lhs, v), eval(*n.rhs, v));
        case Kind::Call: return apply(n.func, eval(*n.lhs, v));
    }
    return 0.0;
}

inline bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
        case Kind::Number: return a.value == b.value;
        case Kind::Var: return a.var == b.var;
        case Kind::Const: return a.constant == b.constant;
        case Kind::Neg: return equal(*a.lhs, *b.lhs);
        case Kind::Call: return a.func == b.func && equal(*a.lhs, *b.lhs);
        default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
}

inline bool uses(const Node& n, Var var) {
    switch (n.kind) {
        case Kind::Var: return n.var == var;
        case Kind::Number:
        case Kind::Const: return false;
        case Kind::Neg:
        case Kind::Call: return uses(*n.lhs, var);
        default: return uses(*n.lhs, var) || uses(*n.rhs, var);
    }
}

}  // namespace detail

/// Immutable parsed expression; cheap to copy and safe to evaluate
/// concurrently.
class Expr {
public:
    explicit Expr(NodePtr root) : root_(std::move(root)) {
        if (!root_) {
            throw DomainError("Expr: null root");
        }
    }

    [[nodiscard]] static Expr parse(std::string_view src) {
        return Expr(detail::Parser(src).parse());
    }

    [[nodiscard]] const Node& root() const noexcept { return *root_; }

    /// Fully parenthesized form; parse(print()) reproduces the tree.
    [[nodiscard]] std::string print() const {
        std::string out;
        detail::print(*root_, out);
        return out;
    }

    [[nodiscard]] double operator()(const Vars& v) const { return detail::eval(*root_, v); }
    [[nodiscard]] double operator()(double t, double y = 0.0, double alpha = 0.0) const {
        return detail::eval(*root_, Vars{t, y, alpha});
    }

    [[nodiscard]] bool uses(Var v) const { return detail::uses(*root_, v); }

    friend bool operator==(const Expr& a, const Expr& b) {
        return detail::equal(*a.root_, *b.root_);
    }

private:
    NodePtr root_;
};

[[nodiscard]] inline Expr parse(std::string_view src) { return Expr::parse(src); }

}  // namespace powfrac::expr
