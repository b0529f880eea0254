#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>

#include "advect/errors.hpp"

namespace advect {

/// How an expression depends on its variables. StateDependent means the
/// solution value u appears anywhere in the tree, regardless of x and t.
enum class DependenceClass { Constant, SpaceOnly, TimeOnly, SpaceTime, StateDependent };

inline const char* to_string(DependenceClass c) {
    switch (c) {
        case DependenceClass::Constant: return "constant";
        case DependenceClass::SpaceOnly: return "space_only";
        case DependenceClass::TimeOnly: return "time_only";
        case DependenceClass::SpaceTime: return "space_time";
        case DependenceClass::StateDependent: return "state_dependent";
    }
    return "?";
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

namespace detail {

class ExprParser;

enum class NodeKind { Const, VarX, VarT, VarU, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

struct ExprNode {
    NodeKind kind;
    double value = 0.0; // Const only
    std::shared_ptr<const ExprNode> lhs, rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;

inline NodePtr make_node(NodeKind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

inline NodePtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Const;
    n->value = v;
    return n;
}

// x^p. Small integer exponents use repeated multiplication so that e.g.
// "x^2" evaluates as exactly x*x; everything else goes through std::pow.
inline double eval_pow(double base, double expo) {
    if (expo == std::floor(expo) && expo >= 0.0 && expo <= 16.0) {
        double r = 1.0;
        for (int k = 0; k < static_cast<int>(expo); ++k) r *= base;
        return r;
    }
    if (base < 0.0 && expo != std::floor(expo))
        throw EvalError("negative base with non-integer exponent");
    return std::pow(base, expo);
}

inline double eval_node(const ExprNode& n, double x, double t, double u) {
    double v = 0.0;
    switch (n.kind) {
        case NodeKind::Const: return n.value;
        case NodeKind::VarX: return x;
        case NodeKind::VarT: return t;
        case NodeKind::VarU: return u;
        case NodeKind::Add: v = eval_node(*n.lhs, x, t, u) + eval_node(*n.rhs, x, t, u); break;
        case NodeKind::Sub: v = eval_node(*n.lhs, x, t, u) - eval_node(*n.rhs, x, t, u); break;
        case NodeKind::Mul: v = eval_node(*n.lhs, x, t, u) * eval_node(*n.rhs, x, t, u); break;
        case NodeKind::Div: {
            const double a = eval_node(*n.lhs, x, t, u);
            const double b = eval_node(*n.rhs, x, t, u);
            if (b == 0.0) throw EvalError("division by zero");
            v = a / b;
            break;
        }
        case NodeKind::Pow:
            v = eval_pow(eval_node(*n.lhs, x, t, u), eval_node(*n.rhs, x, t, u));
            break;
        case NodeKind::Neg: v = -eval_node(*n.lhs, x, t, u); break;
        case NodeKind::Sin: v = std::sin(eval_node(*n.lhs, x, t, u)); break;
        case NodeKind::Cos: v = std::cos(eval_node(*n.lhs, x, t, u)); break;
        case NodeKind::Exp: v = std::exp(eval_node(*n.lhs, x, t, u)); break;
    }
    if (!std::isfinite(v)) throw EvalError("non-finite result");
    return v;
}

} // namespace detail

/// Parsed arithmetic expression over variables x, t, u with operators
/// + - * / ^, unary minus and the functions sin, cos, exp.
///
/// Grammar (precedence low to high):
///   additive       := multiplicative (('+' | '-') multiplicative)*
///   multiplicative := unary (('*' | '/') unary)*
///   unary          := '-' unary | power
///   power          := atom ('^' unary)?          (right-associative)
///   atom           := number | 'x' | 't' | 'u' | func '(' additive ')' | '(' additive ')'
///
/// Unary minus binds tighter than '*' but looser than '^', so "-x^2"
/// reads as -(x^2). Trees are immutable and cheap to copy.
class Expr {
public:
    Expr() : root_(detail::make_const(0.0)) {}

    static Expr parse(std::string_view src);

    /// Evaluates with standard real arithmetic. Left operand first, so the
    /// operation order is fixed by the tree shape.
    double eval(double x, double t, double u) const {
        return detail::eval_node(*root_, x, t, u);
    }

    bool uses_x() const { return uses(detail::NodeKind::VarX); }
    bool uses_t() const { return uses(detail::NodeKind::VarT); }
    bool uses_u() const { return uses(detail::NodeKind::VarU); }

    DependenceClass dependence() const {
        if (uses_u()) return DependenceClass::StateDependent;
        const bool x = uses_x(), t = uses_t();
        if (x && t) return DependenceClass::SpaceTime;
        if (x) return DependenceClass::SpaceOnly;
        if (t) return DependenceClass::TimeOnly;
        return DependenceClass::Constant;
    }

    /// Prints with the minimal parentheses needed so that
    /// parse(e.str()) reproduces the tree exactly.
    std::string str() const {
        std::string out;
        print(*root_, 0, out);
        return out;
    }

    bool same_tree(const Expr& other) const { return equal(*root_, *other.root_); }

private:
    explicit Expr(detail::NodePtr root) : root_(std::move(root)) {}

    bool uses(detail::NodeKind k) const { return uses_rec(*root_, k); }

    static bool uses_rec(const detail::ExprNode& n, detail::NodeKind k) {
        if (n.kind == k) return true;
        if (n.lhs && uses_rec(*n.lhs, k)) return true;
        return n.rhs && uses_rec(*n.rhs, k);
    }

    static bool equal(const detail::ExprNode& a, const detail::ExprNode& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == detail::NodeKind::Const)
            return a.value == b.value || (std::isnan(a.value) && std::isnan(b.value));
        if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
        if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
        if (a.lhs && !equal(*a.lhs, *b.lhs)) return false;
        return !a.rhs || equal(*a.rhs, *b.rhs);
    }

    // Precedence levels used by the printer: 1 additive, 2 multiplicative,
    // 3 unary minus, 4 power, 5 atom.
    static int prec(detail::NodeKind k) {
        using K = detail::NodeKind;
        switch (k) {
            case K::Add: case K::Sub: return 1;
            case K::Mul: case K::Div: return 2;
            case K::Neg: return 3;
            case K::Pow: return 4;
            default: return 5;
        }
    }

    static void print(const detail::ExprNode& n, int min_prec, std::string& out) {
        using K = detail::NodeKind;
        const int p = prec(n.kind);
        const bool parens = p < min_prec;
        if (parens) out += '(';
        switch (n.kind) {
            case K::Const: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
                out += buf;
                break;
            }
            case K::VarX: out += 'x'; break;
            case K::VarT: out += 't'; break;
            case K::VarU: out += 'u'; break;
            case K::Add:
                print(*n.lhs, 1, out); out += " + "; print(*n.rhs, 2, out);
                break;
            case K::Sub:
                print(*n.lhs, 1, out); out += " - "; print(*n.rhs, 2, out);
                break;
            case K::Mul:
                print(*n.lhs, 2, out); out += " * "; print(*n.rhs, 3, out);
                break;
            case K::Div:
                print(*n.lhs, 2, out); out += " / "; print(*n.rhs, 3, out);
                break;
            case K::Neg:
                out += '-'; print(*n.lhs, 3, out);
                break;
            case K::Pow:
                // Left operand of ^ must be an atom; exponent may be a unary.
                print(*n.lhs, 5, out); out += '^'; print(*n.rhs, 3, out);
                break;
            case K::Sin: out += "sin("; print(*n.lhs, 0, out); out += ')'; break;
            case K::Cos: out += "cos("; print(*n.lhs, 0, out); out += ')'; break;
            case K::Exp: out += "exp("; print(*n.lhs, 0, out); out += ')'; break;
        }
        if (parens) out += ')';
    }

    detail::NodePtr root_;

    friend class detail::ExprParser;
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view src) : src_(src) {}

    detail::NodePtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, "expected expression");
        auto e = additive();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError(pos_, "unexpected trailing input");
        return e;
    }

private:
    using K = detail::NodeKind;

    detail::NodePtr additive() {
        auto lhs = multiplicative();
        for (;;) {
            skip_ws();
            if (consume('+')) lhs = detail::make_node(K::Add, lhs, multiplicative());
            else if (consume('-')) lhs = detail::make_node(K::Sub, lhs, multiplicative());
            else return lhs;
        }
    }

    detail::NodePtr multiplicative() {
        auto lhs = unary();
        for (;;) {
            skip_ws();
            if (consume('*')) lhs = detail::make_node(K::Mul, lhs, unary());
            else if (consume('/')) lhs = detail::make_node(K::Div, lhs, unary());
            else return lhs;
        }
    }

    detail::NodePtr unary() {
        skip_ws();
        if (consume('-')) return detail::make_node(K::Neg, unary());
        return power();
    }

    detail::NodePtr power() {
        auto base = atom();
        skip_ws();
        if (consume('^')) return detail::make_node(K::Pow, base, unary());
        return base;
    }

    detail::NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError(pos_, "expected number, variable, function or '('");
        const char c = src_[pos_];
        if (consume('(')) {
            auto e = additive();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(pos_, "expected number, variable, function or '('");
    }

    detail::NodePtr number() {
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        double v = 0.0;
        auto [end, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || end == first) throw ParseError(pos_, "malformed number");
        pos_ += static_cast<std::size_t>(end - first);
        return detail::make_const(v);
    }

    detail::NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return detail::make_node(K::VarX);
        if (name == "t") return detail::make_node(K::VarT);
        if (name == "u") return detail::make_node(K::VarU);
        // The function set is closed; growing it means a new NodeKind plus
        // cases here, in eval_node and in the printer.
        K fn;
        if (name == "sin") fn = K::Sin;
        else if (name == "cos") fn = K::Cos;
        else if (name == "exp") fn = K::Exp;
        else throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
        skip_ws();
        if (!consume('(')) throw ParseError(pos_, "expected '(' after function name");
        auto arg = additive();
        expect(')');
        return detail::make_node(fn, arg);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_ws();
        if (!consume(c)) throw ParseError(pos_, std::string("expected '") + c + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Expr Expr::parse(std::string_view src) {
    return Expr(detail::ExprParser(src).run());
}

/// Maximum of |expr| over an inclusive tensor lattice of sample points.
/// A lower bound on the true supremum; exact at box corners, which is where
/// the monotone velocity laws used here attain their maxima.
struct MaxAbsResult {
    double value = 0.0;
    double x = 0.0, t = 0.0, u = 0.0; // a sample point attaining the max
};

inline MaxAbsResult max_abs_on_box(const Expr& expr, Interval x_range, Interval t_range,
                                   Interval u_range, int samples_per_axis) {
    if (samples_per_axis < 2) throw DomainError("max_abs_on_box: samples_per_axis must be >= 2");
    const int n = samples_per_axis;
    auto coord = [n](Interval r, int i) {
        return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    MaxAbsResult best;
    best.value = -1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double x = coord(x_range, i);
                const double t = coord(t_range, j);
                const double u = coord(u_range, k);
                const double v = std::fabs(expr.eval(x, t, u));
                if (v > best.value) best = {v, x, t, u};
            }
    return best;
}

} // namespace advect
