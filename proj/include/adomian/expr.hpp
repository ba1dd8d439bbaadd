#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace adomian {

enum class Fun { Exp, Ln, Sin, Cos, Sinh, Cosh };

inline const char* fun_name(Fun f) {
    switch (f) {
        case Fun::Exp: return "exp";
        case Fun::Ln: return "ln";
        case Fun::Sin: return "sin";
        case Fun::Cos: return "cos";
        case Fun::Sinh: return "sinh";
        case Fun::Cosh: return "cosh";
    }
    return "?";
}

enum class NodeKind { Const, Var, IntPow, RealPow, Apply, Product, Sum };

struct parse_error : std::runtime_error {
    std::size_t pos;
    parse_error(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " (at offset " + std::to_string(position) + ")"),
          pos(position) {}
};

struct eval_error : std::runtime_error {
    std::string subterm;
    eval_error(const std::string& msg, std::string term)
        : std::runtime_error(msg + " in subterm `" + term + "`"), subterm(std::move(term)) {}
};

/// Immutable expression tree over named (optionally conjugated) variables.
/// Every construction path normalizes: sums/products are flat and canonically
/// sorted, constants folded, x^1 and x^0 rewritten, equal product factors
/// merged into integer powers. Two normalized trees are equal iff
/// structurally identical.
class Expr {
public:
    struct Node {
        NodeKind kind;
        bool exact = false;     // Const: exact rational vs flagged floating
        Rational rat;           // Const, exact
        cplx val{0.0, 0.0};     // Const, inexact
        std::string name;       // Var
        bool conj = false;      // Var
        long long iexp = 0;     // IntPow
        double rexp = 0.0;      // RealPow
        Fun fun = Fun::Exp;     // Apply
        std::vector<Expr> kids;
    };

    Expr() : p_(zero_node()) {}

    NodeKind kind() const { return p_->kind; }
    const Node& node() const { return *p_; }
    const std::vector<Expr>& kids() const { return p_->kids; }

    bool is_const() const { return p_->kind == NodeKind::Const; }
    bool is_exact_const() const { return is_const() && p_->exact; }
    bool is_zero_const() const { return is_const() && const_value() == cplx(0.0, 0.0); }

    cplx const_value() const {
        return p_->exact ? to_cplx(p_->rat) : p_->val;
    }
    const Rational& const_rational() const { return p_->rat; }

    // --- factories (normalizing) ---

    static Expr constant(Rational r) {
        Node n;
        n.kind = NodeKind::Const;
        n.exact = true;
        n.rat = r;
        return Expr(std::move(n));
    }
    static Expr constant(cplx v) {
        Node n;
        n.kind = NodeKind::Const;
        n.exact = false;
        n.val = v;
        return Expr(std::move(n));
    }
    static Expr var(std::string name, bool conj = false) {
        Node n;
        n.kind = NodeKind::Var;
        n.name = std::move(name);
        n.conj = conj;
        return Expr(std::move(n));
    }

    static Expr sum(std::vector<Expr> kids);
    static Expr product(std::vector<Expr> kids);
    static Expr ipow(Expr base, long long e);
    static Expr rpow(Expr base, double e);
    static Expr apply(Fun f, Expr arg) {
        Node n;
        n.kind = NodeKind::Apply;
        n.fun = f;
        n.kids.push_back(std::move(arg));
        return Expr(std::move(n));
    }
    static Expr neg(Expr e) { return product({constant(Rational(-1)), std::move(e)}); }

    friend int compare(const Expr& a, const Expr& b);
    bool operator==(const Expr& o) const { return compare(*this, o) == 0; }
    bool operator!=(const Expr& o) const { return compare(*this, o) != 0; }
    bool operator<(const Expr& o) const { return compare(*this, o) < 0; }

private:
    std::shared_ptr<const Node> p_;
    explicit Expr(Node&& n) : p_(std::make_shared<const Node>(std::move(n))) {}

    static std::shared_ptr<const Node> zero_node() {
        static const std::shared_ptr<const Node> z = [] {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Const;
            n->exact = true;
            return std::shared_ptr<const Node>(n);
        }();
        return z;
    }
};

namespace detail {

inline int kind_rank(NodeKind k) { return static_cast<int>(k); }

inline int cmp3(long long a, long long b) { return a < b ? -1 : (a > b ? 1 : 0); }
inline int cmp3d(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

} // namespace detail

/// Canonical total order: node kind rank, then payload, then child count,
/// then children lexicographically.
inline int compare(const Expr& a, const Expr& b) {
    if (a.node().kind != b.node().kind)
        return detail::kind_rank(a.node().kind) < detail::kind_rank(b.node().kind) ? -1 : 1;
    const auto& na = a.node();
    const auto& nb = b.node();
    switch (na.kind) {
        case NodeKind::Const: {
            if (na.exact != nb.exact) return na.exact ? -1 : 1;
            if (na.exact) {
                if (na.rat == nb.rat) return 0;
                return na.rat < nb.rat ? -1 : 1;
            }
            if (int c = detail::cmp3d(na.val.real(), nb.val.real())) return c;
            return detail::cmp3d(na.val.imag(), nb.val.imag());
        }
        case NodeKind::Var: {
            if (int c = na.name.compare(nb.name)) return c < 0 ? -1 : 1;
            if (na.conj != nb.conj) return na.conj ? 1 : -1;
            return 0;
        }
        case NodeKind::IntPow: {
            if (int c = compare(na.kids[0], nb.kids[0])) return c;
            return detail::cmp3(na.iexp, nb.iexp);
        }
        case NodeKind::RealPow: {
            if (int c = compare(na.kids[0], nb.kids[0])) return c;
            return detail::cmp3d(na.rexp, nb.rexp);
        }
        case NodeKind::Apply: {
            if (na.fun != nb.fun)
                return static_cast<int>(na.fun) < static_cast<int>(nb.fun) ? -1 : 1;
            return compare(na.kids[0], nb.kids[0]);
        }
        case NodeKind::Product:
        case NodeKind::Sum: {
            if (int c = detail::cmp3((long long)na.kids.size(), (long long)nb.kids.size()))
                return c;
            for (std::size_t i = 0; i < na.kids.size(); ++i)
                if (int c = compare(na.kids[i], nb.kids[i])) return c;
            return 0;
        }
    }
    return 0;
}

inline Expr Expr::sum(std::vector<Expr> kids) {
    std::vector<Expr> flat;
    for (auto& k : kids) {
        if (k.kind() == NodeKind::Sum)
            flat.insert(flat.end(), k.kids().begin(), k.kids().end());
        else
            flat.push_back(std::move(k));
    }
    bool have_const = false, const_exact = true;
    Rational cr(0);
    cplx cv(0.0, 0.0);
    std::vector<Expr> rest;
    for (auto& k : flat) {
        if (k.is_const()) {
            have_const = true;
            if (k.node().exact && const_exact) {
                cr += k.const_rational();
            } else {
                if (const_exact) { cv = to_cplx(cr); const_exact = false; }
                cv += k.const_value();
            }
        } else {
            rest.push_back(std::move(k));
        }
    }
    if (have_const) {
        Expr c = const_exact ? constant(cr) : constant(cv);
        if (!c.is_zero_const()) rest.push_back(std::move(c));
    }
    if (rest.empty()) return constant(Rational(0));
    if (rest.size() == 1) return rest[0];
    std::sort(rest.begin(), rest.end(),
              [](const Expr& x, const Expr& y) { return compare(x, y) < 0; });
    Node n;
    n.kind = NodeKind::Sum;
    n.kids = std::move(rest);
    return Expr(std::move(n));
}

inline Expr Expr::product(std::vector<Expr> kids) {
    std::vector<Expr> flat;
    for (auto& k : kids) {
        if (k.kind() == NodeKind::Product)
            flat.insert(flat.end(), k.kids().begin(), k.kids().end());
        else
            flat.push_back(std::move(k));
    }
    bool const_exact = true;
    Rational cr(1);
    cplx cv(1.0, 0.0);
    std::vector<std::pair<Expr, long long>> bases; // (base, int exponent)
    for (auto& k : flat) {
        if (k.is_const()) {
            if (k.node().exact && const_exact) {
                cr *= k.const_rational();
            } else {
                if (const_exact) { cv = to_cplx(cr); const_exact = false; }
                cv *= k.const_value();
            }
        } else if (k.kind() == NodeKind::IntPow) {
            bases.emplace_back(k.kids()[0], k.node().iexp);
        } else {
            bases.emplace_back(std::move(k), 1);
        }
    }
    bool coeff_zero = const_exact ? cr.is_zero() : (cv == cplx(0.0, 0.0));
    if (coeff_zero) return const_exact ? constant(Rational(0)) : constant(cplx(0.0, 0.0));

    std::sort(bases.begin(), bases.end(), [](const auto& x, const auto& y) {
        if (int c = compare(x.first, y.first)) return c < 0;
        return x.second < y.second;
    });
    std::vector<Expr> rest;
    for (std::size_t i = 0; i < bases.size();) {
        std::size_t j = i;
        long long e = 0;
        while (j < bases.size() && compare(bases[j].first, bases[i].first) == 0) {
            e += bases[j].second;
            ++j;
        }
        if (e != 0) rest.push_back(ipow(bases[i].first, e));
        i = j;
    }
    // merged exponents may fold to constants (e.g. u * u^-1)
    std::vector<Expr> rest2;
    for (auto& r : rest) {
        if (r.is_const()) {
            if (r.node().exact && const_exact) cr *= r.const_rational();
            else {
                if (const_exact) { cv = to_cplx(cr); const_exact = false; }
                cv *= r.const_value();
            }
        } else {
            rest2.push_back(std::move(r));
        }
    }
    coeff_zero = const_exact ? cr.is_zero() : (cv == cplx(0.0, 0.0));
    if (coeff_zero) return const_exact ? constant(Rational(0)) : constant(cplx(0.0, 0.0));
    bool coeff_one = const_exact ? cr.is_one() : (cv == cplx(1.0, 0.0));
    // scalar times a lone sum distributes, so both routes to c*(a+b) and
    // c*a + c*b normalize identically
    if (!coeff_one && rest2.size() == 1 && rest2[0].kind() == NodeKind::Sum) {
        Expr c = const_exact ? constant(cr) : constant(cv);
        std::vector<Expr> terms;
        for (const auto& kid : rest2[0].kids()) terms.push_back(product({c, kid}));
        return sum(std::move(terms));
    }
    std::sort(rest2.begin(), rest2.end(),
              [](const Expr& x, const Expr& y) { return compare(x, y) < 0; });
    std::vector<Expr> out;
    if (!coeff_one || rest2.empty())
        out.push_back(const_exact ? constant(cr) : constant(cv));
    out.insert(out.end(), rest2.begin(), rest2.end());
    if (out.size() == 1) return out[0];
    Node n;
    n.kind = NodeKind::Product;
    n.kids = std::move(out);
    return Expr(std::move(n));
}

inline Expr Expr::ipow(Expr base, long long e) {
    if (e == 0) return constant(Rational(1));
    if (e == 1) return base;
    if (base.is_const()) {
        if (base.node().exact) {
            if (base.const_rational().is_zero() && e < 0)
                throw std::domain_error("0 raised to a negative power");
            return constant(base.const_rational().pow(e));
        }
        cplx b = base.const_value();
        if (b == cplx(0.0, 0.0) && e < 0)
            throw std::domain_error("0 raised to a negative power");
        cplx acc(1.0, 0.0), p = b;
        long long k = e < 0 ? -e : e;
        while (k > 0) {
            if (k & 1) acc *= p;
            p *= p;
            k >>= 1;
        }
        return constant(e < 0 ? cplx(1.0, 0.0) / acc : acc);
    }
    if (base.kind() == NodeKind::IntPow)
        return ipow(base.kids()[0], base.node().iexp * e);
    if (base.kind() == NodeKind::RealPow)
        return rpow(base.kids()[0], base.node().rexp * double(e));
    if (base.kind() == NodeKind::Product) {
        std::vector<Expr> mapped;
        for (const auto& k : base.kids()) mapped.push_back(ipow(k, e));
        return product(std::move(mapped));
    }
    Node n;
    n.kind = NodeKind::IntPow;
    n.iexp = e;
    n.kids.push_back(std::move(base));
    return Expr(std::move(n));
}

inline Expr Expr::rpow(Expr base, double e) {
    if (e == std::floor(e) && std::abs(e) < double(1LL << 62))
        return ipow(std::move(base), static_cast<long long>(e));
    if (base.is_const()) {
        if (base.node().exact) {
            if (base.const_rational().is_negative())
                throw std::domain_error("non-integer exponent on a negative-base constant");
            return constant(cplx(std::pow(base.const_rational().to_double(), e), 0.0));
        }
        cplx b = base.const_value();
        if (b.imag() == 0.0 && b.real() < 0.0)
            throw std::domain_error("non-integer exponent on a negative-base constant");
        return constant(std::pow(b, cplx(e, 0.0)));
    }
    Node n;
    n.kind = NodeKind::RealPow;
    n.rexp = e;
    n.kids.push_back(std::move(base));
    return Expr(std::move(n));
}

/// Rebuilds the tree through the normalizing factories. Idempotent.
inline Expr normalize(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Const:
        case NodeKind::Var:
            return e;
        case NodeKind::Sum: {
            std::vector<Expr> ks;
            for (const auto& k : e.kids()) ks.push_back(normalize(k));
            return Expr::sum(std::move(ks));
        }
        case NodeKind::Product: {
            std::vector<Expr> ks;
            for (const auto& k : e.kids()) ks.push_back(normalize(k));
            return Expr::product(std::move(ks));
        }
        case NodeKind::IntPow:
            return Expr::ipow(normalize(e.kids()[0]), e.node().iexp);
        case NodeKind::RealPow:
            return Expr::rpow(normalize(e.kids()[0]), e.node().rexp);
        case NodeKind::Apply:
            return Expr::apply(e.node().fun, normalize(e.kids()[0]));
    }
    return e;
}

// ---------------------------------------------------------------------------
// printing

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos &&
        s.find_first_of("iInN") == std::string::npos)
        s += ".0";
    return s;
}

inline std::string fmt_cplx_const(cplx v) {
    if (v.imag() == 0.0) return fmt_double(v.real());
    std::string im = fmt_double(v.imag()) + "*i";
    if (v.real() == 0.0) return im;
    return "(" + fmt_double(v.real()) + (v.imag() < 0 ? "-" : "+") +
           (v.imag() < 0 ? fmt_double(-v.imag()) + "*i" : im) + ")";
}

// precedence levels: sum 0, product 1, power 2, atom 3
inline int precedence(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Sum: return 0;
        case NodeKind::Product: return 1;
        case NodeKind::IntPow:
        case NodeKind::RealPow: return 2;
        default: return 3;
    }
}

struct PrintOpts {
    // appended to every variable name (used to render atoms at subscript 0)
    std::string var_suffix;
};

inline std::string print_impl(const Expr& e, const PrintOpts& o);

inline std::string wrap(const Expr& e, int min_prec, const PrintOpts& o) {
    std::string s = print_impl(e, o);
    bool need = precedence(e) < min_prec;
    // a bare negative constant also needs protection inside products/powers
    if (!need && e.is_const()) {
        if (e.node().exact ? e.const_rational().is_negative()
                           : (s.size() && s[0] == '-'))
            need = min_prec >= 2;
    }
    return need ? "(" + s + ")" : s;
}

inline std::string print_impl(const Expr& e, const PrintOpts& o) {
    switch (e.kind()) {
        case NodeKind::Const:
            return e.node().exact ? e.const_rational().str() : fmt_cplx_const(e.node().val);
        case NodeKind::Var: {
            std::string nm = e.node().name + o.var_suffix;
            return e.node().conj ? "conj(" + nm + ")" : nm;
        }
        case NodeKind::Sum: {
            std::string s;
            bool first = true;
            for (const auto& k : e.kids()) {
                std::string ks = print_impl(k, o);
                if (first) {
                    s = ks;
                    first = false;
                } else if (!ks.empty() && ks[0] == '-') {
                    s += " - " + ks.substr(1);
                } else {
                    s += " + " + ks;
                }
            }
            return s;
        }
        case NodeKind::Product: {
            const auto& ks = e.kids();
            std::string prefix;
            std::vector<std::string> parts;
            std::size_t i = 0;
            if (ks[0].is_exact_const() && ks.size() > 1) {
                Rational c = ks[0].const_rational();
                if (c == Rational(-1)) {
                    prefix = "-";
                } else if (c.is_negative()) {
                    prefix = "-";
                    parts.push_back((-c).str());
                } else {
                    parts.push_back(c.str());
                }
                i = 1;
            }
            for (; i < ks.size(); ++i) parts.push_back(wrap(ks[i], 2, o));
            std::string s = prefix;
            for (std::size_t j = 0; j < parts.size(); ++j) {
                if (j) s += "*";
                s += parts[j];
            }
            return s;
        }
        case NodeKind::IntPow:
            return wrap(e.kids()[0], 3, o) + "^" + std::to_string(e.node().iexp);
        case NodeKind::RealPow:
            return wrap(e.kids()[0], 3, o) + "^" + fmt_double(e.node().rexp);
        case NodeKind::Apply:
            return std::string(fun_name(e.node().fun)) + "(" + print_impl(e.kids()[0], o) + ")";
    }
    return "?";
}

} // namespace detail

/// Canonical form; parse(print(e)) == e for normalized e.
inline std::string print(const Expr& e) { return detail::print_impl(e, {}); }

/// Same grammar with every variable shown at subscript 0 ("u" -> "u0").
inline std::string print_at0(const Expr& e) { return detail::print_impl(e, {"0"}); }

// ---------------------------------------------------------------------------
// parsing

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Expr run() {
        try {
            Expr e = parse_sum();
            skip_ws();
            if (pos_ != s_.size()) fail("unexpected trailing input");
            return e;
        } catch (const rational_overflow_error& e) {
            throw parse_error(std::string("constant folding overflowed: ") + e.what(), pos_);
        } catch (const std::domain_error& e) {
            // 0^-n, ln-style folds, non-integer power of a negative base
            throw parse_error(e.what(), pos_);
        }
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum() {
        Expr acc = parse_term();
        std::vector<Expr> terms{acc};
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                terms.push_back(parse_term());
            } else if (c == '-') {
                ++pos_;
                terms.push_back(Expr::neg(parse_term()));
            } else {
                break;
            }
        }
        return terms.size() == 1 ? terms[0] : Expr::sum(std::move(terms));
    }

    Expr parse_term() {
        // collect every factor and normalize once; pairwise folding would
        // associate scalar-sum distribution differently than the printer
        std::vector<Expr> factors{parse_unary()};
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                factors.push_back(parse_unary());
            } else if (c == '/') {
                ++pos_;
                factors.push_back(Expr::ipow(parse_unary(), -1));
            } else {
                break;
            }
        }
        return factors.size() == 1 ? factors[0] : Expr::product(std::move(factors));
    }

    Expr parse_unary() {
        if (eat('-')) return Expr::neg(parse_unary());
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (peek() == '^') {
            ++pos_;
            std::size_t at = pos_;
            Expr ex = parse_unary(); // right-associative, signed exponents
            if (!ex.is_const()) throw parse_error("exponent must be a numeric constant", at);
            if (ex.node().exact) {
                const Rational& r = ex.const_rational();
                if (r.is_integer()) return Expr::ipow(std::move(base), r.num());
                return Expr::rpow(std::move(base), r.to_double());
            }
            cplx v = ex.const_value();
            if (v.imag() != 0.0) throw parse_error("exponent must be real", at);
            return Expr::rpow(std::move(base), v.real());
        }
        return base;
    }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        std::size_t start = pos_;
        bool is_float = false;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            is_float = true;
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                is_float = true;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // 'e'/'E' belongs to an identifier, not this literal
            }
        }
        std::string tok(s_.substr(start, pos_ - start));
        if (!is_float) {
            try {
                return Expr::constant(Rational(std::stoll(tok)));
            } catch (const std::out_of_range&) {
                throw parse_error("integer literal out of range", start);
            }
        }
        try {
            return Expr::constant(cplx(std::stod(tok), 0.0)); // floating literal, flagged inexact
        } catch (const std::invalid_argument&) {
            throw parse_error("malformed number '" + tok + "'", start);
        } catch (const std::out_of_range&) {
            throw parse_error("number literal out of range", start);
        }
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string id(s_.substr(start, pos_ - start));
        if (peek() == '(') {
            if (id == "conj") {
                ++pos_;
                skip_ws();
                std::size_t vstart = pos_;
                while (pos_ < s_.size() &&
                       (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                    ++pos_;
                std::string vn(s_.substr(vstart, pos_ - vstart));
                if (vn.empty()) throw parse_error("conj() takes a variable name", vstart);
                if (!eat(')')) fail("expected ')' after conj argument");
                return Expr::var(vn, true);
            }
            static const std::pair<const char*, Fun> funs[] = {
                {"exp", Fun::Exp},   {"ln", Fun::Ln},   {"sin", Fun::Sin},
                {"cos", Fun::Cos},   {"sinh", Fun::Sinh}, {"cosh", Fun::Cosh}};
            for (const auto& [nm, f] : funs) {
                if (id == nm) {
                    ++pos_;
                    Expr a = parse_sum();
                    if (!eat(')')) fail("expected ')'");
                    return Expr::apply(f, std::move(a));
                }
            }
            throw parse_error("unknown function '" + id + "'", start);
        }
        if (id == "i") return Expr::constant(cplx(0.0, 1.0));
        return Expr::var(id);
    }
};

} // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).run(); }

// ---------------------------------------------------------------------------
// evaluation

/// Variable bindings. A conjugated variable without an explicit binding
/// defaults to the complex conjugate of its base binding.
class Assignment {
public:
    void set(const std::string& name, cplx value, bool conj = false) {
        for (auto& e : entries_)
            if (e.name == name && e.conj == conj) {
                e.value = value;
                return;
            }
        entries_.push_back({name, conj, value});
    }

    std::optional<cplx> find(const std::string& name, bool conj) const {
        for (const auto& e : entries_)
            if (e.name == name && e.conj == conj) return e.value;
        if (conj) {
            for (const auto& e : entries_)
                if (e.name == name && !e.conj) return std::conj(e.value);
        }
        return std::nullopt;
    }

private:
    struct Entry {
        std::string name;
        bool conj;
        cplx value;
    };
    std::vector<Entry> entries_;
};

namespace detail {
inline cplx cpow_int(cplx b, long long e) {
    bool inv = e < 0;
    unsigned long long k = inv ? -(unsigned long long)e : (unsigned long long)e;
    cplx acc(1.0, 0.0);
    while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return inv ? cplx(1.0, 0.0) / acc : acc;
}
} // namespace detail

inline cplx evaluate(const Expr& e, const Assignment& a) {
    switch (e.kind()) {
        case NodeKind::Const:
            return e.const_value();
        case NodeKind::Var: {
            auto v = a.find(e.node().name, e.node().conj);
            if (!v) throw eval_error("unassigned variable", print(e));
            return *v;
        }
        case NodeKind::Sum: {
            cplx s(0.0, 0.0);
            for (const auto& k : e.kids()) s += evaluate(k, a);
            return s;
        }
        case NodeKind::Product: {
            cplx p(1.0, 0.0);
            for (const auto& k : e.kids()) p *= evaluate(k, a);
            return p;
        }
        case NodeKind::IntPow: {
            cplx b = evaluate(e.kids()[0], a);
            if (b == cplx(0.0, 0.0) && e.node().iexp < 0)
                throw eval_error("division by zero", print(e));
            return detail::cpow_int(b, e.node().iexp);
        }
        case NodeKind::RealPow: {
            cplx b = evaluate(e.kids()[0], a);
            if (b == cplx(0.0, 0.0) && e.node().rexp < 0)
                throw eval_error("division by zero", print(e));
            return std::pow(b, cplx(e.node().rexp, 0.0));
        }
        case NodeKind::Apply: {
            cplx x = evaluate(e.kids()[0], a);
            switch (e.node().fun) {
                case Fun::Exp: return std::exp(x);
                case Fun::Ln:
                    if (x == cplx(0.0, 0.0)) throw eval_error("ln of zero", print(e));
                    return std::log(x); // principal branch
                case Fun::Sin: return std::sin(x);
                case Fun::Cos: return std::cos(x);
                case Fun::Sinh: return std::sinh(x);
                case Fun::Cosh: return std::cosh(x);
            }
            return {};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// differentiation

/// Partial derivative treating every other (name, conj) atom as constant.
/// In particular conj(x) is independent of x.
inline Expr differentiate_wrt(const Expr& e, const std::string& name, bool conj) {
    switch (e.kind()) {
        case NodeKind::Const:
            return Expr::constant(Rational(0));
        case NodeKind::Var:
            return (e.node().name == name && e.node().conj == conj)
                       ? Expr::constant(Rational(1))
                       : Expr::constant(Rational(0));
        case NodeKind::Sum: {
            std::vector<Expr> ds;
            for (const auto& k : e.kids()) ds.push_back(differentiate_wrt(k, name, conj));
            return Expr::sum(std::move(ds));
        }
        case NodeKind::Product: {
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < e.kids().size(); ++i) {
                std::vector<Expr> fs;
                for (std::size_t j = 0; j < e.kids().size(); ++j)
                    fs.push_back(i == j ? differentiate_wrt(e.kids()[j], name, conj)
                                        : e.kids()[j]);
                terms.push_back(Expr::product(std::move(fs)));
            }
            return Expr::sum(std::move(terms));
        }
        case NodeKind::IntPow: {
            const Expr& b = e.kids()[0];
            return Expr::product({Expr::constant(Rational(e.node().iexp)),
                                  Expr::ipow(b, e.node().iexp - 1),
                                  differentiate_wrt(b, name, conj)});
        }
        case NodeKind::RealPow: {
            const Expr& b = e.kids()[0];
            return Expr::product({Expr::constant(cplx(e.node().rexp, 0.0)),
                                  Expr::rpow(b, e.node().rexp - 1.0),
                                  differentiate_wrt(b, name, conj)});
        }
        case NodeKind::Apply: {
            const Expr& x = e.kids()[0];
            Expr dx = differentiate_wrt(x, name, conj);
            Expr outer;
            switch (e.node().fun) {
                case Fun::Exp: outer = Expr::apply(Fun::Exp, x); break;
                case Fun::Ln: outer = Expr::ipow(x, -1); break;
                case Fun::Sin: outer = Expr::apply(Fun::Cos, x); break;
                case Fun::Cos:
                    outer = Expr::neg(Expr::apply(Fun::Sin, x));
                    break;
                case Fun::Sinh: outer = Expr::apply(Fun::Cosh, x); break;
                case Fun::Cosh: outer = Expr::apply(Fun::Sinh, x); break;
            }
            return Expr::product({std::move(outer), std::move(dx)});
        }
    }
    return Expr::constant(Rational(0));
}

inline Expr differentiate(const Expr& e, const std::string& var) {
    return differentiate_wrt(e, var, false);
}

// ---------------------------------------------------------------------------
// structural queries and rewrites

inline Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
    switch (e.kind()) {
        case NodeKind::Const:
            return e;
        case NodeKind::Var:
            if (e.node().name == name) {
                if (e.node().conj)
                    throw std::invalid_argument(
                        "substitute: conjugated occurrence of '" + name + "'");
                return replacement;
            }
            return e;
        case NodeKind::Sum: {
            std::vector<Expr> ks;
            for (const auto& k : e.kids()) ks.push_back(substitute(k, name, replacement));
            return Expr::sum(std::move(ks));
        }
        case NodeKind::Product: {
            std::vector<Expr> ks;
            for (const auto& k : e.kids()) ks.push_back(substitute(k, name, replacement));
            return Expr::product(std::move(ks));
        }
        case NodeKind::IntPow:
            return Expr::ipow(substitute(e.kids()[0], name, replacement), e.node().iexp);
        case NodeKind::RealPow:
            return Expr::rpow(substitute(e.kids()[0], name, replacement), e.node().rexp);
        case NodeKind::Apply:
            return Expr::apply(e.node().fun, substitute(e.kids()[0], name, replacement));
    }
    return e;
}

/// Free (name, conjugated) pairs. A conjugated occurrence registers its base
/// name as well.
inline std::set<std::pair<std::string, bool>> free_variables(const Expr& e) {
    std::set<std::pair<std::string, bool>> out;
    std::function<void(const Expr&)> walk = [&](const Expr& x) {
        if (x.kind() == NodeKind::Var) {
            out.insert({x.node().name, x.node().conj});
            if (x.node().conj) out.insert({x.node().name, false});
        }
        for (const auto& k : x.kids()) walk(k);
    };
    walk(e);
    return out;
}

inline bool contains_conjugate(const Expr& e) {
    if (e.kind() == NodeKind::Var) return e.node().conj;
    for (const auto& k : e.kids())
        if (contains_conjugate(k)) return true;
    return false;
}

inline bool has_inexact_constant(const Expr& e) {
    if (e.is_const()) return !e.node().exact;
    for (const auto& k : e.kids())
        if (has_inexact_constant(k)) return true;
    return false;
}

/// Total degree when the tree is polynomial in its variables (conjugated
/// variables count like ordinary ones), nullopt otherwise.
inline std::optional<long long> polynomial_degree(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Const:
            return 0;
        case NodeKind::Var:
            return 1;
        case NodeKind::Sum: {
            long long d = 0;
            for (const auto& k : e.kids()) {
                auto kd = polynomial_degree(k);
                if (!kd) return std::nullopt;
                d = std::max(d, *kd);
            }
            return d;
        }
        case NodeKind::Product: {
            long long d = 0;
            for (const auto& k : e.kids()) {
                auto kd = polynomial_degree(k);
                if (!kd) return std::nullopt;
                d += *kd;
            }
            return d;
        }
        case NodeKind::IntPow: {
            if (e.node().iexp < 0) return std::nullopt;
            auto bd = polynomial_degree(e.kids()[0]);
            if (!bd) return std::nullopt;
            return *bd * e.node().iexp;
        }
        default:
            return std::nullopt;
    }
}

/// True when sampling must keep the argument away from branch points
/// (logarithms, negative or fractional powers).
inline bool needs_domain_guard(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Apply:
            if (e.node().fun == Fun::Ln) return true;
            break;
        case NodeKind::IntPow:
            if (e.node().iexp < 0) return true;
            break;
        case NodeKind::RealPow:
            return true;
        default:
            break;
    }
    for (const auto& k : e.kids())
        if (needs_domain_guard(k)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// compiled evaluation (postfix program over a complex stack)

class CompiledExpr {
public:
    cplx eval(std::span<const cplx> slots) const {
        stack_.clear();
        for (const auto& op : ops_) {
            switch (op.k) {
                case OpK::Push:
                    stack_.push_back(op.c);
                    break;
                case OpK::Load:
                    stack_.push_back(slots[op.a]);
                    break;
                case OpK::Add: {
                    cplx s(0.0, 0.0);
                    for (int i = 0; i < op.a; ++i) {
                        s += stack_.back();
                        stack_.pop_back();
                    }
                    stack_.push_back(s);
                    break;
                }
                case OpK::Mul: {
                    cplx p(1.0, 0.0);
                    for (int i = 0; i < op.a; ++i) {
                        p *= stack_.back();
                        stack_.pop_back();
                    }
                    stack_.push_back(p);
                    break;
                }
                case OpK::IPow:
                    stack_.back() = detail::cpow_int(stack_.back(), op.e);
                    break;
                case OpK::RPow:
                    stack_.back() = std::pow(stack_.back(), cplx(op.x, 0.0));
                    break;
                case OpK::Fn:
                    switch (op.f) {
                        case Fun::Exp: stack_.back() = std::exp(stack_.back()); break;
                        case Fun::Ln: stack_.back() = std::log(stack_.back()); break;
                        case Fun::Sin: stack_.back() = std::sin(stack_.back()); break;
                        case Fun::Cos: stack_.back() = std::cos(stack_.back()); break;
                        case Fun::Sinh: stack_.back() = std::sinh(stack_.back()); break;
                        case Fun::Cosh: stack_.back() = std::cosh(stack_.back()); break;
                    }
                    break;
            }
        }
        return stack_.back();
    }

    /// slots[i] supplies the value for the i-th (name, conj) pair.
    static CompiledExpr compile(const Expr& e,
                                std::span<const std::pair<std::string, bool>> slots) {
        CompiledExpr c;
        c.emit(e, slots);
        return c;
    }

private:
    enum class OpK { Push, Load, Add, Mul, IPow, RPow, Fn };
    struct Op {
        OpK k;
        int a = 0;
        long long e = 0;
        double x = 0.0;
        Fun f = Fun::Exp;
        cplx c{0.0, 0.0};
    };
    std::vector<Op> ops_;
    mutable std::vector<cplx> stack_;

    void emit(const Expr& e, std::span<const std::pair<std::string, bool>> slots) {
        switch (e.kind()) {
            case NodeKind::Const:
                ops_.push_back({OpK::Push, 0, 0, 0.0, Fun::Exp, e.const_value()});
                return;
            case NodeKind::Var: {
                for (std::size_t i = 0; i < slots.size(); ++i)
                    if (slots[i].first == e.node().name && slots[i].second == e.node().conj) {
                        ops_.push_back({OpK::Load, int(i)});
                        return;
                    }
                throw std::invalid_argument("compile: no slot for variable " + print(e));
            }
            case NodeKind::Sum:
                for (const auto& k : e.kids()) emit(k, slots);
                ops_.push_back({OpK::Add, int(e.kids().size())});
                return;
            case NodeKind::Product:
                for (const auto& k : e.kids()) emit(k, slots);
                ops_.push_back({OpK::Mul, int(e.kids().size())});
                return;
            case NodeKind::IntPow:
                emit(e.kids()[0], slots);
                ops_.push_back({OpK::IPow, 0, e.node().iexp});
                return;
            case NodeKind::RealPow:
                emit(e.kids()[0], slots);
                ops_.push_back({OpK::RPow, 0, 0, e.node().rexp});
                return;
            case NodeKind::Apply:
                emit(e.kids()[0], slots);
                ops_.push_back({OpK::Fn, 0, 0, 0.0, e.node().fun});
                return;
        }
    }
};

} // namespace adomian
