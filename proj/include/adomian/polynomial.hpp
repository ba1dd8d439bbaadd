#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace adomian {

struct inexact_coefficient_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct poly_not_invertible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct opaque_factor_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct missing_component_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One solution component u_k (or its conjugate) of a named sequence.
struct CompKey {
    std::string seq = "u";
    bool conj = false;
    int index = 0;
};

inline int compare(const CompKey& a, const CompKey& b) {
    if (int c = a.seq.compare(b.seq)) return c < 0 ? -1 : 1;
    if (a.conj != b.conj) return a.conj ? 1 : -1;
    return a.index < b.index ? -1 : (a.index > b.index ? 1 : 0);
}

/// Non-monomial factor of a term: either the opaque k-th derivative of the
/// nonlinearity at u_0, or a concrete expression read at subscript 0.
struct FactorAtom {
    bool opaque = false;
    std::string label = "N"; // opaque only
    int order = 0;           // opaque only
    Expr expr;               // substituted only

    static FactorAtom opaque_deriv(int k, std::string lbl = "N") {
        FactorAtom f;
        f.opaque = true;
        f.order = k;
        f.label = std::move(lbl);
        return f;
    }
    static FactorAtom atom(Expr e) {
        FactorAtom f;
        f.expr = std::move(e);
        return f;
    }
};

inline int compare(const FactorAtom& a, const FactorAtom& b) {
    if (a.opaque != b.opaque) return a.opaque ? -1 : 1;
    if (a.opaque) {
        if (int c = a.label.compare(b.label)) return c < 0 ? -1 : 1;
        return a.order < b.order ? -1 : (a.order > b.order ? 1 : 0);
    }
    return compare(a.expr, b.expr);
}

using Monomial = std::vector<std::pair<CompKey, int>>;
using FactorMap = std::vector<std::pair<FactorAtom, int>>;

struct PolyTerm {
    Rational coeff;
    Monomial mono;      // sorted by key, exponents nonzero (may be negative)
    FactorMap factors;  // sorted by atom, exponents nonzero (may be negative)
};

namespace detail {

template <class V, class Cmp>
void sort_and_merge_exps(std::vector<std::pair<V, int>>& v, Cmp cmp) {
    std::sort(v.begin(), v.end(),
              [&](const auto& x, const auto& y) { return cmp(x.first, y.first) < 0; });
    std::vector<std::pair<V, int>> out;
    for (auto& p : v) {
        if (!out.empty() && cmp(out.back().first, p.first) == 0)
            out.back().second += p.second;
        else
            out.push_back(std::move(p));
    }
    std::erase_if(out, [](const auto& p) { return p.second == 0; });
    v = std::move(out);
}

inline int cmp_mono(const Monomial& a, const Monomial& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a[i].first, b[i].first)) return c;
        if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
    }
    return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

inline int cmp_factors(const FactorMap& a, const FactorMap& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(a[i].first, b[i].first)) return c;
        if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
    }
    return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

inline int cmp_term_key(const PolyTerm& a, const PolyTerm& b) {
    if (int c = cmp_mono(a.mono, b.mono)) return c;
    return cmp_factors(a.factors, b.factors);
}

} // namespace detail

/// Adomian polynomial in canonical form: sorted terms, like terms merged,
/// no zero coefficients. Coefficients are exact rationals.
class AdomianPoly {
public:
    AdomianPoly() = default;

    static AdomianPoly zero() { return {}; }
    static AdomianPoly constant(Rational r) {
        AdomianPoly p;
        if (!r.is_zero()) p.terms_.push_back({r, {}, {}});
        return p;
    }
    static AdomianPoly component(CompKey key, int exp = 1) {
        AdomianPoly p;
        p.terms_.push_back({Rational(1), {{std::move(key), exp}}, {}});
        return p;
    }
    static AdomianPoly opaque_factor(int order, std::string label = "N") {
        AdomianPoly p;
        p.terms_.push_back(
            {Rational(1), {}, {{FactorAtom::opaque_deriv(order, std::move(label)), 1}}});
        return p;
    }
    static AdomianPoly from_terms(std::vector<PolyTerm> terms) {
        AdomianPoly p;
        p.terms_ = std::move(terms);
        p.canonicalize();
        return p;
    }

    const std::vector<PolyTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool operator==(const AdomianPoly& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].coeff != o.terms_[i].coeff) return false;
            if (detail::cmp_term_key(terms_[i], o.terms_[i]) != 0) return false;
        }
        return true;
    }
    bool operator!=(const AdomianPoly& o) const { return !(*this == o); }

    AdomianPoly operator+(const AdomianPoly& o) const {
        AdomianPoly out;
        out.terms_ = terms_;
        out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
        out.canonicalize();
        return out;
    }
    AdomianPoly operator-(const AdomianPoly& o) const {
        return *this + o.scale(Rational(-1));
    }
    AdomianPoly operator*(const AdomianPoly& o) const {
        AdomianPoly out;
        out.terms_.reserve(terms_.size() * o.terms_.size());
        for (const auto& a : terms_)
            for (const auto& b : o.terms_) {
                PolyTerm t;
                t.coeff = a.coeff * b.coeff;
                t.mono = a.mono;
                t.mono.insert(t.mono.end(), b.mono.begin(), b.mono.end());
                t.factors = a.factors;
                t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
                out.terms_.push_back(std::move(t));
            }
        out.canonicalize();
        return out;
    }

    AdomianPoly scale(const Rational& r) const {
        if (r.is_zero()) return {};
        AdomianPoly out = *this;
        for (auto& t : out.terms_) t.coeff *= r;
        return out;
    }

    AdomianPoly pow(int e) const {
        if (e < 0) return inverse_single_term().pow(-e);
        AdomianPoly acc = constant(Rational(1));
        AdomianPoly base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return acc;
    }

    bool is_single_term() const { return terms_.size() == 1; }

    /// Reciprocal of a one-term polynomial (exponents negate).
    AdomianPoly inverse_single_term() const {
        if (terms_.size() != 1)
            throw poly_not_invertible_error(
                "polynomial inverse requires a single-term denominator, got " + str());
        PolyTerm t = terms_[0];
        t.coeff = Rational(1) / t.coeff;
        for (auto& m : t.mono) m.second = -m.second;
        for (auto& f : t.factors) f.second = -f.second;
        AdomianPoly out;
        out.terms_.push_back(std::move(t));
        return out;
    }

    /// Weighted subscript sum of one term: sum of index*exponent over all
    /// components, conjugated ones included.
    static long long term_weight(const PolyTerm& t) {
        long long w = 0;
        for (const auto& [k, e] : t.mono) w += (long long)k.index * e;
        return w;
    }

    /// Every term satisfies the sum-of-subscripts rule for order n.
    bool is_homogeneous(int n) const {
        for (const auto& t : terms_)
            if (term_weight(t) != n) return false;
        return true;
    }

    bool has_opaque() const {
        for (const auto& t : terms_)
            for (const auto& [f, e] : t.factors)
                if (f.opaque) return true;
        return false;
    }

    int max_component_index() const {
        int m = 0;
        for (const auto& t : terms_)
            for (const auto& [k, e] : t.mono) m = std::max(m, k.index);
        return m;
    }

    /// Numeric value with components supplied by `lookup`; factor expressions
    /// are evaluated at the subscript-0 values of their variables.
    cplx evaluate(const std::function<cplx(const CompKey&)>& lookup) const {
        cplx total(0.0, 0.0);
        for (const auto& t : terms_) {
            cplx v(t.coeff.to_double(), 0.0);
            for (const auto& [key, e] : t.mono) v *= detail::cpow_int(lookup(key), e);
            for (const auto& [f, e] : t.factors) {
                if (f.opaque)
                    throw opaque_factor_error(
                        "cannot evaluate opaque derivative factor " + f.label + "^(" +
                        std::to_string(f.order) + ")(u0); substitute a nonlinearity first");
                Assignment a;
                for (const auto& [nm, cj] : free_variables(f.expr))
                    a.set(nm, lookup(CompKey{nm, cj, 0}), cj);
                v *= detail::cpow_int(::adomian::evaluate(f.expr, a), e);
            }
            total += v;
        }
        return total;
    }

    /// Exact expression form; defined only for order-0 polynomials (every
    /// component at subscript 0) with no opaque factors.
    Expr to_expr() const {
        std::vector<Expr> terms;
        for (const auto& t : terms_) {
            std::vector<Expr> fs;
            fs.push_back(Expr::constant(t.coeff));
            for (const auto& [k, e] : t.mono) {
                if (k.index != 0)
                    throw std::invalid_argument(
                        "to_expr: component with nonzero subscript " + component_str(k));
                fs.push_back(Expr::ipow(Expr::var(k.seq, k.conj), e));
            }
            for (const auto& [f, e] : t.factors) {
                if (f.opaque)
                    throw opaque_factor_error("to_expr: opaque factor present");
                fs.push_back(Expr::ipow(f.expr, e));
            }
            terms.push_back(Expr::product(std::move(fs)));
        }
        return Expr::sum(std::move(terms));
    }

    static std::string component_str(const CompKey& k) {
        // digit-free sequence names concatenate (u0, w2); others separate
        // with an underscore (u1_2, du1dx_0)
        bool has_digit = false;
        for (char c : k.seq)
            if (c >= '0' && c <= '9') has_digit = true;
        std::string base = has_digit ? k.seq + "_" + std::to_string(k.index)
                                     : k.seq + std::to_string(k.index);
        return k.conj ? "conj(" + base + ")" : base;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& t : terms_) {
            Rational c = t.coeff;
            if (first) {
                if (c.is_negative()) { s += "-"; c = -c; }
            } else {
                s += c.is_negative() ? " - " : " + ";
                if (c.is_negative()) c = -c;
            }
            std::vector<std::string> pieces;
            if (!c.is_one() || (t.mono.empty() && t.factors.empty()))
                pieces.push_back(c.str());
            for (const auto& [k, e] : t.mono) {
                std::string p = component_str(k);
                if (e != 1) p += "^" + std::to_string(e);
                pieces.push_back(p);
            }
            for (const auto& [f, e] : t.factors) {
                std::string p;
                if (f.opaque) {
                    p = f.order == 0
                            ? f.label + "(u0)"
                            : f.label + "^(" + std::to_string(f.order) + ")(u0)";
                } else {
                    p = print_at0(f.expr);
                }
                if (e != 1) {
                    bool atomic = f.opaque || f.expr.kind() == NodeKind::Apply;
                    p = (atomic ? p : "(" + p + ")") + "^" + std::to_string(e);
                }
                pieces.push_back(p);
            }
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                if (i) s += "*";
                s += pieces[i];
            }
            first = false;
        }
        return s;
    }

private:
    std::vector<PolyTerm> terms_;

    void canonicalize() {
        for (auto& t : terms_) {
            detail::sort_and_merge_exps(t.mono,
                                        [](const CompKey& a, const CompKey& b) { return compare(a, b); });
            detail::sort_and_merge_exps(
                t.factors, [](const FactorAtom& a, const FactorAtom& b) { return compare(a, b); });
        }
        std::sort(terms_.begin(), terms_.end(), [](const PolyTerm& a, const PolyTerm& b) {
            return detail::cmp_term_key(a, b) < 0;
        });
        std::vector<PolyTerm> out;
        for (auto& t : terms_) {
            if (!out.empty() && detail::cmp_term_key(out.back(), t) == 0)
                out.back().coeff += t.coeff;
            else
                out.push_back(std::move(t));
        }
        std::erase_if(out, [](const PolyTerm& t) { return t.coeff.is_zero(); });
        terms_ = std::move(out);
    }
};

/// Expand an expression into canonical polynomial form, reading every
/// variable at subscript 0. Requires exact rational constants.
inline AdomianPoly expand_expr(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Const:
            if (!e.node().exact)
                throw inexact_coefficient_error(
                    "symbolic expansion requires exact rational constants, got " + print(e));
            return AdomianPoly::constant(e.const_rational());
        case NodeKind::Var:
            return AdomianPoly::component(CompKey{e.node().name, e.node().conj, 0});
        case NodeKind::Sum: {
            AdomianPoly p;
            for (const auto& k : e.kids()) p = p + expand_expr(k);
            return p;
        }
        case NodeKind::Product: {
            AdomianPoly p = AdomianPoly::constant(Rational(1));
            for (const auto& k : e.kids()) p = p * expand_expr(k);
            return p;
        }
        case NodeKind::IntPow: {
            long long ie = e.node().iexp;
            AdomianPoly base = expand_expr(e.kids()[0]);
            if (ie >= 0) return base.pow(int(ie));
            if (base.is_single_term()) return base.inverse_single_term().pow(int(-ie));
            // non-invertible denominator stays atomic
            AdomianPoly p;
            p = AdomianPoly::from_terms(
                {{Rational(1), {}, {{FactorAtom::atom(e.kids()[0]), int(ie)}}}});
            return p;
        }
        case NodeKind::RealPow:
        case NodeKind::Apply:
            return AdomianPoly::from_terms({{Rational(1), {}, {{FactorAtom::atom(e), 1}}}});
    }
    return AdomianPoly::zero();
}

template <>
struct CoeffOps<AdomianPoly> {
    static AdomianPoly zero() { return AdomianPoly::zero(); }
    static bool is_zero(const AdomianPoly& p) { return p.is_zero(); }
    static AdomianPoly inverse(const AdomianPoly& p) { return p.inverse_single_term(); }
    static AdomianPoly scale(const AdomianPoly& p, const Rational& r) { return p.scale(r); }
};

} // namespace adomian
