#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "combinatorics.hpp"
#include "components.hpp"
#include "expr.hpp"
#include "polynomial.hpp"
#include "series.hpp"

namespace adomian {

struct unsupported_nonlinearity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GenMode { Opaque, Substituted };

/// Rach formula in opaque form: A_n as a sum over the integer partitions of
/// n, one term per partition, with the derivative order left symbolic.
inline AdomianPoly gen_rach_opaque(int n, const std::string& seq = "u",
                                   const std::string& label = "N") {
    if (n < 0) throw std::invalid_argument("gen_rach_opaque: n < 0");
    if (n == 0) return AdomianPoly::opaque_factor(0, label);
    std::vector<PolyTerm> terms;
    for (const auto& part : enumerate_partitions(n)) {
        PolyTerm t;
        t.coeff = Rational(1);
        for (std::size_t j = 0; j < part.mult.size(); ++j) {
            int kj = part.mult[j];
            if (kj == 0) continue;
            t.coeff /= Rational::factorial(kj);
            t.mono.push_back({CompKey{seq, false, int(j + 1)}, kj});
        }
        t.factors.push_back({FactorAtom::opaque_deriv(part.order(), label), 1});
        terms.push_back(std::move(t));
    }
    return AdomianPoly::from_terms(std::move(terms));
}

/// Replace each opaque derivative factor by the corresponding symbolic
/// derivative of N, expanded at subscript 0.
inline AdomianPoly substitute_concrete(const AdomianPoly& a, const Expr& N,
                                       const std::string& var = "u") {
    if (contains_conjugate(N))
        throw unsupported_nonlinearity_error(
            "substitute_concrete: conjugated variables are not supported here");
    int max_order = 0;
    for (const auto& t : a.terms())
        for (const auto& [f, e] : t.factors) {
            if (!f.opaque)
                throw std::invalid_argument(
                    "substitute_concrete: polynomial already carries substituted factors");
            max_order = std::max(max_order, f.order);
        }
    std::vector<AdomianPoly> derivs;
    Expr d = N;
    for (int k = 0; k <= max_order; ++k) {
        derivs.push_back(expand_expr(d));
        d = differentiate(d, var);
    }
    AdomianPoly out;
    for (const auto& t : a.terms()) {
        AdomianPoly term = AdomianPoly::from_terms({{t.coeff, t.mono, {}}});
        for (const auto& [f, e] : t.factors) term = term * derivs[std::size_t(f.order)].pow(e);
        out = out + term;
    }
    return out;
}

/// Rach formula for a conjugate-free nonlinearity.
inline AdomianPoly gen_rach(const Expr& N, int n, GenMode mode = GenMode::Substituted,
                            const std::string& var = "u") {
    if (contains_conjugate(N))
        throw unsupported_nonlinearity_error(
            "gen_rach requires a conjugate-free nonlinearity; use the product "
            "combinator or a Fourier backend instead");
    AdomianPoly a = gen_rach_opaque(n, var);
    if (mode == GenMode::Opaque) return a;
    return substitute_concrete(a, N, var);
}

namespace detail {

/// The recursion operator: a derivation sending u_k to (k+1) u_{k+1}
/// (conjugates alike), opaque N^(k) to u_1 N^(k+1), and a substituted atom
/// g to u_1 dg/du + conj(u_1) dg/dconj(u).
inline AdomianPoly apply_T(const AdomianPoly& a, const std::string& var) {
    AdomianPoly out;
    for (const auto& t : a.terms()) {
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            const auto& [key, e] = t.mono[i];
            PolyTerm nt = t;
            nt.coeff = t.coeff * Rational(e) * Rational(key.index + 1);
            nt.mono[i].second -= 1;
            nt.mono.push_back({CompKey{key.seq, key.conj, key.index + 1}, 1});
            out = out + AdomianPoly::from_terms({std::move(nt)});
        }
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            const auto& [f, e] = t.factors[i];
            PolyTerm base = t;
            base.coeff = t.coeff * Rational(e);
            base.factors[i].second -= 1;
            AdomianPoly basep = AdomianPoly::from_terms({std::move(base)});
            if (f.opaque) {
                AdomianPoly shift =
                    AdomianPoly::opaque_factor(f.order + 1, f.label) *
                    AdomianPoly::component(CompKey{var, false, 1});
                out = out + basep * shift;
            } else {
                AdomianPoly dpoly =
                    expand_expr(differentiate_wrt(f.expr, var, false)) *
                    AdomianPoly::component(CompKey{var, false, 1});
                dpoly = dpoly + expand_expr(differentiate_wrt(f.expr, var, true)) *
                                    AdomianPoly::component(CompKey{var, true, 1});
                out = out + basep * dpoly;
            }
        }
    }
    return out;
}

} // namespace detail

/// Babolian-Javadi recursion A_n = T(A_{n-1})/n, all orders 0..n.
inline std::vector<AdomianPoly> gen_recursive_symbolic_sequence(
    const Expr& N, int n, GenMode mode = GenMode::Substituted, const std::string& var = "u") {
    if (n < 0) throw std::invalid_argument("gen_recursive_symbolic: n < 0");
    std::vector<AdomianPoly> seq;
    seq.push_back(mode == GenMode::Opaque ? AdomianPoly::opaque_factor(0)
                                          : expand_expr(N));
    for (int k = 1; k <= n; ++k)
        seq.push_back(detail::apply_T(seq.back(), var).scale(Rational(1, k)));
    return seq;
}

inline AdomianPoly gen_recursive_symbolic(const Expr& N, int n,
                                          GenMode mode = GenMode::Substituted,
                                          const std::string& var = "u") {
    return gen_recursive_symbolic_sequence(N, n, mode, var).back();
}

/// Opaque recursion with no concrete nonlinearity at all.
inline AdomianPoly gen_recursive_opaque(int n, const std::string& var = "u") {
    std::vector<AdomianPoly> seq{AdomianPoly::opaque_factor(0)};
    for (int k = 1; k <= n; ++k)
        seq.push_back(detail::apply_T(seq.back(), var).scale(Rational(1, k)));
    return seq.back();
}

inline cplx evaluate_poly(const AdomianPoly& a, const ComponentSet& c,
                          const std::string& seq = "u") {
    return a.evaluate([&](const CompKey& key) {
        if (key.seq != seq)
            throw missing_component_error("no component sequence named '" + key.seq + "'");
        return key.conj ? c.conj_at(key.index) : c.at(key.index);
    });
}

inline cplx evaluate_poly(const AdomianPoly& a, const MultiComponentSet& c) {
    return a.evaluate([&](const CompKey& key) { return c.at(key); });
}

// ---------------------------------------------------------------------------
// composition rules for sequences of Adomian polynomials

namespace detail {
inline void check_sequences(const std::vector<std::vector<AdomianPoly>>& seqs) {
    if (seqs.empty()) throw std::invalid_argument("combinator: no input sequences");
    for (const auto& s : seqs)
        if (s.size() != seqs[0].size() || s.empty())
            throw std::invalid_argument("combinator: sequences must share a positive length");
}
} // namespace detail

/// N = sum alpha_k N_k.
inline std::vector<AdomianPoly> combine_sum(const std::vector<std::vector<AdomianPoly>>& seqs,
                                            const std::vector<Rational>& scalars) {
    detail::check_sequences(seqs);
    if (scalars.size() != seqs.size())
        throw std::invalid_argument("combine_sum: one scalar per sequence required");
    std::vector<AdomianPoly> out(seqs[0].size());
    for (std::size_t n = 0; n < out.size(); ++n)
        for (std::size_t k = 0; k < seqs.size(); ++k)
            out[n] = out[n] + seqs[k][n].scale(scalars[k]);
    return out;
}

/// N = prod N_k: A_n sums products over weak compositions of n.
inline std::vector<AdomianPoly> combine_product(
    const std::vector<std::vector<AdomianPoly>>& seqs) {
    detail::check_sequences(seqs);
    const int m = int(seqs.size());
    std::vector<AdomianPoly> out(seqs[0].size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        AdomianPoly an;
        for (const auto& comp : enumerate_weak_compositions(int(n), m)) {
            AdomianPoly prod = AdomianPoly::constant(Rational(1));
            for (int j = 0; j < m; ++j) prod = prod * seqs[std::size_t(j)][std::size_t(comp.parts[std::size_t(j)])];
            an = an + prod;
        }
        out[std::size_t(n)] = std::move(an);
    }
    return out;
}

/// N = N_1/N_2 via the power-series quotient with polynomial coefficients.
inline std::vector<AdomianPoly> combine_quotient(const std::vector<AdomianPoly>& num,
                                                 const std::vector<AdomianPoly>& den) {
    detail::check_sequences({num, den});
    SeriesVec<AdomianPoly> b(num), a(den);
    return quotient(b, a).c;
}

/// N = N_1^p via the power-series power recurrence.
inline std::vector<AdomianPoly> combine_power(const std::vector<AdomianPoly>& seq, int p) {
    if (seq.empty()) throw std::invalid_argument("combine_power: empty sequence");
    if (p < 1) throw std::invalid_argument("combine_power: p must be >= 1");
    return int_power(SeriesVec<AdomianPoly>(seq), p).c;
}

/// N = N_1(N_2(u)) by Faa di Bruno over the inner sequence.
inline std::vector<AdomianPoly> combine_compose(const Expr& outer, const std::string& outer_var,
                                                const std::vector<AdomianPoly>& inner) {
    if (inner.empty()) throw std::invalid_argument("combine_compose: empty inner sequence");
    const int n = int(inner.size()) - 1;
    Expr inner0 = inner[0].to_expr();

    std::vector<AdomianPoly> outer_derivs; // N_1^(k) evaluated at the inner order-0 value
    Expr d = outer;
    for (int k = 0; k <= n; ++k) {
        outer_derivs.push_back(expand_expr(substitute(d, outer_var, inner0)));
        d = differentiate(d, outer_var);
    }

    std::vector<AdomianPoly> out;
    out.push_back(outer_derivs[0]);
    for (int order = 1; order <= n; ++order) {
        AdomianPoly an;
        for (const auto& part : enumerate_partitions(order)) {
            AdomianPoly term = outer_derivs[std::size_t(part.order())];
            Rational c(1);
            for (std::size_t j = 0; j < part.mult.size(); ++j) {
                int kj = part.mult[j];
                if (kj == 0) continue;
                c /= Rational::factorial(kj);
                term = term * inner[j + 1].pow(kj);
            }
            an = an + term.scale(c);
        }
        out.push_back(std::move(an));
    }
    return out;
}

} // namespace adomian
