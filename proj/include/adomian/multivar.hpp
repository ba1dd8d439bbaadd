#pragma once

#include <array>
#include <string>
#include <vector>

#include "components.hpp"
#include "fourier.hpp"
#include "polynomial.hpp"

namespace adomian {

/// A_{j,n} for a nonlinearity in several variables, all parametrized by one
/// shared angle.
inline cplx gen_fourier_direct_multi(const Expr& N, const MultiComponentSet& c, int n,
                                     const QuadratureConfig& q = {}) {
    if (n < 0) throw std::invalid_argument("gen_fourier_direct_multi: n < 0");
    c.require_rectangular();
    detail::FourierEngine eng(N, c);
    if (eng.max_index() < n)
        throw missing_component_error("need components up to order " + std::to_string(n));
    return eng.modes(N, {n}, q)[0];
}

inline std::vector<cplx> gen_fourier_direct_multi_all(const Expr& N, const MultiComponentSet& c,
                                                      int n, const QuadratureConfig& q = {}) {
    if (n < 0) throw std::invalid_argument("gen_fourier_direct_multi_all: n < 0");
    c.require_rectangular();
    std::vector<int> ns(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) ns[std::size_t(k)] = k;
    detail::FourierEngine eng(N, c);
    return eng.modes(N, ns, q);
}

inline cplx gen_fourier_recursive_multi(const Expr& N, const MultiComponentSet& c, int n,
                                        const QuadratureConfig& q = {}) {
    if (n < 1) throw std::invalid_argument("gen_fourier_recursive_multi: n must be >= 1");
    c.require_rectangular();
    MultiComponentSet trunc = c;
    for (auto& s : trunc.seqs) {
        if (s.u.size() > std::size_t(n) + 1) s.u.resize(std::size_t(n) + 1);
        if (s.conj_u && s.conj_u->size() > std::size_t(n) + 1) s.conj_u->resize(std::size_t(n) + 1);
    }
    detail::FourierEngine eng(N, trunc);
    if (eng.max_index() < n)
        throw missing_component_error("need components up to order " + std::to_string(n));
    return eng.recursive(n, q);
}

/// Advection polynomials of the incompressible flow nonlinearity
/// N_j = u_1 d(u_j)/dx + u_2 d(u_j)/dy + u_3 d(u_j)/dz for j = 1,2,3:
/// A_{j,n} = sum over (k,w) of sum_{a+b=n} u_{k,a} * d(u_j)/dw at order b.
/// Velocity sequences are named u1,u2,u3 and the caller supplies spatial
/// derivative sequences du<j>dx, du<j>dy, du<j>dz for numeric evaluation.
inline std::array<AdomianPoly, 3> navier_stokes_advection(int n) {
    if (n < 0) throw std::invalid_argument("navier_stokes_advection: n < 0");
    static const char* axes[3] = {"x", "y", "z"};
    std::array<AdomianPoly, 3> out;
    for (int j = 1; j <= 3; ++j) {
        std::vector<PolyTerm> terms;
        for (int k = 1; k <= 3; ++k) {
            std::string dseq = "du" + std::to_string(j) + "d" + axes[k - 1];
            for (int a = 0; a <= n; ++a) {
                PolyTerm t;
                t.coeff = Rational(1);
                t.mono.push_back({CompKey{"u" + std::to_string(k), false, a}, 1});
                t.mono.push_back({CompKey{dseq, false, n - a}, 1});
                terms.push_back(std::move(t));
            }
        }
        out[std::size_t(j - 1)] = AdomianPoly::from_terms(std::move(terms));
    }
    return out;
}

} // namespace adomian
