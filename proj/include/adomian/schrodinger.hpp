#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fractional.hpp"
#include "polynomial.hpp"

namespace adomian {

/// Separable solution of the time-fractional cubic Schrodinger problem
/// i D_t^alpha u + (1/2) u_xx + |u|^2 u = 0, u(x,0) = e^{ix}: the ansatz
/// u_n = c_n e^{ix} t^{n alpha} reduces the decomposition to a scalar
/// coefficient recursion.
struct SchrodingerState {
    double alpha = 1.0;
    std::vector<cplx> c; // c[0..N], c[0] = 1

    /// Partial sum of the series at (x, t).
    cplx eval(double x, double t) const {
        cplx acc(0.0, 0.0);
        for (std::size_t n = 0; n < c.size(); ++n)
            acc += c[n] * std::pow(t, alpha * double(n));
        return acc * std::exp(cplx(0.0, x));
    }
};

/// Closed form c_n = (i/2)^n / Gamma(n alpha + 1).
inline cplx schrodinger_closed_form_coeff(double alpha, int n) {
    cplx half_i(0.0, 0.5);
    cplx p(1.0, 0.0);
    for (int k = 0; k < n; ++k) p *= half_i;
    return p / std::tgamma(alpha * double(n) + 1.0);
}

/// Decomposition recursion
/// c_{n+1} = i (a_n - c_n/2) Gamma(n alpha + 1) / Gamma((n+1) alpha + 1)
/// with the cubic-term coefficient taken in linearized form a_n = c_n
/// (|u_0|^2 = 1 on the initial data). The Gamma ratios then telescope to
/// c_n = (i/2)^n / Gamma(n alpha + 1) for every alpha.
///
/// Note: the full convolution a_n = sum c_{k1} c_{k2} conj(c_{k3})
/// (see schrodinger_cubic_coefficient) coincides with c_n only up to n = 2
/// when alpha < 1 — the multinomial identity behind the telescoping needs
/// Gamma(2 alpha + 1) = 2 Gamma(alpha + 1)^2, which holds only at alpha = 1.
/// Feeding the convolution back into the recursion therefore leaves the
/// closed form (and E_alpha(i t^alpha / 2)) at alpha < 1.
inline SchrodingerState solve_schrodinger(double alpha, int N) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw fractional_domain_error("solve_schrodinger: alpha must lie in (0, 1]");
    if (N < 1) throw fractional_domain_error("solve_schrodinger: N must be >= 1");
    SchrodingerState st;
    st.alpha = alpha;
    st.c.assign(std::size_t(N) + 1, cplx(0.0, 0.0));
    st.c[0] = cplx(1.0, 0.0);
    const cplx iunit(0.0, 1.0);
    for (int n = 0; n < N; ++n) {
        cplx a_n = st.c[std::size_t(n)];
        cplx rhs = iunit * (a_n - 0.5 * st.c[std::size_t(n)]);
        double ratio = std::tgamma(alpha * double(n) + 1.0) /
                       std::tgamma(alpha * double(n + 1) + 1.0);
        st.c[std::size_t(n + 1)] = rhs * ratio;
    }
    return st;
}

/// Full cubic Adomian coefficient of u^2 conj(u) under the separable ansatz:
/// sum_{k1+k2+k3=n} c_{k1} c_{k2} conj(c_{k3}).
inline cplx schrodinger_cubic_coefficient(std::span<const cplx> c, int n) {
    cplx a_n(0.0, 0.0);
    for (int k1 = 0; k1 <= n; ++k1)
        for (int k2 = 0; k1 + k2 <= n; ++k2)
            a_n += c[std::size_t(k1)] * c[std::size_t(k2)] * std::conj(c[std::size_t(n - k1 - k2)]);
    return a_n;
}

/// Convolution polynomial for u * w with w a caller-supplied derivative
/// sequence (for example w = D_x^beta u): A_n = sum_k u_k w_{n-k}.
inline cplx burgers_term(std::span<const cplx> u, std::span<const cplx> w, int n) {
    if (u.size() < std::size_t(n) + 1 || w.size() < std::size_t(n) + 1)
        throw missing_component_error("burgers_term: sequences must cover orders 0..n");
    cplx acc(0.0, 0.0);
    for (int k = 0; k <= n; ++k) acc += u[std::size_t(k)] * w[std::size_t(n - k)];
    return acc;
}

/// Symbolic form of the same convolution over sequences named "u" and "w".
inline AdomianPoly burgers_term_symbolic(int n) {
    if (n < 0) throw std::invalid_argument("burgers_term_symbolic: n < 0");
    std::vector<PolyTerm> terms;
    for (int k = 0; k <= n; ++k) {
        PolyTerm t;
        t.coeff = Rational(1);
        t.mono.push_back({CompKey{"u", false, k}, 1});
        t.mono.push_back({CompKey{"w", false, n - k}, 1});
        terms.push_back(std::move(t));
    }
    return AdomianPoly::from_terms(std::move(terms));
}

} // namespace adomian
