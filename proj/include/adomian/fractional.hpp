#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "rational.hpp"

namespace adomian {

struct fractional_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// c * t^p with real exponent p >= 0.
struct FracMonomial {
    cplx coeff{0.0, 0.0};
    double power = 0.0;
};

namespace detail {
inline bool gamma_pole(double x) {
    return x <= 0.0 && std::abs(x - std::round(x)) < 1e-12;
}
} // namespace detail

/// Caputo derivative of order alpha on a monomial:
/// D^alpha t^p = Gamma(p+1)/Gamma(p-alpha+1) t^{p-alpha} for p > 0, and 0 for
/// constants. alpha = 1 reduces to the ordinary derivative p t^{p-1}.
inline FracMonomial caputo_monomial(double alpha, const FracMonomial& m) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw fractional_domain_error("caputo_monomial: alpha must lie in (0, 1]");
    if (m.power < 0.0) throw fractional_domain_error("caputo_monomial: exponent must be >= 0");
    if (m.power == 0.0) return FracMonomial{cplx(0.0, 0.0), 0.0};
    double x = m.power - alpha + 1.0;
    if (detail::gamma_pole(x))
        throw fractional_domain_error("caputo_monomial: Gamma pole at p - alpha + 1 = " +
                                      std::to_string(x));
    double factor = std::tgamma(m.power + 1.0) / std::tgamma(x);
    return FracMonomial{m.coeff * factor, m.power - alpha};
}

/// Riemann-Liouville integral of order alpha on a monomial:
/// I^alpha t^p = Gamma(p+1)/Gamma(p+alpha+1) t^{p+alpha}; alpha = 0 is the
/// identity.
inline FracMonomial rl_integral_monomial(double alpha, const FracMonomial& m) {
    if (alpha < 0.0) throw fractional_domain_error("rl_integral_monomial: alpha must be >= 0");
    if (m.power < 0.0)
        throw fractional_domain_error("rl_integral_monomial: exponent must be >= 0");
    if (alpha == 0.0) return m;
    double factor = std::tgamma(m.power + 1.0) / std::tgamma(m.power + alpha + 1.0);
    return FracMonomial{m.coeff * factor, m.power + alpha};
}

/// Partial sum of E_alpha(z) = sum_k z^k / Gamma(alpha k + 1).
inline cplx mittag_leffler(double alpha, cplx z, int terms) {
    if (!(alpha > 0.0) || alpha > 2.0)
        throw fractional_domain_error("mittag_leffler: alpha must lie in (0, 2]");
    if (terms < 1) throw fractional_domain_error("mittag_leffler: terms must be >= 1");
    cplx acc(0.0, 0.0);
    cplx zk(1.0, 0.0);
    for (int k = 0; k < terms; ++k) {
        acc += zk / std::tgamma(alpha * double(k) + 1.0);
        zk *= z;
    }
    return acc;
}

} // namespace adomian
