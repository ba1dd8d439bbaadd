#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "adomian/adomian.hpp"

namespace testsup {

using adomian::cplx;

inline double rel(cplx got, cplx want) {
    double s = std::abs(want);
    if (s == 0.0) return std::abs(got);
    return std::abs(got - want) / s;
}

/// Conjugate-free nonlinearities exercised by every backend.
inline const std::vector<std::string>& symbolic_corpus() {
    static const std::vector<std::string> c = {
        "u^2",
        "u^5",
        "cosh(u)+sin(u)",
        "u^2*(cosh(u)+sin(u))",
        "exp(u)",
        "ln(u)",
        "exp(sin(u))",
        "exp((cos(u)-1)/2)",
    };
    return c;
}

inline adomian::SampleOpts opts_for(const adomian::Expr& N) {
    adomian::SampleOpts so;
    so.guard = adomian::needs_domain_guard(N);
    return so;
}

} // namespace testsup
