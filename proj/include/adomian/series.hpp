#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace adomian {

struct series_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct order_mismatch_error : series_error {
    using series_error::series_error;
};
struct quotient_singular_error : series_error {
    using series_error::series_error;
};
struct power_singular_error : series_error {
    using series_error::series_error;
};

/// Truncated formal power series: coefficients 0..order, nothing beyond the
/// truncation is ever read or written.
template <class T>
struct SeriesVec {
    std::vector<T> c;

    SeriesVec() = default;
    explicit SeriesVec(std::vector<T> coeffs) : c(std::move(coeffs)) {}

    int order() const { return int(c.size()) - 1; }
    const T& operator[](int k) const { return c[std::size_t(k)]; }
    T& operator[](int k) { return c[std::size_t(k)]; }
};

/// Coefficient-ring hooks. The default covers types with ordinary operator
/// arithmetic plus is_zero(); specialize for rings that need more care.
template <class T>
struct CoeffOps {
    static T zero() { return T(0); }
    static bool is_zero(const T& t) { return t == T(0); }
    static T inverse(const T& t) { return T(1) / t; }
    static T scale(const T& t, const Rational& r) { return t * T(r.to_double()); }
};

template <>
struct CoeffOps<Rational> {
    static Rational zero() { return Rational(0); }
    static bool is_zero(const Rational& t) { return t.is_zero(); }
    static Rational inverse(const Rational& t) { return Rational(1) / t; }
    static Rational scale(const Rational& t, const Rational& r) { return t * r; }
};

template <>
struct CoeffOps<cplx> {
    static cplx zero() { return cplx(0.0, 0.0); }
    static bool is_zero(const cplx& t) { return t == cplx(0.0, 0.0); }
    static cplx inverse(const cplx& t) { return cplx(1.0, 0.0) / t; }
    static cplx scale(const cplx& t, const Rational& r) { return t * r.to_double(); }
};

/// c_k = sum_{j<=k} a_j b_{k-j}, truncated at the common order.
template <class T>
SeriesVec<T> cauchy_product(const SeriesVec<T>& a, const SeriesVec<T>& b) {
    if (a.order() != b.order())
        throw order_mismatch_error("cauchy_product: order mismatch");
    const int n = a.order();
    SeriesVec<T> out;
    out.c.assign(std::size_t(n) + 1, CoeffOps<T>::zero());
    for (int k = 0; k <= n; ++k) {
        T s = CoeffOps<T>::zero();
        for (int j = 0; j <= k; ++j) s = s + a[j] * b[k - j];
        out[k] = s;
    }
    return out;
}

/// b/a by the standard recurrence: c_0 = b_0/a_0,
/// c_k = (b_k - sum_{j=1..k} a_j c_{k-j}) / a_0.
template <class T>
SeriesVec<T> quotient(const SeriesVec<T>& b, const SeriesVec<T>& a) {
    if (a.order() != b.order())
        throw order_mismatch_error("quotient: order mismatch");
    if (CoeffOps<T>::is_zero(a[0]))
        throw quotient_singular_error("quotient: constant term of divisor is zero");
    const int n = a.order();
    const T inv_a0 = CoeffOps<T>::inverse(a[0]);
    SeriesVec<T> out;
    out.c.assign(std::size_t(n) + 1, CoeffOps<T>::zero());
    out[0] = b[0] * inv_a0;
    for (int k = 1; k <= n; ++k) {
        T s = b[k];
        for (int j = 1; j <= k; ++j) s = s - a[j] * out[k - j];
        out[k] = s * inv_a0;
    }
    return out;
}

/// a^p for integer p >= 1 via the coefficient recurrence
/// c_0 = a_0^p, c_k = (1/(k a_0)) sum_{j=1..k} (j p - k + j) a_j c_{k-j}.
/// Requires invertible a_0 once any coefficient beyond order 0 is requested.
template <class T>
SeriesVec<T> int_power(const SeriesVec<T>& a, long long p) {
    if (p < 1) throw series_error("int_power: exponent must be >= 1");
    const int n = a.order();
    SeriesVec<T> out;
    out.c.assign(std::size_t(n) + 1, CoeffOps<T>::zero());
    // c_0 = a_0^p by binary exponentiation
    {
        T acc = a[0];
        long long e = p - 1;
        T base = a[0];
        while (e > 0) {
            if (e & 1) acc = acc * base;
            e >>= 1;
            if (e) base = base * base;
        }
        out[0] = acc;
    }
    if (n == 0) return out;
    if (CoeffOps<T>::is_zero(a[0]))
        throw power_singular_error(
            "int_power: constant term is zero; use repeated products instead");
    const T inv_a0 = CoeffOps<T>::inverse(a[0]);
    for (int k = 1; k <= n; ++k) {
        T s = CoeffOps<T>::zero();
        for (int j = 1; j <= k; ++j) {
            long long w = j * p - k + j;
            if (w == 0) continue;
            s = s + CoeffOps<T>::scale(a[j] * out[k - j], Rational(w));
        }
        out[k] = CoeffOps<T>::scale(s, Rational(1, k)) * inv_a0;
    }
    return out;
}

} // namespace adomian
