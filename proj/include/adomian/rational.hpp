#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace adomian {

using cplx = std::complex<double>;

struct rational_overflow_error : std::overflow_error {
    using std::overflow_error::overflow_error;
};

/// Exact rational number on 64-bit numerator/denominator, always reduced,
/// denominator > 0. Intermediate products go through 128-bit arithmetic and
/// overflow raises rational_overflow_error instead of wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        reduce_from(n, d);
    }

    static Rational factorial(int n) {
        if (n < 0) throw std::domain_error("Rational::factorial: negative");
        __int128 f = 1;
        for (int k = 2; k <= n; ++k) {
            f *= k;
            if (f > INT64_MAX) throw rational_overflow_error("factorial overflow");
        }
        return Rational(static_cast<long long>(f));
    }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    Rational operator-() const { return make_reduced(-num_, den_); }

    Rational operator+(const Rational& o) const {
        __int128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
        __int128 d = i128(den_) * o.den_;
        return from_i128(n, d);
    }
    Rational operator-(const Rational& o) const { return *this + (-o); }
    Rational operator*(const Rational& o) const {
        return from_i128(i128(num_) * o.num_, i128(den_) * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        return from_i128(i128(num_) * o.den_, i128(den_) * o.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    Rational pow(long long e) const {
        if (e < 0) {
            if (num_ == 0) throw std::domain_error("Rational: 0 to negative power");
            return Rational(den_, num_).pow(-e);
        }
        Rational base = *this, acc(1);
        while (e > 0) {
            if (e & 1) acc *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return acc;
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return i128(num_) * o.den_ < i128(o.num_) * den_;
    }

    double to_double() const { return double(num_) / double(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    using i128 = __int128;
    long long num_, den_;

    static Rational make_reduced(long long n, long long d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }

    void reduce_from(long long n, long long d) {
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }

    static Rational from_i128(i128 n, i128 d) {
        if (d < 0) { n = -n; d = -d; }
        i128 an = n < 0 ? -n : n;
        i128 g = gcd128(an, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw rational_overflow_error("Rational overflow: " + str128(n) + "/" + str128(d));
        return make_reduced(static_cast<long long>(n), static_cast<long long>(d));
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static std::string str128(i128 v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        if (neg) v = -v;
        std::string s;
        while (v > 0) {
            s.insert(s.begin(), char('0' + int(v % 10)));
            v /= 10;
        }
        return neg ? "-" + s : s;
    }
};

inline cplx to_cplx(const Rational& r) { return cplx(r.to_double(), 0.0); }

} // namespace adomian
