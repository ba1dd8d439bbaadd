#include <catch2/catch_amalgamated.hpp>

#include "adomian/components.hpp"
#include "adomian/series.hpp"

using namespace adomian;

namespace {

template <class T>
SeriesVec<T> make(std::vector<T> v) {
    return SeriesVec<T>(std::move(v));
}

SeriesVec<Rational> rand_rational_series(DetRng& rng, int order, bool unit_lead) {
    std::vector<Rational> c;
    for (int k = 0; k <= order; ++k) {
        long long num = (long long)(rng.next_in(-6, 7));
        long long den = (long long)(rng.next_in(1, 5));
        c.push_back(Rational(num, den));
    }
    if (unit_lead && c[0].is_zero()) c[0] = Rational(1);
    return make(std::move(c));
}

SeriesVec<cplx> rand_cplx_series(DetRng& rng, int order, bool unit_lead) {
    std::vector<cplx> c;
    for (int k = 0; k <= order; ++k) c.push_back(cplx(rng.next_in(-1, 1), rng.next_in(-1, 1)));
    if (unit_lead && std::abs(c[0]) < 0.2) c[0] = cplx(1.0, 0.3);
    return make(std::move(c));
}

// oracle: p-1 explicit multiplications
template <class T>
SeriesVec<T> pow_by_products(const SeriesVec<T>& a, int p) {
    SeriesVec<T> acc = a;
    for (int i = 1; i < p; ++i) acc = cauchy_product(acc, a);
    return acc;
}

} // namespace

TEST_CASE("cauchy product: hand-checked values") {
    auto a = make<Rational>({Rational(1), Rational(1), Rational(0)});
    auto sq = cauchy_product(a, a);
    CHECK(sq.c == std::vector<Rational>{Rational(1), Rational(2), Rational(1)});

    auto one = make<Rational>({Rational(1), Rational(0), Rational(0)});
    auto b = make<Rational>({Rational(3), Rational(-2), Rational(5)});
    CHECK(cauchy_product(b, one).c == b.c);

    // (1,2,3)*(4,5,6): direct convolution by hand gives (4, 13, 28)
    auto x = make<Rational>({Rational(1), Rational(2), Rational(3)});
    auto y = make<Rational>({Rational(4), Rational(5), Rational(6)});
    CHECK(cauchy_product(x, y).c == std::vector<Rational>{Rational(4), Rational(13), Rational(28)});

    auto longer = make<Rational>({Rational(1), Rational(0), Rational(0), Rational(0)});
    CHECK_THROWS_AS(cauchy_product(x, longer), order_mismatch_error);
}

TEST_CASE("quotient: hand-checked values and errors") {
    auto b = make<Rational>({Rational(1), Rational(0), Rational(0), Rational(0)});
    auto a = make<Rational>({Rational(1), Rational(1), Rational(0), Rational(0)});
    auto q = quotient(b, a);
    CHECK(q.c == std::vector<Rational>{Rational(1), Rational(-1), Rational(1), Rational(-1)});
    CHECK(cauchy_product(q, a).c == b.c);

    CHECK(quotient(a, a).c ==
          std::vector<Rational>{Rational(1), Rational(0), Rational(0), Rational(0)});

    auto sing = make<Rational>({Rational(0), Rational(1), Rational(0), Rational(0)});
    CHECK_THROWS_AS(quotient(b, sing), quotient_singular_error);
}

TEST_CASE("int_power: examples and singular error") {
    auto a = make<Rational>({Rational(1), Rational(1)});
    CHECK(int_power(a, 2).c == std::vector<Rational>{Rational(1), Rational(2)});
    CHECK(int_power(a, 1).c == a.c);

    auto b = make<Rational>({Rational(2), Rational(1), Rational(3)});
    CHECK(int_power(b, 3).c == pow_by_products(b, 3).c);

    auto sing = make<Rational>({Rational(0), Rational(1)});
    CHECK_THROWS_AS(int_power(sing, 2), power_singular_error);
    CHECK_THROWS_AS(int_power(b, 0), series_error);
}

TEST_CASE("property: quotient then product round-trips (rational, 100 cases)") {
    DetRng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        int order = 1 + int(rng.next_in(0, 8));
        auto a = rand_rational_series(rng, order, true);
        auto b = rand_rational_series(rng, order, false);
        auto q = quotient(b, a);
        CHECK(cauchy_product(q, a).c == b.c); // exact in rationals
    }
}

TEST_CASE("property: quotient then product round-trips (complex, 100 cases)") {
    DetRng rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        int order = 1 + int(rng.next_in(0, 8));
        auto a = rand_cplx_series(rng, order, true);
        auto b = rand_cplx_series(rng, order, false);
        auto back = cauchy_product(quotient(b, a), a);
        for (int k = 0; k <= order; ++k) {
            double scale = std::max(1.0, std::abs(b[k]));
            CHECK(std::abs(back[k] - b[k]) / scale < 1e-12);
        }
    }
}

TEST_CASE("property: int_power equals repeated products") {
    DetRng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        int order = 1 + int(rng.next_in(0, 10));
        int p = 1 + int(rng.next_in(0, 6));
        auto a = rand_rational_series(rng, order, true);
        CHECK(int_power(a, p).c == pow_by_products(a, p).c);
    }
    for (int trial = 0; trial < 100; ++trial) {
        int order = 1 + int(rng.next_in(0, 10));
        int p = 1 + int(rng.next_in(0, 6));
        auto a = rand_cplx_series(rng, order, true);
        auto lhs = int_power(a, p);
        auto rhs = pow_by_products(a, p);
        for (int k = 0; k <= order; ++k) {
            double scale = std::max(1.0, std::abs(rhs[k]));
            CHECK(std::abs(lhs[k] - rhs[k]) / scale < 1e-12);
        }
    }
}
