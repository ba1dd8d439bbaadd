#include <catch2/catch_amalgamated.hpp>

#include "adomian/expr.hpp"
#include "test_support.hpp"

using namespace adomian;

TEST_CASE("parse builds the expected shapes") {
    Expr e = parse("u^2");
    CHECK(e.kind() == NodeKind::IntPow);
    CHECK(e.node().iexp == 2);
    CHECK(e.kids()[0] == Expr::var("u"));

    Expr s = parse("cosh(u)+sin(u)");
    REQUIRE(s.kind() == NodeKind::Sum);
    CHECK(s == Expr::sum({Expr::apply(Fun::Cosh, Expr::var("u")),
                          Expr::apply(Fun::Sin, Expr::var("u"))}));

    Expr p = parse("u^2*conj(u)");
    REQUIRE(p.kind() == NodeKind::Product);
    CHECK(p == Expr::product({Expr::ipow(Expr::var("u"), 2), Expr::var("u", true)}));
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(parse("u +* v"), parse_error);
    CHECK_THROWS_AS(parse("foo(u)"), parse_error);
    CHECK_THROWS_AS(parse("(u"), parse_error);
    CHECK_THROWS_AS(parse("u^v"), parse_error); // exponent must be numeric
    try {
        parse("exp(u) + tan(u)");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.pos == 9);
        CHECK(std::string(e.what()).find("tan") != std::string::npos);
    }
    // fractional power of a negative constant surfaces as a parse error
    CHECK_THROWS_AS(parse("(0-2)^0.5"), parse_error);
    // constant folding overflow and malformed floats do too
    CHECK_THROWS_AS(parse("9^3095"), parse_error);
    CHECK_THROWS_AS(parse("1e7009"), parse_error);
    CHECK_THROWS_AS(parse(".e4"), parse_error);
}

TEST_CASE("rational vs floating literals") {
    CHECK(parse("3/4").is_exact_const());
    CHECK(parse("3/4").const_rational() == Rational(3, 4));
    CHECK_FALSE(parse("0.75").is_exact_const());
    CHECK(has_inexact_constant(parse("1.5*u")));
    CHECK_FALSE(has_inexact_constant(parse("3*u/2")));
    CHECK(parse("i").const_value() == cplx(0.0, 1.0));
}

TEST_CASE("print round-trips on normalized expressions") {
    for (const auto& txt : testsup::symbolic_corpus()) {
        Expr e = parse(txt);
        CHECK(parse(print(e)) == e);
    }
    for (const char* txt : {"u^2*conj(u)", "-3/4*u + u^-2", "u^2.5", "(1+u)^3",
                            "2*i*u + 0.5", "exp(sin(u))*ln(u)"}) {
        Expr e = parse(txt);
        CHECK(parse(print(e)) == e);
    }
}

TEST_CASE("normalize is idempotent") {
    for (const auto& txt : testsup::symbolic_corpus()) {
        Expr e = parse(txt);
        CHECK(normalize(e) == e);
        CHECK(normalize(normalize(e)) == normalize(e));
    }
    CHECK(parse("u*u*u") == parse("u^3"));
    CHECK(parse("u^0") == Expr::constant(Rational(1)));
    CHECK(parse("u^1") == Expr::var("u"));
    CHECK(parse("u*u^-1") == Expr::constant(Rational(1)));
}

TEST_CASE("differentiate: calculus table") {
    CHECK(differentiate(parse("u^5"), "u") == parse("5*u^4"));
    CHECK(differentiate(parse("cosh(u)+sin(u)"), "u") == parse("sinh(u)+cos(u)"));
    CHECK(differentiate(parse("ln(u)"), "u") == parse("u^-1"));
    CHECK(differentiate(parse("exp(u)"), "u") == parse("exp(u)"));
    CHECK(differentiate(parse("cos(u)"), "u") == parse("-sin(u)"));
    // conjugated occurrences differentiate to zero
    CHECK(differentiate(parse("conj(u)"), "u") == Expr::constant(Rational(0)));
    CHECK(differentiate(parse("u^2*conj(u)"), "u") == parse("2*u*conj(u)"));
    CHECK(differentiate_wrt(parse("u^2*conj(u)"), "u", true) == parse("u^2"));
}

TEST_CASE("evaluate: spec examples") {
    Assignment a;
    a.set("u", cplx(1.0, 1.0));
    CHECK(testsup::rel(evaluate(parse("u^2"), a), cplx(0.0, 2.0)) < 1e-15);

    Assignment b;
    b.set("u", cplx(0.0, 0.0));
    CHECK(testsup::rel(evaluate(parse("exp(u)"), b), cplx(1.0, 0.0)) < 1e-15);

    Assignment c;
    c.set("u", cplx(0.0, 2.0));
    CHECK(testsup::rel(evaluate(parse("u^2*conj(u)"), c), cplx(0.0, 8.0)) < 1e-15);
}

TEST_CASE("evaluate: conjugate defaults to conjugate of the base value") {
    Assignment a;
    a.set("u", cplx(0.3, -0.7));
    CHECK(evaluate(parse("conj(u)"), a) == std::conj(cplx(0.3, -0.7)));
    // explicit override wins
    a.set("u", cplx(5.0, 5.0), true);
    CHECK(evaluate(parse("conj(u)"), a) == cplx(5.0, 5.0));
}

TEST_CASE("evaluate: domain errors name the failing subterm") {
    Assignment a;
    a.set("u", cplx(0.0, 0.0));
    try {
        evaluate(parse("ln(u)"), a);
        FAIL("expected eval_error");
    } catch (const eval_error& e) {
        CHECK(e.subterm == "ln(u)");
    }
    try {
        evaluate(parse("1/u"), a);
        FAIL("expected eval_error");
    } catch (const eval_error& e) {
        CHECK(e.subterm == "u^-1");
    }
    Assignment empty;
    CHECK_THROWS_AS(evaluate(parse("u"), empty), eval_error);
}

TEST_CASE("derivative agrees with central finite differences") {
    adomian::DetRng rng(20240817);
    for (const auto& txt : testsup::symbolic_corpus()) {
        Expr e = parse(txt);
        Expr de = differentiate(e, "u");
        for (int trial = 0; trial < 10; ++trial) {
            // away from singularities: right half-plane, modulus near 1
            double m = rng.next_in(0.8, 1.4);
            double ph = rng.next_in(-1.2, 1.2);
            cplx u0(m * std::cos(ph), m * std::sin(ph));
            const double h = 1e-5;
            Assignment ap, am, a;
            a.set("u", u0);
            ap.set("u", u0 + cplx(h, 0));
            am.set("u", u0 - cplx(h, 0));
            cplx fd = (evaluate(e, ap) - evaluate(e, am)) / (2.0 * h);
            cplx an = evaluate(de, a);
            CHECK(testsup::rel(fd, an) < 1e-6);
        }
    }
}

TEST_CASE("structural queries") {
    CHECK(contains_conjugate(parse("u^2*conj(u)")));
    CHECK_FALSE(contains_conjugate(parse("u^2")));
    CHECK(polynomial_degree(parse("u^2*conj(u)")) == 3);
    CHECK(polynomial_degree(parse("u^2 + u^5")) == 5);
    CHECK_FALSE(polynomial_degree(parse("exp(u)")).has_value());
    CHECK_FALSE(polynomial_degree(parse("1/u")).has_value());
    CHECK(needs_domain_guard(parse("ln(u)")));
    CHECK(needs_domain_guard(parse("1/u")));
    CHECK(needs_domain_guard(parse("u^2.5")));
    CHECK_FALSE(needs_domain_guard(parse("exp(sin(u))")));
    auto fv = free_variables(parse("u^2*conj(u)"));
    CHECK(fv.size() == 2); // conjugated occurrence registers the base name
    CHECK(fv.count({"u", false}) == 1);
    CHECK(fv.count({"u", true}) == 1);
}

TEST_CASE("substitute replaces a variable by an expression") {
    Expr outer = parse("exp(x)");
    CHECK(substitute(outer, "x", parse("sin(u)")) == parse("exp(sin(u))"));
    CHECK_THROWS_AS(substitute(parse("conj(x)"), "x", parse("u")), std::invalid_argument);
}

namespace {

// random normalized expression trees for canonicalization properties
adomian::Expr random_expr(adomian::DetRng& rng, int depth) {
    using adomian::Expr;
    using adomian::Fun;
    using adomian::Rational;
    double pick = rng.next_unit();
    if (depth == 0 || pick < 0.25) {
        double leaf = rng.next_unit();
        if (leaf < 0.3)
            return Expr::constant(Rational((long long)rng.next_in(-5, 6),
                                           (long long)rng.next_in(1, 4)));
        if (leaf < 0.4) return Expr::constant(adomian::cplx(rng.next_in(-2, 2), rng.next_in(-2, 2)));
        if (leaf < 0.8) return Expr::var("u", rng.next_unit() < 0.25);
        return Expr::var("v");
    }
    if (pick < 0.45) {
        std::vector<Expr> kids;
        int n = 2 + int(rng.next_in(0, 2));
        for (int i = 0; i < n; ++i) kids.push_back(random_expr(rng, depth - 1));
        return Expr::sum(std::move(kids));
    }
    if (pick < 0.65) {
        std::vector<Expr> kids;
        int n = 2 + int(rng.next_in(0, 2));
        for (int i = 0; i < n; ++i) kids.push_back(random_expr(rng, depth - 1));
        return Expr::product(std::move(kids));
    }
    if (pick < 0.78) return Expr::ipow(random_expr(rng, depth - 1), (long long)rng.next_in(-3, 4));
    if (pick < 0.85)
        return Expr::rpow(Expr::apply(Fun::Cosh, random_expr(rng, depth - 1)),
                          rng.next_in(0.3, 2.7));
    Fun f = static_cast<Fun>(int(rng.next_in(0, 6)));
    return Expr::apply(f, random_expr(rng, depth - 1));
}

} // namespace

TEST_CASE("property: random trees round-trip and stay normalized") {
    adomian::DetRng rng(424242);
    int built = 0;
    for (int trial = 0; trial < 400; ++trial) {
        Expr e;
        try {
            e = random_expr(rng, 4);
        } catch (const std::domain_error&) {
            continue; // constant folding hit 0^-n or a negative fractional base
        }
        ++built;
        CAPTURE(print(e));
        CHECK(normalize(e) == e);
        CHECK(parse(print(e)) == e);
    }
    CHECK(built > 300);
}

TEST_CASE("property: evaluation is invariant under re-normalization") {
    adomian::DetRng rng(515151);
    for (int trial = 0; trial < 100; ++trial) {
        Expr e;
        try {
            e = random_expr(rng, 3);
        } catch (const std::domain_error&) {
            continue;
        }
        Assignment a;
        a.set("u", cplx(rng.next_in(0.6, 1.4), rng.next_in(-0.3, 0.3)));
        a.set("v", cplx(rng.next_in(0.6, 1.4), rng.next_in(-0.3, 0.3)));
        cplx v1, v2;
        try {
            v1 = evaluate(e, a);
            v2 = evaluate(parse(print(e)), a);
        } catch (const eval_error&) {
            continue;
        }
        if (!std::isfinite(v1.real()) || !std::isfinite(v1.imag())) continue;
        CAPTURE(print(e));
        CHECK(testsup::rel(v2, v1) < 1e-12);
    }
}

TEST_CASE("parser never crashes on mangled input") {
    adomian::DetRng rng(616161);
    const std::string alphabet = "u v+-*/^().0123456789conj expl sinh";
    for (int trial = 0; trial < 500; ++trial) {
        std::string s;
        int len = 1 + int(rng.next_in(0, 24));
        for (int i = 0; i < len; ++i)
            s += alphabet[std::size_t(rng.next_in(0, double(alphabet.size())))];
        try {
            Expr e = parse(s);
            CHECK(parse(print(e)) == e); // anything accepted must round-trip
        } catch (const parse_error&) {
            // the only exception parse is allowed to raise
        }
    }
}

TEST_CASE("compiled evaluation matches tree evaluation") {
    adomian::DetRng rng(7);
    std::vector<std::pair<std::string, bool>> slots = {{"u", false}, {"u", true}};
    for (const char* txt : {"u^2*conj(u)", "exp(sin(u))", "ln(u)", "u^2.5"}) {
        Expr e = parse(txt);
        auto prog = CompiledExpr::compile(e, slots);
        for (int t = 0; t < 5; ++t) {
            cplx u(rng.next_in(0.5, 1.5), rng.next_in(-0.4, 0.4));
            cplx ub(rng.next_in(0.5, 1.5), rng.next_in(-0.4, 0.4));
            Assignment a;
            a.set("u", u);
            a.set("u", ub, true);
            std::vector<cplx> vals = {u, ub};
            CHECK(testsup::rel(prog.eval(vals), evaluate(e, a)) < 1e-14);
        }
    }
}
