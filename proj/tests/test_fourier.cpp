#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <numbers>

#include "adomian/fourier.hpp"
#include "adomian/generators.hpp"
#include "test_support.hpp"

using namespace adomian;
using testsup::rel;

TEST_CASE("direct method: hand-checked values") {
    ComponentSet c{{cplx(1, 0), cplx(0.5, 0), cplx(0.25, 0)}, std::nullopt};
    CHECK(rel(gen_fourier_direct(parse("u^2"), c, 2), cplx(0.75, 0)) < 1e-12);

    ComponentSet e{{cplx(0, 0), cplx(1, 0), cplx(1, 0)}, std::nullopt};
    CHECK(rel(gen_fourier_direct(parse("exp(u)"), e, 2), cplx(1.5, 0)) < 1e-12);

    // conjugated term at sampled values
    ComponentSet cc{{cplx(0.3, 0.4), cplx(0.1, -0.2)}, std::nullopt};
    cplx expect = cc.u[0] * cc.u[0] * std::conj(cc.u[1]) +
                  2.0 * cc.u[0] * std::conj(cc.u[0]) * cc.u[1];
    CHECK(rel(gen_fourier_direct(parse("u^2*conj(u)"), cc, 1), expect) < 1e-12);
}

TEST_CASE("direct method: zero tail kills every positive mode") {
    ComponentSet c{{cplx(0.9, 0.2), cplx(0, 0), cplx(0, 0), cplx(0, 0)}, std::nullopt};
    for (const auto& txt : testsup::symbolic_corpus())
        for (int n = 1; n <= 3; ++n)
            CHECK(std::abs(gen_fourier_direct(parse(txt), c, n)) < 1e-12);
}

TEST_CASE("backend agreement on the corpus") {
    DetRng rng(5150);
    for (const auto& txt : testsup::symbolic_corpus()) {
        Expr N = parse(txt);
        std::vector<AdomianPoly> sym;
        for (int n = 0; n <= 8; ++n) sym.push_back(gen_rach(N, n));
        for (int trial = 0; trial < 5; ++trial) {
            ComponentSet c = sample_components(rng, 9, testsup::opts_for(N));
            auto direct = gen_fourier_direct_all(N, c, 8);
            for (int n = 0; n <= 8; ++n)
                CHECK(rel(direct[std::size_t(n)], evaluate_poly(sym[std::size_t(n)], c)) < 1e-9);
        }
    }
}

TEST_CASE("recursive method: hand-checked values") {
    ComponentSet c{{cplx(1, 0), cplx(2, 0)}, std::nullopt};
    CHECK(rel(gen_fourier_recursive(parse("u^2"), c, 1), cplx(4, 0)) < 1e-7);
    CHECK(rel(gen_fourier_recursive(parse("u"), c, 1), cplx(2, 0)) < 1e-10);
    ComponentSet e{{cplx(0, 0), cplx(1, 0), cplx(1, 0)}, std::nullopt};
    CHECK(rel(gen_fourier_recursive(parse("exp(u)"), e, 2), cplx(1.5, 0)) < 1e-7);
}

TEST_CASE("recursive method agrees with the direct method up to order 3") {
    DetRng rng(6030);
    for (const auto& txt : testsup::symbolic_corpus()) {
        Expr N = parse(txt);
        auto so = testsup::opts_for(N);
        so.tail_radius = 0.1;
        for (int trial = 0; trial < 2; ++trial) {
            ComponentSet c = sample_components(rng, 4, so);
            auto direct = gen_fourier_direct_all(N, c, 3);
            for (int n = 1; n <= 3; ++n)
                CHECK(rel(gen_fourier_recursive(N, c, n), direct[std::size_t(n)]) < 1e-7);
        }
    }
}

TEST_CASE("recursive method at depth four: small tails, 64 nodes per level") {
    // at depth 4 the nested shifts amplify the tail by roughly two orders of
    // magnitude, so the levels need 64 nodes and small components to stay
    // inside the principal branch and below roundoff amplification
    DetRng rng(6031);
    QuadratureConfig q;
    q.recursive_nodes = 64;
    for (const char* txt : {"u^2", "exp(sin(u))", "ln(u)"}) {
        Expr N = parse(txt);
        auto so = testsup::opts_for(N);
        so.tail_radius = 0.008;
        ComponentSet c = sample_components(rng, 5, so);
        cplx direct = gen_fourier_direct(N, c, 4);
        CHECK(rel(gen_fourier_recursive(N, c, 4, q), direct) < 1e-7);
    }
}

TEST_CASE("truncation invariance: extra components do not move A_n") {
    DetRng rng(7411);
    for (const auto& txt : testsup::symbolic_corpus()) {
        Expr N = parse(txt);
        for (int n = 1; n <= 4; ++n) {
            ComponentSet full = sample_components(rng, n + 6, testsup::opts_for(N));
            ComponentSet trunc = full.truncated(n + 1);
            cplx a = gen_fourier_direct(N, trunc, n);
            cplx b = gen_fourier_direct(N, full, n);
            CHECK(rel(b, a) < 1e-10);
        }
    }
}

TEST_CASE("subscript homogeneity, numeric side") {
    // |u_k| ~ 4^{-k} keeps the t = 2 rescaling inside the branch guard and
    // keeps A_n far enough above roundoff for 1e-10 relative comparisons
    DetRng rng(8888);
    for (const auto& txt : testsup::symbolic_corpus()) {
        Expr N = parse(txt);
        auto so = testsup::opts_for(N);
        so.mod0_lo = 1.2;
        ComponentSet c = sample_components(rng, 4, so);
        for (int k = 1; k < 4; ++k)
            c.u[std::size_t(k)] *= 0.3 * std::pow(0.25, k - 1) / 0.5;
        for (double t : {0.5, 2.0}) {
            ComponentSet scaled = c;
            for (int k = 1; k < 4; ++k) scaled.u[std::size_t(k)] *= std::pow(t, k);
            for (int n = 1; n <= 3; ++n) {
                cplx base = gen_fourier_direct(N, c, n);
                cplx sc = gen_fourier_direct(N, scaled, n);
                CHECK(rel(sc, base * std::pow(t, n)) < 1e-10);
            }
        }
    }
}

TEST_CASE("negative-frequency modes of the sampled nonlinearity vanish") {
    DetRng rng(1313);
    for (const auto& txt : testsup::symbolic_corpus()) {
        Expr N = parse(txt);
        ComponentSet c = sample_components(rng, 4, testsup::opts_for(N));
        auto integrand = [&](double lam) {
            cplx z = std::exp(cplx(0.0, lam));
            cplx ul(0, 0);
            for (std::size_t k = c.u.size(); k-- > 0;) ul = ul * z + c.u[k];
            Assignment a;
            a.set("u", ul);
            return evaluate(N, a);
        };
        // coefficient of e^{+i lambda}, i.e. frequency -1
        CHECK(std::abs(fourier_mode(integrand, -1, 512)) < 1e-10);
    }
}

TEST_CASE("domain guard rejects circles around the branch point") {
    ComponentSet bad{{cplx(0.5, 0), cplx(0.4, 0), cplx(0.4, 0)}, std::nullopt};
    CHECK_THROWS_AS(gen_fourier_direct(parse("ln(u)"), bad, 2), fourier_domain_error);
    CHECK_THROWS_AS(gen_fourier_direct(parse("1/u"), bad, 2), fourier_domain_error);
    // polynomial integrands need no guard
    CHECK_NOTHROW(gen_fourier_direct(parse("u^2"), bad, 2));
}

TEST_CASE("recursive cost guard trips beyond the budget") {
    ComponentSet c{std::vector<cplx>(8, cplx(0.1, 0)), std::nullopt};
    c.u[0] = cplx(1, 0);
    CHECK_THROWS_AS(gen_fourier_recursive(parse("exp(u)"), c, 6), cost_budget_error);
}

TEST_CASE("quadrature configuration validation and env cap") {
    QuadratureConfig q;
    q.nodes = 48; // not a power of two
    ComponentSet c{{cplx(1, 0), cplx(0.2, 0)}, std::nullopt};
    CHECK_THROWS_AS(gen_fourier_direct(parse("exp(u)"), c, 1, q), std::invalid_argument);
    q.nodes = 64;
    q.rel_tol = 0.0;
    CHECK_THROWS_AS(gen_fourier_direct(parse("exp(u)"), c, 1, q), std::invalid_argument);

    setenv("ADOMIAN_QUAD_MAX_M", "64", 1);
    QuadratureConfig capped;
    CHECK(capped.capped_max_nodes() == 64);
    // cap too small to even double once: adaptivity cannot confirm convergence
    CHECK_THROWS_AS(gen_fourier_direct(parse("exp(u)"), c, 1, capped),
                    quadrature_accuracy_error);
    unsetenv("ADOMIAN_QUAD_MAX_M");
    CHECK_NOTHROW(gen_fourier_direct(parse("exp(u)"), c, 1, capped));
}

TEST_CASE("missing components are reported") {
    ComponentSet c{{cplx(1, 0)}, std::nullopt};
    CHECK_THROWS_AS(gen_fourier_direct(parse("u^2"), c, 3), missing_component_error);
}

TEST_CASE("non-finite samples name the failing node") {
    // exp overflows to infinity at some node of the circle
    ComponentSet c{{cplx(1, 0), cplx(1000, 0)}, std::nullopt};
    try {
        gen_fourier_direct(parse("exp(u)"), c, 1);
        FAIL("expected fourier_domain_error");
    } catch (const fourier_domain_error& e) {
        CHECK(std::string(e.what()).find("node") != std::string::npos);
        CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
}
