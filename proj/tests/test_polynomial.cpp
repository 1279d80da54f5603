#include <doctest.h>

#include <random>

#include "hyperbc/polynomial.hpp"

using namespace hyperbc;

TEST_SUITE_BEGIN("polysys");

TEST_CASE("parse vehicle position update") {
    // sampling time 1, so s + 1*v + 0.5*w
    Polynomial p = parse_polynomial("s + 1*v + 0.5*w", {"s", "v", "w"});
    CHECK(p.variables() == std::vector<std::string>{"s", "v", "w"});
    CHECK(p.eval({{"s", 0.0}, {"v", 0.5}, {"w", 0.04}}) == doctest::Approx(0.52).epsilon(1e-12));
    CHECK(p.degree() == 1);
}

TEST_CASE("parse zero polynomial over empty variable set") {
    Polynomial p = parse_polynomial("0", {});
    CHECK(p.is_zero());
    CHECK(p.eval({{"anything", 3.0}}) == 0.0);
    CHECK(p.str() == "0");
}

TEST_CASE("binomial expansion by hand") {
    Polynomial p = parse_polynomial("(v__1 - v__2)^2", {"v__1", "v__2"});
    Polynomial expected =
        parse_polynomial("v__1^2 - 2*v__1*v__2 + v__2^2", {"v__1", "v__2"});
    CHECK(p == expected);
    CHECK(p.str() == "v__1^2 - 2*v__1*v__2 + v__2^2");
}

TEST_CASE("parse errors carry positions and offenders") {
    CHECK_THROWS_WITH_AS(parse_polynomial("x + q", {"x"}),
                         doctest::Contains("unknown variable 'q'"), PolynomialError);
    CHECK_THROWS_AS(parse_polynomial("x ^ -2", {"x"}), PolynomialError);
    CHECK_THROWS_AS(parse_polynomial("x + ", {"x"}), PolynomialError);
    try {
        parse_polynomial("x * (y", {"x", "y"});
        FAIL("expected throw");
    } catch (const PolynomialError& e) {
        CHECK(e.position != std::string::npos);
    }
}

TEST_CASE("eval requires every variable") {
    Polynomial p = parse_polynomial("x*y", {"x", "y"});
    CHECK_THROWS_WITH_AS(p.eval({{"x", 1.0}}), doctest::Contains("missing variable"),
                         PolynomialError);
}

TEST_CASE("room certificate value pinned at the shared initial point") {
    // independent arithmetic oracle: 441*(1.3402 - 1.8137 + 1.2559)
    //   - 21*(19.6699 + 15.8439) + 399.7534 = -0.998
    Polynomial b = parse_polynomial(
        "1.3402*T__1^2 - 1.8137*T__1*T__2 - 19.6699*T__1 + 1.2559*T__2^2 "
        "- 15.8439*T__2 + 399.7534",
        {"T__1", "T__2"});
    CHECK(b.eval({{"T__1", 21.0}, {"T__2", 21.0}}) == doctest::Approx(-0.998).epsilon(1e-11));
}

TEST_CASE("substitution: binomial shift") {
    Polynomial b = parse_polynomial("x^2", {"x"});
    Polynomial shifted = b.substitute({{"x", parse_polynomial("x + 1", {"x"})}});
    CHECK(shifted == parse_polynomial("x^2 + 2*x + 1", {"x"}));
}

TEST_CASE("identity substitution returns structural equal") {
    Polynomial b = parse_polynomial("3*x^2*y - y + 0.25", {"x", "y"});
    Polynomial same = b.substitute({{"x", Polynomial::variable("x")}});
    CHECK(same == b);
}

TEST_CASE("composition and evaluation commute") {
    // eval(substitute(B, f), z) == eval(B, f(z)) within 1e-9 relative
    Polynomial B = parse_polynomial("x^2 - 0.5*x*y + y^2 - 2", {"x", "y"});
    Polynomial fx = parse_polynomial("0.9*x + 0.1*y^2", {"x", "y"});
    Polynomial fy = parse_polynomial("y - 0.05*x*y", {"x", "y"});
    Polynomial composed = B.substitute({{"x", fx}, {"y", fy}});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        std::map<std::string, double> z{{"x", dist(rng)}, {"y", dist(rng)}};
        double direct = B.eval({{"x", fx.eval(z)}, {"y", fy.eval(z)}});
        double via = composed.eval(z);
        CHECK(via == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("serialize then parse is identity on canonical form") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_int_distribution<int> expn(0, 3);
    std::vector<std::string> vars{"a", "b", "c"};
    for (int trial = 0; trial < 100; ++trial) {
        Polynomial p;
        for (int t = 0; t < 5; ++t) {
            Polynomial term = Polynomial::constant(coef(rng));
            for (const auto& v : vars) term = term * Polynomial::variable(v).pow(expn(rng));
            p = p + term;
        }
        Polynomial back = parse_polynomial(p.str(), vars);
        CHECK(back == p);
    }
}

TEST_CASE("negate_inequality shifts by the gap") {
    Polynomial g = parse_polynomial("0.0225 - d^2", {"d"});
    Polynomial n = negate_inequality(g, 0.01);
    CHECK(n == parse_polynomial("d^2 - 0.0325", {"d"}));

    // complement of the empty set is (almost) everything
    Polynomial never = Polynomial::constant(-1.0);
    CHECK(negate_inequality(never, 0.01) == Polynomial::constant(0.99));

    CHECK_THROWS_AS(negate_inequality(g, 0.0), PolynomialError);
}

TEST_CASE("double negation lowers g by exactly twice the gap") {
    Polynomial g = parse_polynomial("x^2 - 3*x + 1", {"x"});
    Polynomial twice = negate_inequality(negate_inequality(g, 0.01), 0.01);
    CHECK(twice == g - Polynomial::constant(0.02));
}

TEST_CASE("compiled evaluation matches map evaluation") {
    Polynomial p = parse_polynomial("2*x^3 - x*y + 4*y^2 - 7", {"x", "y"});
    CompiledPoly c(p, {"y", "x", "unused"});
    std::vector<double> pt{1.5, -2.0, 99.0};  // y, x, unused
    CHECK(c(pt) == doctest::Approx(p.eval({{"x", -2.0}, {"y", 1.5}})).epsilon(1e-14));
}

TEST_SUITE_END();
