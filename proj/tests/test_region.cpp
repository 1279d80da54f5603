#include <doctest.h>

#include "hyperbc/region.hpp"

using namespace hyperbc;

TEST_SUITE_BEGIN("region");

namespace {
BasicSet interval(const std::string& v, double lo, double hi) {
    BasicSet b = BasicSet::over({v});
    b.add(parse_polynomial(v + " - " + std::to_string(lo), {v}));
    b.add(parse_polynomial(std::to_string(hi) + " - " + v, {v}));
    return b;
}
}  // namespace

TEST_CASE("bounding box from univariate affine constraints") {
    BasicSet b = interval("x", -1.0, 2.0).merged_with(interval("y", 0.0, 0.5));
    auto box = b.bounding_box();
    REQUIRE(box.has_value());
    CHECK(box->vars == std::vector<std::string>{"x", "y"});
    CHECK(box->range[0].first == doctest::Approx(-1.0));
    CHECK(box->range[0].second == doctest::Approx(2.0));
    CHECK(box->range[1].second == doctest::Approx(0.5));
}

TEST_CASE("unbounded variable yields no box") {
    BasicSet b = BasicSet::over({"x"});
    b.add(parse_polynomial("x", {"x"}));  // only a lower bound
    CHECK(!b.bounding_box().has_value());
}

TEST_CASE("interval arithmetic proves emptiness") {
    BasicSet b = interval("x", 3.0, 2.0);
    CHECK(b.provably_empty());
    CHECK(!interval("x", 0.0, 1.0).provably_empty());

    BasicSet c = BasicSet::over({"x"});
    c.add(Polynomial::constant(-1.0));
    CHECK(c.provably_empty());
}

TEST_CASE("complement distributes by De Morgan with a gap") {
    BasicSet b = interval("x", 0.0, 1.0);
    SemialgebraicRegion c = complement(b, 0.01);
    REQUIRE(c.clauses.size() == 2);
    // {-(x - 0) - gap >= 0} u {-(1 - x) - gap >= 0}
    CHECK(c.contains({{"x", -0.02}}));
    CHECK(c.contains({{"x", 1.02}}));
    CHECK(!c.contains({{"x", 0.5}}));
    CHECK(!c.contains({{"x", 1.005}}));  // swallowed by the gap
}

TEST_CASE("region membership over unions and intersections") {
    SemialgebraicRegion r1 = SemialgebraicRegion::of(interval("x", 0.0, 1.0));
    SemialgebraicRegion r2 = SemialgebraicRegion::of(interval("x", 2.0, 3.0));
    SemialgebraicRegion u = r1.unite(r2);
    CHECK(u.contains({{"x", 0.5}}));
    CHECK(u.contains({{"x", 2.5}}));
    CHECK(!u.contains({{"x", 1.5}}));

    SemialgebraicRegion i = u.intersect(SemialgebraicRegion::of(interval("x", 0.75, 2.25)));
    CHECK(i.contains({{"x", 0.8}}));
    CHECK(i.contains({{"x", 2.2}}));
    CHECK(!i.contains({{"x", 0.5}}));
}

TEST_CASE("pruning drops provably empty clauses only") {
    SemialgebraicRegion r = SemialgebraicRegion::of(interval("x", 5.0, 4.0))
                                .unite(SemialgebraicRegion::of(interval("x", 0.0, 1.0)));
    auto pruned = r.pruned();
    CHECK(pruned.clauses.size() == 1);
    CHECK(pruned.contains({{"x", 0.5}}));
}

TEST_CASE("constraints outside dim_vars are rejected") {
    BasicSet b = BasicSet::over({"x"});
    CHECK_THROWS_AS(b.add(parse_polynomial("y", {"y"})), PolynomialError);
}

TEST_SUITE_END();
