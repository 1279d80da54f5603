#include <doctest.h>

#include "hyperbc/sampling.hpp"

using namespace hyperbc;

TEST_SUITE_BEGIN("sampling");

namespace {
BasicSet box2d(double xlo, double xhi, double ylo, double yhi) {
    BasicSet b = BasicSet::over({"x", "y"});
    b.add(parse_polynomial("x - " + std::to_string(xlo), {"x"}));
    b.add(parse_polynomial(std::to_string(xhi) + " - x", {"x"}));
    b.add(parse_polynomial("y - " + std::to_string(ylo), {"y"}));
    b.add(parse_polynomial(std::to_string(yhi) + " - y", {"y"}));
    return b;
}
}  // namespace

TEST_CASE("grid covers endpoints and degenerate intervals") {
    Box box{{"x", "y"}, {{0.0, 1.0}, {21.0, 21.0}}};
    int count = 0;
    bool saw0 = false, saw1 = false;
    grid_walk(box, 5, [&](std::span<const double> pt) {
        ++count;
        CHECK(pt[1] == 21.0);
        if (pt[0] == 0.0) saw0 = true;
        if (pt[0] == 1.0) saw1 = true;
        return true;
    });
    CHECK(count == 5);
    CHECK(saw0);
    CHECK(saw1);
}

TEST_CASE("rejection sampling stays inside the clause") {
    BasicSet b = box2d(0, 1, 0, 1);
    b.add(parse_polynomial("0.04 - (x - y)^2", {"x", "y"}));  // narrow band
    auto box = b.bounding_box();
    REQUIRE(box);
    ClauseSampler sampler(b, *box, 99);
    long hits = sampler.run(10, 500, [&](std::span<const double> pt) {
        CHECK(std::abs(pt[0] - pt[1]) <= 0.2 + 1e-12);
        return true;
    });
    CHECK(hits > 50);
}

TEST_CASE("identical unit boxes produce an immediate center witness") {
    auto r = SemialgebraicRegion::of(box2d(0, 1, 0, 1));
    auto w = region_overlap_witness(r, r, 10, 1);
    REQUIRE(w.has_value());
    CHECK((*w).at("x") == doctest::Approx(0.5));
    CHECK((*w).at("y") == doctest::Approx(0.5));
}

TEST_CASE("disjoint intervals produce no witness") {
    BasicSet a = BasicSet::over({"x"});
    a.add(parse_polynomial("x", {"x"}));
    a.add(parse_polynomial("1 - x", {"x"}));
    BasicSet b = BasicSet::over({"x"});
    b.add(parse_polynomial("x - 2", {"x"}));
    b.add(parse_polynomial("3 - x", {"x"}));
    auto w = region_overlap_witness(SemialgebraicRegion::of(a), SemialgebraicRegion::of(b),
                                    2000, 1);
    CHECK(!w.has_value());
}

TEST_CASE("witnesses are exact members of both regions") {
    auto r1 = SemialgebraicRegion::of(box2d(0, 2, 0, 2));
    auto r2 = SemialgebraicRegion::of(box2d(1.5, 4, 1.5, 4));
    auto w = region_overlap_witness(r1, r2, 4000, 5);
    REQUIRE(w.has_value());
    CHECK(r1.contains(*w));
    CHECK(r2.contains(*w));
}

TEST_CASE("unbounded overlap query demands explicit bounds") {
    BasicSet a = BasicSet::over({"x"});
    a.add(parse_polynomial("x", {"x"}));  // no upper bound
    CHECK_THROWS_AS(region_overlap_witness(SemialgebraicRegion::of(a),
                                           SemialgebraicRegion::of(a), 100, 1),
                    PolynomialError);
}

TEST_SUITE_END();
