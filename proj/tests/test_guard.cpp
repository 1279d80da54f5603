#include <doctest.h>

#include "hyperbc/guard.hpp"

using namespace hyperbc;

TEST_SUITE_BEGIN("guard");

TEST_CASE("evaluation over letters") {
    Guard g = guard_and(Guard::lit({"a1", {"p1"}}), Guard::lit({"a2", {"p2"}}, false));
    CHECK(g.eval({"a1[p1]"}));
    CHECK(!g.eval({"a1[p1]", "a2[p2]"}));
    CHECK(!g.eval({}));
}

TEST_CASE("satisfiability and joint satisfiability") {
    Guard a = Guard::lit({"a", {}});
    CHECK(satisfiable(a));
    CHECK(!satisfiable(guard_and(a, guard_negate(a))));
    Guard b = Guard::lit({"b", {}});
    CHECK(jointly_satisfiable(a, b));
    CHECK(!jointly_satisfiable(a, guard_negate(a)));
    CHECK(satisfiable(Guard::t()));
    CHECK(!satisfiable(Guard::f()));
}

TEST_CASE("equivalence by truth table") {
    Guard a = Guard::lit({"a", {}}), b = Guard::lit({"b", {}});
    // De Morgan
    CHECK(equivalent(guard_negate(guard_and(a, b)),
                     guard_or(guard_negate(a), guard_negate(b))));
    CHECK(!equivalent(a, b));
    CHECK(equivalent(guard_and(a, Guard::t()), a));
}

TEST_CASE("DNF expansion prunes clashing cubes") {
    Guard a = Guard::lit({"a", {}}), b = Guard::lit({"b", {}});
    Guard g = guard_and(guard_or(a, b), guard_negate(a));
    auto dnf = to_dnf(g);
    REQUIRE(dnf.size() == 1);  // (a & !a) dropped
    CHECK(dnf[0].lits.size() == 2);
}

TEST_CASE("guard parsing round-trips printable forms") {
    Guard g = parse_guard("a1[p1] & a1[p2]");
    CHECK(g.kind == Guard::Kind::And);
    CHECK(g.str() == "a1[p1] & a1[p2]");

    Guard h = parse_guard("!a1[p1] | !a1[p2]");
    CHECK(h.str() == "!a1[p1] | !a1[p2]");

    Guard joint = parse_guard("a3[p1,p2]");
    CHECK(joint.atom.traces.size() == 2);

    CHECK(parse_guard("true").is_true());
    CHECK(equivalent(parse_guard("(a1[p1] | a1[p2]) & true"),
                     parse_guard("a1[p1] | a1[p2]")));
}

TEST_SUITE_END();
