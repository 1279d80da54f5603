#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "hyperbc/hoa.hpp"

using namespace hyperbc;

TEST_SUITE_BEGIN("automata");

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(HYPERBC_FIXTURE_DIR) + "/" + name);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

BuchiAutomaton load_buchi(const std::string& name) {
    return std::get<BuchiAutomaton>(hoa_import(fixture(name)));
}

// (stem+cycle states, pair-set strings) for structural golden comparison
using PairSet = std::set<std::pair<std::string, std::string>>;
std::map<std::string, PairSet> lasso_pair_map(const BuchiAutomaton& aut) {
    std::map<std::string, PairSet> out;
    auto lassos = enumerate_lassos(aut);
    for (std::size_t i = 0; i < lassos.size(); ++i) {
        PairSet ps;
        for (const auto& tp : transition_pairs(lassos[i], static_cast<int>(i)))
            ps.insert({tp.s_A.str(), tp.s_B.str()});
        out[lassos[i].str()] = ps;
    }
    return out;
}

}  // namespace

TEST_CASE("fork example: lassos and pair sets match the printed decomposition") {
    BuchiAutomaton aut = load_buchi("fig2.hoa");
    auto got = lasso_pair_map(prune(aut));
    std::map<std::string, PairSet> want{
        {"(q0,q1,q5,q5)", {{"(a,b)", "(c,d)"}, {"(c,d)", "true"}}},
        {"(q0,q2,q3,q5,q5)",
         {{"(c,d)", "(d,c)"}, {"(d,c)", "(c,d)"}, {"(c,d)", "true"}}},
        {"(q0,q2,q4,q5,q5)",
         {{"(c,d)", "(a,b)"}, {"(a,b)", "(b,a)"}, {"(b,a)", "true"}}},
    };
    CHECK(got == want);
}

TEST_CASE("nondeterministic example: lassos and pair sets") {
    BuchiAutomaton aut = load_buchi("fig3.hoa");
    auto got = lasso_pair_map(prune(aut));
    std::map<std::string, PairSet> want{
        {"(q0,q1,q2,q5,q5)",
         {{"(a,b)", "(b,a)"}, {"(b,a)", "(a,c)"}, {"(a,c)", "true"}}},
        {"(q0,q3,q4,q5,q5)",
         {{"(a,b)", "(b,a)"}, {"(b,a)", "(d,c)"}, {"(d,c)", "true"}}},
        {"(q0,q3,q4,q2,q5,q5)",
         {{"(a,b)", "(b,a)"},
          {"(b,a)", "(c,d)"},
          {"(c,d)", "(a,c)"},
          {"(a,c)", "true"}}},
    };
    CHECK(got == want);
}

TEST_CASE("determinism check") {
    CHECK(!is_deterministic(load_buchi("fig3.hoa")));  // two (a,b) edges at q0
    CHECK(is_deterministic(load_buchi("room_robustness.hoa")));
    BuchiAutomaton loop;
    loop.num_states = 1;
    loop.edges.push_back({0, 0, Guard::t()});
    loop.accepting = {0};
    CHECK(is_deterministic(loop));
}

TEST_CASE("prune keeps lasso cores and empties lasso-free automata") {
    // fig2 is already its own lasso core
    BuchiAutomaton fig2 = load_buchi("fig2.hoa");
    BuchiAutomaton pruned = prune(fig2);
    CHECK(pruned.num_states == fig2.num_states);
    CHECK(lasso_pair_map(pruned) == lasso_pair_map(prune(pruned)));  // idempotent

    // unreachable accepting state disappears
    BuchiAutomaton aut;
    aut.num_states = 3;
    aut.edges.push_back({0, 1, Guard::t()});
    aut.edges.push_back({1, 1, Guard::t()});
    aut.edges.push_back({2, 1, Guard::t()});
    aut.accepting = {1, 2};
    BuchiAutomaton p = prune(aut);
    CHECK(p.num_states == 2);

    // chain with no cycle at the accepting state -> empty
    BuchiAutomaton chain;
    chain.num_states = 2;
    chain.edges.push_back({0, 1, Guard::t()});
    chain.accepting = {1};
    CHECK(prune(chain).empty());
}

TEST_CASE("single accepting self-loop: one lasso, empty stem, no wrap pair") {
    BuchiAutomaton loop;
    loop.num_states = 1;
    loop.edges.push_back({0, 0, Guard::lit({"a", {}})});
    loop.accepting = {0};
    auto lassos = enumerate_lassos(loop);
    REQUIRE(lassos.size() == 1);
    CHECK(lassos[0].stem_guards.empty());
    CHECK(lassos[0].cycle_guards.size() == 1);
    CHECK(transition_pairs(lassos[0]).empty());
}

TEST_CASE("self-loop after one stem edge gives the single pair (g, cycle)") {
    BuchiAutomaton aut;
    aut.num_states = 2;
    aut.edges.push_back({0, 1, Guard::lit({"g", {}})});
    aut.edges.push_back({1, 1, Guard::t()});
    aut.accepting = {1};
    auto lassos = enumerate_lassos(aut);
    REQUIRE(lassos.size() == 1);
    auto pairs = transition_pairs(lassos[0]);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].s_A.str() == "g");
    CHECK(pairs[0].s_B.str() == "true");
}

TEST_CASE("cycles of length two contribute the wrap pair") {
    BuchiAutomaton aut;
    aut.num_states = 2;
    aut.edges.push_back({0, 1, Guard::lit({"x", {}})});
    aut.edges.push_back({1, 0, Guard::lit({"y", {}})});
    aut.accepting = {0};
    auto lassos = enumerate_lassos(aut);
    REQUIRE(lassos.size() == 1);
    auto pairs = transition_pairs(lassos[0]);
    // consecutive (x,y) plus wrap (y,x)
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& tp : pairs) got.insert({tp.s_A.str(), tp.s_B.str()});
    CHECK(got == std::set<std::pair<std::string, std::string>>{{"x", "y"}, {"y", "x"}});
}

TEST_CASE("rabin lasso enumeration tags pair indices") {
    RabinAutomaton ra;
    ra.num_states = 4;
    ra.edges.push_back({0, 1, Guard::lit({"a", {}})});
    ra.edges.push_back({1, 1, Guard::lit({"b", {}})});
    ra.edges.push_back({0, 2, Guard::lit({"c", {}})});
    ra.edges.push_back({2, 3, Guard::lit({"d", {}})});
    ra.pairs.push_back({{1}, {}});   // G = {q1}: cycles
    ra.pairs.push_back({{2}, {0}});  // G = {q2}: no cycle at q2
    auto lassos = enumerate_lassos_rabin(ra);
    REQUIRE(lassos.size() == 1);
    CHECK(lassos[0].rabin_pair == 0);
    CHECK(lassos[0].accepting_state() == 1);

    // two pairs sharing a cycle: listed once per pair index
    RabinAutomaton rb;
    rb.num_states = 2;
    rb.edges.push_back({0, 1, Guard::lit({"a", {}})});
    rb.edges.push_back({1, 1, Guard::lit({"b", {}})});
    rb.pairs.push_back({{1}, {}});
    rb.pairs.push_back({{1}, {0}});
    auto shared = enumerate_lassos_rabin(rb);
    REQUIRE(shared.size() == 2);
    CHECK(shared[0].rabin_pair == 0);
    CHECK(shared[1].rabin_pair == 1);

    // brute-force sanity on the 4-state fixture: exactly the paths
    // q0-a->q1 with cycle q1-b->q1 are G-cycling
    CHECK(lassos[0].str() == "(q0,q1,q1)");
}

TEST_CASE("lasso-word acceptance basics") {
    BuchiAutomaton ga = ltl_to_nba(mk_globally(mk_atom({"a", {}})));
    CHECK(accepts_lasso_word(ga, LassoWord{{}, {{"a"}}}));
    CHECK(!accepts_lasso_word(ga, LassoWord{{}, {Letter{}}}));
    CHECK(!accepts_lasso_word(ga, LassoWord{{{"a"}}, {Letter{}}}));
}

TEST_CASE("ltl_to_nba: canonical G a shape") {
    BuchiAutomaton aut = ltl_to_nba(mk_globally(mk_atom({"a", {}})));
    // after pruning: q0 -> core, every state on the single lasso
    auto lassos = enumerate_lassos(aut);
    REQUIRE(!lassos.empty());
    CHECK(aut.num_states <= 2);  // initial plus the invariant state
    for (const auto& e : aut.edges) CHECK(e.guard.str() == "a");
}

namespace {

LtlPtr random_body(std::mt19937_64& rng, const std::vector<AtomRef>& atoms, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    switch (pick(rng)) {
        case 0:
        case 1: return mk_atom(atoms[rng() % atoms.size()]);
        case 2: return mk_not(random_body(rng, atoms, depth - 1));
        case 3:
            return mk_and(random_body(rng, atoms, depth - 1), random_body(rng, atoms, depth - 1));
        case 4:
            return mk_or(random_body(rng, atoms, depth - 1), random_body(rng, atoms, depth - 1));
        case 5: return mk_next(random_body(rng, atoms, depth - 1));
        case 6:
            return mk_until(random_body(rng, atoms, depth - 1),
                            random_body(rng, atoms, depth - 1));
        case 7:
            return mk_release(random_body(rng, atoms, depth - 1),
                              random_body(rng, atoms, depth - 1));
        case 8: return mk_globally(random_body(rng, atoms, depth - 1));
        default: return mk_eventually(random_body(rng, atoms, depth - 1));
    }
}

LassoWord random_word(std::mt19937_64& rng, const std::vector<AtomRef>& atoms) {
    std::uniform_int_distribution<int> stem_len(0, 4), cycle_len(1, 4);
    LassoWord w;
    int s = stem_len(rng), c = cycle_len(rng);
    while (s + c > 6) {
        c = std::max(1, c - 1);
        s = std::max(0, s - 1);
    }
    auto letter = [&]() {
        Letter l;
        for (const auto& a : atoms)
            if (rng() % 2) l.insert(a.key());
        return l;
    };
    for (int i = 0; i < s; ++i) w.stem.push_back(letter());
    for (int i = 0; i < c; ++i) w.cycle.push_back(letter());
    return w;
}

}  // namespace

TEST_CASE("translation agrees with the semantic evaluator on random pairs") {
    std::mt19937_64 rng(424242);
    std::vector<AtomRef> atoms{{"a", {"p1"}}, {"b", {"p1"}}, {"c", {"p2"}}};
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        LtlPtr body = random_body(rng, atoms, 4);
        BuchiAutomaton aut = ltl_to_nba(body);
        LassoWord w = random_word(rng, atoms);
        bool sem = eval_on_lasso_word(body, w);
        bool aut_acc = accepts_lasso_word(aut, w);
        if (sem != aut_acc) {
            ++mismatches;
            CAPTURE(to_string(body));
            CHECK(sem == aut_acc);
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("deterministic automata have at most one run per sampled word") {
    BuchiAutomaton aut = load_buchi("room_robustness.hoa");
    REQUIRE(is_deterministic(aut));
    std::mt19937_64 rng(7);
    std::vector<AtomRef> atoms;
    for (const auto& e : aut.edges)
        for (const auto& a : e.guard.atoms()) atoms.push_back(a);
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    for (int trial = 0; trial < 100; ++trial) {
        LassoWord w = random_word(rng, atoms);
        // simulate: no state may ever have two enabled outgoing edges
        std::set<int> current{aut.initial};
        auto step = [&](const Letter& l) {
            std::set<int> next;
            for (int q : current) {
                int enabled = 0;
                for (const auto& e : aut.edges)
                    if (e.src == q && e.guard.eval(l)) {
                        ++enabled;
                        next.insert(e.dst);
                    }
                CHECK(enabled <= 1);
            }
            current = next;
        };
        for (const auto& l : w.stem) step(l);
        for (int rep = 0; rep < 3; ++rep)
            for (const auto& l : w.cycle) step(l);
        CHECK(current.size() <= 1);
    }
}

TEST_SUITE_END();
