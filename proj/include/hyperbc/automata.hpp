/*
 * automata.hpp
 * ------------
 * Symbolic-guard omega-automata over the zipped alphabet: Büchi and
 * deterministic Rabin acceptance, pruning to the lasso core, lasso
 * enumeration (simple stem + simple accepting cycle) and consecutive
 * transition-pair extraction.
 */
#pragma once

#include <array>
#include <optional>
#include <set>

#include "hyperbc/guard.hpp"

namespace hyperbc {

struct Edge {
    int src = 0;
    int dst = 0;
    Guard guard;
};

struct BuchiAutomaton {
    int num_states = 0;
    int initial = 0;
    std::vector<Edge> edges;
    std::set<int> accepting;
    std::vector<std::string> state_names;  // optional; defaults to q<i>

    std::string name_of(int s) const;
    std::vector<const Edge*> out_edges(int s) const;
    bool empty() const { return num_states == 0; }
};

struct RabinPair {
    std::set<int> G;  // visit infinitely often
    std::set<int> B;  // visit finitely often
};

struct RabinAutomaton {
    int num_states = 0;
    int initial = 0;
    std::vector<Edge> edges;
    std::vector<RabinPair> pairs;
    std::vector<std::string> state_names;

    std::string name_of(int s) const;
};

struct Lasso {
    std::vector<int> stem_states;      // q0 .. q_a (at least the accepting state)
    std::vector<int> cycle_states;     // q_a .. q_a
    std::vector<Guard> stem_guards;    // one per stem edge
    std::vector<Guard> cycle_guards;   // one per cycle edge
    int rabin_pair = -1;               // index into RabinAutomaton::pairs, -1 for Büchi

    int accepting_state() const { return stem_states.back(); }
    // true when the consecutive state triple (r, r', r'') occurs on the
    // lasso's unrolling (stem followed by the repeated cycle)
    bool has_triple(int r, int r1, int r2) const;
    bool has_edge(int r, int r1) const;
    std::string str() const;  // e.g. (q0,q1,q5,q5)
};

struct TransitionPair {
    Guard s_A;
    Guard s_B;
    int lasso_id = -1;
    int position = 0;                       // index into the lasso's guard sequence
    std::array<int, 3> states{-1, -1, -1};  // (r, r', r'') provenance
    std::string str() const;
};

// Drops states that are unreachable from the initial state or cannot reach
// an accepting state lying on a cycle, along with their transitions and any
// edge whose guard is unsatisfiable. An empty result means no accepting
// lasso exists at all.
BuchiAutomaton prune(const BuchiAutomaton& aut);

// Outgoing guards pairwise unsatisfiable at every state (completeness is
// not required).
bool is_deterministic(const BuchiAutomaton& aut);
bool is_deterministic(const RabinAutomaton& aut);

// All (simple stem, simple cycle) lassos, deterministic order.
std::vector<Lasso> enumerate_lassos(const BuchiAutomaton& aut);

// Lassos whose cycle meets some G_j; one entry per (lasso, pair index).
std::vector<Lasso> enumerate_lassos_rabin(const RabinAutomaton& aut);

// Consecutive guard pairs along stem+cycle; cycles of length >= 2
// additionally contribute the wrap pair (last cycle guard, first cycle
// guard), since denying a lasso must cut its infinite unrolling.
std::vector<TransitionPair> transition_pairs(const Lasso& l, int lasso_id = -1);

// Membership of an ultimately-periodic word: product construction plus
// accepting-cycle search on the cycle layer.
bool accepts_lasso_word(const BuchiAutomaton& aut, const LassoWord& word);

// Tableau LTL -> NBA translation (generalized Büchi with counter-based
// degeneralization); accepts any body, rewrites to the minimal basis
// internally. Guards come out as conjunctions of atom literals.
BuchiAutomaton ltl_to_nba(const LtlPtr& body);

}  // namespace hyperbc
