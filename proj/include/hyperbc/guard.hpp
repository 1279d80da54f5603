/*
 * guard.hpp
 * ---------
 * Edge guards of the specification automata: negation-normal boolean
 * predicates over indexed atoms, evaluated against letters of the zipped
 * alphabet. Guards stay symbolic; satisfiability is decided by valuation
 * enumeration for small atom sets and by a small DPLL otherwise.
 */
#pragma once

#include <string>
#include <vector>

#include "hyperbc/formula.hpp"

namespace hyperbc {

struct Guard {
    enum class Kind { True, False, Lit, And, Or };
    Kind kind = Kind::True;
    AtomRef atom;         // Lit
    bool positive = true; // Lit
    std::vector<Guard> kids;

    static Guard t();
    static Guard f();
    static Guard lit(AtomRef a, bool positive = true);
    static Guard conj(std::vector<Guard> ks);
    static Guard disj(std::vector<Guard> ks);

    bool is_true() const { return kind == Kind::True; }
    bool eval(const Letter& letter) const;
    void collect_atoms(std::vector<AtomRef>& out) const;
    std::vector<AtomRef> atoms() const;
    std::string str() const;

    bool operator==(const Guard& o) const;
};

Guard guard_and(const Guard& a, const Guard& b);
Guard guard_or(const Guard& a, const Guard& b);
Guard guard_negate(const Guard& g);  // De Morgan, NNF preserved

bool satisfiable(const Guard& g);
bool jointly_satisfiable(const Guard& a, const Guard& b);
// truth-table equality over the union of mentioned atoms
bool equivalent(const Guard& a, const Guard& b);

// Disjunctive normal form: list of cubes, each cube a list of literals.
struct GuardCube {
    std::vector<std::pair<AtomRef, bool>> lits;
};
std::vector<GuardCube> to_dnf(const Guard& g);

// guard surface syntax: atom keys, !, &, |, parentheses, true/false
Guard parse_guard(std::string_view src);

}  // namespace hyperbc
