/*
 * hoa.hpp
 * -------
 * Hanoi Omega-Automata (v1) text import/export for the Büchi and Rabin
 * acceptance conditions used here. AP strings of the form "a[p1]" or
 * "a[p1,p2]" map onto indexed atoms; anything else is an opaque
 * letter-level atom.
 */
#pragma once

#include <variant>

#include "hyperbc/automata.hpp"

namespace hyperbc {

class HoaError : public std::runtime_error {
public:
    explicit HoaError(const std::string& what) : std::runtime_error(what) {}
};

using HoaAutomaton = std::variant<BuchiAutomaton, RabinAutomaton>;

HoaAutomaton hoa_import(std::string_view text);

std::string hoa_export(const BuchiAutomaton& aut);
std::string hoa_export(const RabinAutomaton& aut);

// parses "name", "name[p1]" or "name[p1,p2]"
AtomRef atom_ref_from_ap(const std::string& ap);

}  // namespace hyperbc
