/*
 * system.hpp
 * ----------
 * Discrete-time polynomial dynamical systems and their p-fold
 * self-composition. Copy i of a base variable v is named v__i.
 */
#pragma once

#include <string>
#include <vector>

#include "hyperbc/region.hpp"

namespace hyperbc {

struct DynamicalSystem {
    std::vector<std::string> state_vars;
    std::vector<std::string> input_vars;  // empty for closed systems
    std::vector<Polynomial> f;            // one component per state var, over state+input vars
    BasicSet state_set;                   // over state_vars
    BasicSet input_set;                   // over input_vars (trivially true when closed)

    bool closed() const { return input_vars.empty(); }
    void validate() const;  // throws on arity or variable-scope violations
};

struct AugmentedSystem {
    int p = 1;
    DynamicalSystem base;
    std::vector<std::string> state_vars;  // copy-major: all of copy 1, then copy 2, ...
    std::vector<std::string> input_vars;
    std::vector<Polynomial> f;            // p*n components, (copy i, component j)
    BasicSet state_set;                   // conjunction of renamed copies
    BasicSet input_set;

    // variables belonging to one copy, in base order
    std::vector<std::string> copy_state_vars(int copy) const;
    std::vector<std::string> copy_input_vars(int copy) const;
};

std::string copy_name(const std::string& base_var, int copy);

// Cartesian-power construction: copy i evolves under base.f with every
// variable v renamed to v__i.
AugmentedSystem self_compose(const DynamicalSystem& sys, int p);

}  // namespace hyperbc
