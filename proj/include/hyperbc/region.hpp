/*
 * region.hpp
 * ----------
 * Basic semialgebraic sets (conjunctions of polynomial inequalities
 * g_i(x) >= 0) and finite unions of them. Guards of the specification
 * automata denote such regions over the augmented state.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperbc/polynomial.hpp"

namespace hyperbc {

// Axis-aligned bounding box over named variables.
struct Box {
    std::vector<std::string> vars;
    std::vector<std::pair<double, double>> range;  // [lo, hi] per var

    std::size_t dim() const { return vars.size(); }
    std::vector<double> center() const;
    bool contains(std::span<const double> point) const;
};

struct BasicSet {
    std::vector<std::string> dim_vars;  // sorted
    std::vector<Polynomial> gs;         // conjunction, every poly over dim_vars

    static BasicSet over(std::vector<std::string> vars);
    static BasicSet trivially_true(std::vector<std::string> vars);

    void add(Polynomial g);                    // dedupes structurally equal constraints
    bool contains(const std::map<std::string, double>& point, double slack = 0.0) const;

    // Interval bounds per variable harvested from univariate affine
    // constraints a*x + b >= 0; nullopt when some variable stays unbounded.
    std::optional<Box> bounding_box() const;

    // True only when interval arithmetic on the univariate affine
    // constraints proves emptiness. Never a false positive.
    bool provably_empty() const;

    BasicSet renamed(const std::map<std::string, std::string>& names) const;
    BasicSet merged_with(const BasicSet& other) const;  // conjunction
};

struct SemialgebraicRegion {
    std::vector<BasicSet> clauses;  // union of basic sets; share dim_vars

    static SemialgebraicRegion of(BasicSet b);
    static SemialgebraicRegion empty(std::vector<std::string> vars);

    bool is_empty_syntactically() const { return clauses.empty(); }
    const std::vector<std::string>& dim_vars() const;
    bool contains(const std::map<std::string, double>& point, double slack = 0.0) const;

    SemialgebraicRegion intersect(const SemialgebraicRegion& o) const;
    SemialgebraicRegion unite(const SemialgebraicRegion& o) const;

    // Drops clauses whose interval relaxation is provably empty.
    SemialgebraicRegion pruned() const;
};

// Complement of a conjunction by De Morgan: one clause per negated
// constraint, each inequality flipped with the configured gap.
SemialgebraicRegion complement(const BasicSet& b, double gap);

}  // namespace hyperbc
