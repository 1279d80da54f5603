/*
 * polynomial.hpp
 * --------------
 * Sparse multivariate polynomials over named variables with double
 * coefficients. This is the universal value type of the toolkit: dynamics,
 * set descriptions, certificates and strategies are all Polynomials.
 *
 * Representation: a map from exponent vectors to coefficients, with the
 * exponent vectors aligned to a canonical (sorted) variable list. Zero
 * coefficients are never stored and unused variables are trimmed, so two
 * equal polynomials compare equal structurally and serialize identically.
 * Terms are ordered graded-lexicographically.
 */
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperbc {

using Exponents = std::vector<std::uint32_t>;

// Graded lexicographic order: total degree first, then lexicographic with
// the earlier variable counting as the bigger one.
struct GradedLex {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

class PolynomialError : public std::runtime_error {
public:
    explicit PolynomialError(const std::string& what, std::size_t pos = std::string::npos)
        : std::runtime_error(what), position(pos) {}
    std::size_t position;
};

class Polynomial {
public:
    using TermMap = std::map<Exponents, double, GradedLex>;

    Polynomial() = default;

    static Polynomial constant(double c);
    static Polynomial variable(const std::string& name);

    const std::vector<std::string>& variables() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    double constant_term() const;
    unsigned degree() const;
    bool mentions(const std::string& var) const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(double c) const;
    Polynomial pow(unsigned e) const;

    bool operator==(const Polynomial& o) const {
        return vars_ == o.vars_ && terms_ == o.terms_;
    }

    // Exact monomial-sum evaluation; throws PolynomialError when the point
    // misses one of the polynomial's variables.
    double eval(const std::map<std::string, double>& point) const;

    // Exact polynomial composition. Variables absent from `sub` stay.
    Polynomial substitute(const std::map<std::string, Polynomial>& sub) const;

    // Simultaneous variable renaming (a special case of substitute that
    // cannot grow the degree).
    Polynomial renamed(const std::map<std::string, std::string>& names) const;

    // Canonical text form, descending graded-lex, explicit '*' and '^'.
    std::string str() const;

private:
    std::vector<std::string> vars_;  // sorted, only variables that occur
    TermMap terms_;

    void add_term(const Exponents& e, double c);
    void normalize();
    friend Polynomial align_add(const Polynomial& a, const Polynomial& b, double sb);
};

// parse_polynomial: decimal literals, identifiers, + - * ^, unary minus and
// parentheses. Exponents are nonnegative integers. Identifiers must be
// listed in `vars`; anything else raises PolynomialError naming the
// offender and its position.
Polynomial parse_polynomial(std::string_view src, const std::vector<std::string>& vars);

// g >= 0 complemented with a strict margin: the set {-g - gap >= 0}
// under-approximates {g < 0}. gap must be positive.
Polynomial negate_inequality(const Polynomial& g, double gap);

// A polynomial re-indexed against a fixed evaluation space for fast
// repeated evaluation on raw coordinate vectors.
class CompiledPoly {
public:
    CompiledPoly() = default;
    CompiledPoly(const Polynomial& p, const std::vector<std::string>& space);
    double operator()(std::span<const double> point) const;

private:
    struct Term {
        std::vector<std::pair<int, std::uint32_t>> factors;  // (space index, exponent)
        double coef;
    };
    std::vector<Term> terms_;
};

}  // namespace hyperbc
