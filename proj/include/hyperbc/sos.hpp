/*
 * sos.hpp
 * -------
 * Reduction of augmented-barrier-certificate existence to one semidefinite
 * feasibility program: decision variables are the coefficients of B and of
 * the strategy polynomials plus one PSD Gram matrix per sum-of-squares
 * multiplier and per master expression; constraints match coefficients
 * monomial by monomial.
 *
 * Conditioning: the program is built in normalized coordinates (every
 * state/input variable mapped affinely onto [-1,1] from its box). The
 * affine change of variables preserves sums of squares both ways, and the
 * reconstruction maps certificates back to problem coordinates exactly.
 */
#pragma once

#include <optional>

#include "hyperbc/abc.hpp"

namespace hyperbc {

struct MonomialBasis {
    std::vector<std::string> vars;
    std::vector<Exponents> monos;  // graded-lex ascending, constant first

    int index_of(const Exponents& e) const;  // -1 when absent
    std::size_t size() const { return monos.size(); }
    Polynomial monomial(std::size_t i) const;
};

MonomialBasis make_basis(const std::vector<std::string>& vars, unsigned maxdeg);

// Affine expression over decision variables: sum coef_i * x_{var_i} + constant.
struct AffineExpr {
    std::map<int, double> terms;
    double constant = 0.0;

    void add(int var, double coef);
};

// Polynomial whose coefficients are AffineExpr in the decision variables.
class DecisionPoly {
public:
    DecisionPoly() = default;
    // known polynomial scaled by one decision variable (var < 0: constant 1)
    void accumulate(const Polynomial& known, int var, double scale,
                    const std::vector<std::string>& space);
    const std::map<Exponents, AffineExpr, GradedLex>& coeffs() const { return coeffs_; }

private:
    std::map<Exponents, AffineExpr, GradedLex> coeffs_;
};

struct GramBlock {
    std::string name;
    MonomialBasis basis;
    int first_var = 0;  // decision index of svec entry (0,0)

    int var_of(int i, int j) const;  // i <= j, 0-based upper triangle
    int dim() const { return static_cast<int>(basis.size()); }
};

struct Degrees {
    unsigned certificate = 2;  // d_B
    unsigned multiplier = 2;   // d_lambda (must be even)
    unsigned strategy = 2;     // d_h
};

class SosProgram {
public:
    // decision variable bookkeeping
    int n_free = 0;                 // free coefficient variables come first
    std::vector<GramBlock> blocks;  // then svec entries block by block
    int total_vars = 0;

    // equalities: affine(decision) == 0, stored with the constant folded in
    std::vector<AffineExpr> equalities;

    // reconstruction metadata
    std::vector<std::string> zvars;                 // normalized variable names
    std::map<std::string, double> center, radius;   // x = center + radius * z
    MonomialBasis b_basis;                          // B's monomials (z space)
    int b_first = 0;
    std::map<std::string, std::pair<MonomialBasis, int>> h_bases;  // input var -> basis, first id
    double epsilon = 0.0;

    int add_free();
    GramBlock& add_gram(const std::string& name, MonomialBasis basis);

    // coefficient matching: expr == m^T Q m for a fresh Gram block over
    // `basis`; emits one equality per representable monomial.
    GramBlock& coefficient_match(const DecisionPoly& expr, MonomialBasis basis,
                                 const std::string& name);
};

class SosError : public std::runtime_error {
public:
    explicit SosError(const std::string& what) : std::runtime_error(what) {}
};

// One SOS feasibility program whose solution is a single common ABC (plus
// strategies) for all the given conditional invariances: the initial and
// unsafe conditions are instantiated per region clause, the decrease
// condition once.
SosProgram build_sos_program(const std::vector<ConditionalInvariance>& cis,
                             const AugmentedSystem& aug, const std::vector<Quant>& prefix,
                             const Degrees& degrees, double epsilon);

struct SdpSolution;  // sdpa.hpp

CertificateCandidate reconstruct_certificate(const SdpSolution& sol, const SosProgram& prog);

}  // namespace hyperbc
