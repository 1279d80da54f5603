/*
 * formula.hpp
 * -----------
 * HyperLTL surface syntax, immutable AST, negation normal form, prefix
 * fragment classification and exact LTL semantics on ultimately-periodic
 * words. Indexed atoms carry the trace variables they apply to; joint
 * atoms name several traces at once and must be applied with their full
 * declared arity.
 */
#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <stdexcept>

namespace hyperbc {

enum class Quant { Forall, Exists };

struct AtomRef {
    std::string name;
    std::vector<std::string> traces;  // empty = opaque letter-level atom

    // canonical key, e.g. "a1[p1]", "a3[p1,p2]", or just "ab"
    std::string key() const;
    bool operator==(const AtomRef&) const = default;
    auto operator<=>(const AtomRef&) const = default;
};

enum class LtlOp {
    Atom,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Release,
    Globally,
    Eventually
};

struct LtlNode;
using LtlPtr = std::shared_ptr<const LtlNode>;

struct LtlNode {
    LtlOp op;
    AtomRef atom;              // Atom only
    std::vector<LtlPtr> kids;  // 1 for unary, 2 for binary
};

LtlPtr mk_atom(AtomRef a);
LtlPtr mk_true();
LtlPtr mk_false();
LtlPtr mk_not(LtlPtr a);
LtlPtr mk_and(LtlPtr a, LtlPtr b);
LtlPtr mk_or(LtlPtr a, LtlPtr b);
LtlPtr mk_implies(LtlPtr a, LtlPtr b);
LtlPtr mk_next(LtlPtr a);
LtlPtr mk_until(LtlPtr a, LtlPtr b);
LtlPtr mk_release(LtlPtr a, LtlPtr b);
LtlPtr mk_globally(LtlPtr a);
LtlPtr mk_eventually(LtlPtr a);

bool ast_equal(const LtlPtr& a, const LtlPtr& b);
std::string to_string(const LtlPtr& body);

struct AtomDecl {
    enum class Scope { Single, Joint };
    Scope scope = Scope::Single;
    int arity = 1;
};

class FormulaError : public std::runtime_error {
public:
    FormulaError(const std::string& what, std::size_t pos = std::string::npos)
        : std::runtime_error(what), position(pos) {}
    std::size_t position;
};

struct FragmentClass {
    enum class Kind { AllUniversal, AllExistential, ForallStarExistsStar, General };
    Kind kind;
    int leading_foralls = 0;  // the l of forall^l exists^(p-l), when applicable
    int alternations = 0;

    // true when the prefix matches forall* exists* (includes the all-universal
    // and all-existential degenerate cases)
    bool forall_exists_shaped() const { return kind != Kind::General; }
    std::string str() const;
};

struct HyperLTLFormula {
    std::vector<std::pair<Quant, std::string>> prefix;
    LtlPtr body;

    int trace_count() const { return static_cast<int>(prefix.size()); }
    int copy_index(const std::string& trace_var) const;  // 1-based, throws if unbound
    std::string str() const;
};

// Prenex-only parser. `forall p.` / `exists p.` prefix, body over
// ! & | -> X U R G F true false and atoms a[p] / a[p1,p2].
HyperLTLFormula parse_hyperltl(std::string_view src,
                               const std::map<std::string, AtomDecl>& decls);

FragmentClass classify(const HyperLTLFormula& f);

// ¬body in negation normal form via Until/Release and Globally/Eventually
// duality; Implies is expanded.
LtlPtr negate_to_nnf(const LtlPtr& body);

// Rewrite to the {X, U, R, And, Or, literals} basis (input must be in NNF,
// or negation-free down to atoms).
LtlPtr to_minimal_basis(const LtlPtr& body);

// ---------------------------------------------------------------------------
// ultimately-periodic words

using Letter = std::set<std::string>;  // atom keys holding at a position

struct LassoWord {
    std::vector<Letter> stem;
    std::vector<Letter> cycle;  // nonempty
};

// Exact satisfaction of a quantifier-free body on a zipped
// ultimately-periodic word (fixpoint evaluation over stem + cycle).
bool eval_on_lasso_word(const LtlPtr& body, const LassoWord& word);

// Zips p per-trace words (letters of single-atom names) into one word over
// indexed-atom keys; stems are padded to the longest stem and the cycle is
// the lcm unrolling.
LassoWord zip_traces(const std::vector<LassoWord>& traces,
                     const std::vector<std::string>& trace_vars);

}  // namespace hyperbc
