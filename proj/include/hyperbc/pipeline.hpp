/*
 * pipeline.hpp
 * ------------
 * Problem-spec ingestion and the verification drivers: the general
 * common-certificate search over lasso decompositions, the forall*exists*
 * procedure with per-state certificate discovery, and the Rabin variant
 * for overrides that cannot be expressed as deterministic Büchi automata.
 */
#pragma once

#include <filesystem>

#include <nlohmann/json_fwd.hpp>

#include "hyperbc/abc.hpp"
#include "hyperbc/automata.hpp"
#include "hyperbc/hoa.hpp"
#include "hyperbc/sdpa.hpp"

namespace hyperbc {

struct AtomSpec {
    AtomDecl decl;
    std::vector<Polynomial> gs;  // single: over base state vars; joint: slot vars v__k
};

struct PipelineOptions {
    Degrees degrees;
    double epsilon = 1e-2;        // strict-positivity margin of condition (6)
    double negation_gap = 1e-2;   // complement approximation gap
    double synth_tol = 1e-6;      // numeric tolerance for synthesized certificates
    SampleConfig samples;
    long overlap_budget = 4000;   // samples for the overlap pre-check
    int oracle_budget = 64;       // SDP feasibility calls per search
    std::string sdp_solver;       // empty: consult HYPERBC_SDP_SOLVER, else unavailable
    std::vector<std::string> assumed_unreachable_initial_guards;
    std::string automaton_override;  // HOA path, relative to the spec file
};

struct ProblemSpec {
    std::string name;
    int schema_version = 1;
    DynamicalSystem system;
    std::map<std::string, AtomSpec> atoms;
    std::string formula_src;
    HyperLTLFormula formula;
    PipelineOptions options;
    std::filesystem::path base_dir;

    static ProblemSpec load(const std::filesystem::path& file);
    static ProblemSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

    std::string resolved_solver() const;  // options, then environment override
};

class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// Instantiated problem: augmented system, atom regions and the negated
// specification automaton (constructed or loaded).
class Instance {
public:
    explicit Instance(const ProblemSpec& spec);

    const ProblemSpec& spec;
    AugmentedSystem aug;
    std::vector<Quant> prefix;
    LtlPtr negated_body;                 // NNF of the negated body
    std::optional<HoaAutomaton> override_aut;

    BuchiAutomaton negation_automaton() const;   // override or ltl_to_nba
    bool has_rabin_override() const;
    const RabinAutomaton& rabin_override() const;

    // (L^p)^{-1} of a guard: literal regions intersected clause-wise and
    // conjoined with the augmented state box
    SemialgebraicRegion region_of_guard(const Guard& g) const;
    SemialgebraicRegion region_of_atom(const AtomRef& a, bool positive) const;

    ConditionalInvariance make_ci(const TransitionPair& tp) const;

private:
    BasicSet atom_basic_set(const AtomRef& a) const;
};

struct PairLedger {
    std::string s_A, s_B;
    std::array<int, 3> states{-1, -1, -1};
    std::string status;  // eligible | overlap-witness | vacuous-empty-region
    std::map<std::string, double> witness;
};

struct LassoLedger {
    int id = 0;
    std::string states;
    std::vector<PairLedger> pairs;
    std::string resolution;  // certificate | assumed-unreachable-initial |
                             // vacuous-empty-region | undischarged
    int certificate = -1;
};

struct CertificateRecord {
    CertificateCandidate candidate;
    std::vector<std::string> pair_keys;
    GramValidation gram;
    std::vector<CheckReport> checks;  // three per covered invariance
    bool all_passed = false;
};

struct VerificationReport {
    enum class Verdict { Satisfied, Inconclusive } verdict = Verdict::Inconclusive;
    std::string algorithm;
    std::string cause;  // no-pair | sdp-infeasible | solver-missing |
                        // nondeterministic-automaton | "" when satisfied
    std::vector<std::string> flags;
    std::uint64_t seed = 0;
    int automaton_states = 0;
    bool automaton_deterministic = false;
    std::string automaton_source;  // constructed | override
    std::vector<LassoLedger> lassos;
    std::vector<CertificateRecord> certificates;
    long oracle_calls = 0;
    double wall_seconds = 0.0;

    nlohmann::json to_json(bool include_timing = true) const;
};

VerificationReport verify_general(const ProblemSpec& spec);        // Algorithm 1 shape
VerificationReport verify_forall_exists(const ProblemSpec& spec);  // Algorithms 2-3 shape
VerificationReport verify_rabin(const ProblemSpec& spec);
VerificationReport verify_auto(const ProblemSpec& spec);

// Exhaustive-up-to-budget search for one pair per lasso admitting a common
// certificate; selections are tried in order of increasing distinct-pair
// count with memoized oracle calls.
std::optional<std::vector<int>> selection_search(
    const std::vector<std::vector<std::string>>& pair_keys_per_lasso,
    const std::function<bool(const std::set<std::string>&)>& oracle, int budget);

// The breadth-first denial schedule of the forall*exists* procedure,
// parameterized over the pair pre-checks and the certificate oracle so the
// traversal is testable in isolation. Per state and outgoing label, the
// candidate pair set S is shrunk greedily (all of S, then one pair dropped
// at a time) until the oracle accepts.
struct SchedulePairInfo {
    TransitionPair tp;
    std::string key;
    enum class Status { Eligible, Ineligible, Vacuous } status;
};

struct ScheduleOutcome {
    std::vector<std::string> lasso_resolution;  // per lasso id
    std::vector<int> lasso_certificate;         // -1 when not certificate-denied
    long oracle_calls = 0;
};

ScheduleOutcome forall_exists_schedule(
    int num_states, int initial, const std::vector<Edge>& edges,
    const std::vector<Lasso>& lassos,
    const std::function<SchedulePairInfo(const TransitionPair&)>& classify_pair,
    const std::function<std::optional<int>(const std::set<std::string>&)>& oracle,
    const std::vector<bool>& pre_denied);

}  // namespace hyperbc
