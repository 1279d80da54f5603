/*
 * abc.hpp
 * -------
 * Augmented barrier certificates: candidate representation, the three
 * defining conditions checked by independent numeric sampling, and
 * trajectory simulation of the augmented system under a strategy.
 *
 * A candidate certifies the conditional invariance "once in A, never in B"
 * of the augmented system when it is nonpositive on A (initial), at least
 * epsilon on B (unsafe), and non-increasing along one step of the dynamics
 * with every existential input resolved by its strategy polynomial.
 * The decrease guarantee of the sum-of-squares construction only covers
 * points where the strategy values stay inside the input set, so the
 * decrease check is evaluated there and strategy feasibility is measured
 * and reported separately.
 */
#pragma once

#include "hyperbc/formula.hpp"
#include "hyperbc/sampling.hpp"
#include "hyperbc/system.hpp"

namespace hyperbc {

struct ConditionalInvariance {
    std::vector<Quant> prefix;  // quantifier of copy i at index i-1
    SemialgebraicRegion set_A;
    SemialgebraicRegion set_B;
    std::string provenance;  // printable transition-pair origin
};

struct CertificateCandidate {
    Polynomial B;                                   // over augmented state vars
    std::map<std::string, Polynomial> strategies;   // existential input var -> h
    double epsilon = 0.0;                           // strict-positivity margin on set_B
};

enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);

struct CheckReport {
    std::string condition;  // "initial(5)" | "unsafe(6)" | "decrease(7)"
    Verdict verdict = Verdict::Inconclusive;
    long samples = 0;
    double worst_violation = 0.0;  // > 0 means the condition was violated
    std::map<std::string, double> witness;
    std::uint64_t seed = 0;
    double tol = 0.0;
    std::string note;

    // decrease-only strategy feasibility diagnostics
    long strategy_infeasible = 0;
    double worst_strategy_violation = 0.0;
    std::map<std::string, double> strategy_witness;

    bool passed() const { return verdict == Verdict::Pass; }
};

CheckReport check_initial(const CertificateCandidate& c, const ConditionalInvariance& ci,
                          const SampleConfig& cfg);
CheckReport check_unsafe(const CertificateCandidate& c, const ConditionalInvariance& ci,
                         const SampleConfig& cfg);
CheckReport check_decrease(const CertificateCandidate& c, const ConditionalInvariance& ci,
                           const AugmentedSystem& aug, const SampleConfig& cfg);

std::array<CheckReport, 3> check_ci(const CertificateCandidate& c,
                                    const ConditionalInvariance& ci, const AugmentedSystem& aug,
                                    const SampleConfig& cfg);

// The p = 1, all-universal special case over a plain system.
std::array<CheckReport, 3> check_classic_bc(const Polynomial& B, const DynamicalSystem& sys,
                                            const BasicSet& A, const BasicSet& Bset,
                                            double epsilon, const SampleConfig& cfg);

// One simulation step: existential inputs resolved by strategies,
// universal inputs supplied by the caller.
std::map<std::string, double> simulate_step(const AugmentedSystem& aug,
                                            const CertificateCandidate& c,
                                            const std::vector<Quant>& prefix,
                                            const std::map<std::string, double>& state,
                                            const std::map<std::string, double>& universal_inputs);

}  // namespace hyperbc
