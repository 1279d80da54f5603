/*
 * sdpa.hpp
 * --------
 * Sparse SDPA problem emission, CSDP/SDPA-style solution parsing, external
 * solver invocation and PSD validation of solved Gram blocks.
 *
 * Encoding: one PSD block per Gram matrix in program order, then one
 * diagonal block holding a (u, v) pair per free variable with value u - v.
 * Constraint i states tr(F_i Y) = c_i, the i-th coefficient-matching
 * equality.
 */
#pragma once

#include <filesystem>

#include <Eigen/Dense>

#include "hyperbc/sos.hpp"

namespace hyperbc {

struct SdpProblem {
    // block sizes: positive = PSD, negative = diagonal
    std::vector<int> block_sizes;
    std::vector<double> rhs;
    // quintuples (matno, blkno, i, j, value); matno 0 is the objective
    struct Entry {
        int matno, blkno, i, j;
        double value;
    };
    std::vector<Entry> entries;
};

struct SdpSolution {
    std::vector<double> y;
    std::vector<Eigen::MatrixXd> blocks;  // dense symmetric, one per block
};

// deterministic: identical problems serialize to identical bytes
SdpProblem to_sdp_problem(const SosProgram& prog);
std::string export_sdpa(const SdpProblem& p);

SdpSolution import_solution(std::string_view text, const SdpProblem& p);

struct GramValidation {
    bool ok = false;
    double min_eigenvalue = 0.0;
    double max_equality_residual = 0.0;
    std::vector<std::string> failures;
};

GramValidation validate_gram(const SdpSolution& sol, const SosProgram& prog, double tol);

struct SolveOutcome {
    enum class Status { Feasible, Infeasible, Unavailable, Failed } status;
    std::optional<SdpSolution> solution;
    std::string detail;
};

// Runs `solver problem.dat-s problem.sol` in a scratch directory. Exit 0
// means a solution was written; CSDP-style exit codes 1/2 mean infeasible;
// anything else is a solver failure. An empty solver path reports
// Unavailable, never a verdict.
SolveOutcome solve_sdp(const SdpProblem& p, const std::string& solver_path);

}  // namespace hyperbc
