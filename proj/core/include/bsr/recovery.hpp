#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>

namespace bsr::recovery {

struct SolveOptions {
    double feas_tol = 1e-9;
    double obj_tol = 1e-8;
    std::size_t max_iters = 200000;
    double rho = 1.0;  // ADMM penalty
};

struct RecoveryResult {
    Eigen::VectorXd x_hat;
    double objective = 0.0;
    double feas_residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool recovered = false;
};

// Minimize the sum of block Euclidean norms subject to A x = y, by operator
// splitting in consensus form: alternate projection onto {x : A x = y}
// (one-time LLT factorization of A A^T) with the block soft-threshold
// proximal step. Throws on rank-deficient A or when d does not divide the
// column count; hitting max_iters returns converged = false, never a silent
// success.
RecoveryResult solve_group_bp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, std::size_t d,
                              const SolveOptions& opts = {});

// Relative-error recovery test, inclusive at the tolerance.
bool check_recovery(const RecoveryResult& result, const Eigen::VectorXd& x_true,
                    double rec_tol = 1e-4);

// Result document: x_hat, objective, feas_residual, iterations, converged,
// recovered as structured JSON text.
std::string result_to_document(const RecoveryResult& result);

}  // namespace bsr::recovery
