#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

namespace bsr::certify {

// Classification margins. Between failure_tol and success_tol on sqrt(G_min)
// the verdict is UNDECIDED: the boundary tau = 0 has probability zero for
// Gaussian A, but finite precision deserves an honest third answer.
struct Margins {
    double success_tol = 1e-8;      // sqrt(G_min) at or below this: candidate success
    double interior_margin = 1e-6;  // off-support ||psi|| must stay below 1 - this
    double failure_tol = 1e-4;      // sqrt(G_min) at or above this: candidate failure
    double failure_margin = 5e-5;   // required slack of the failure inequality per unit ||w||
};

enum class Verdict { SUCCESS, FAILURE, UNDECIDED };

const char* verdict_name(Verdict v) noexcept;

struct Certificate {
    Verdict verdict = Verdict::UNDECIDED;
    double tau_estimate = 0.0;  // always <= 0
    Margins margins;
    Eigen::VectorXd nu_star;    // dual certificate, SUCCESS only
    Eigen::VectorXd witness_w;  // null-space witness, FAILURE only
    std::string diagnostics;    // non-empty when UNDECIDED stems from solver trouble
};

// Dual objective
//   G(nu) = sum_off max(||psi_i|| - 1, 0)^2 + sum_supp ||psi_i||^2,
//   psi_i = A_i^T nu   (+ direction_i on support blocks),
// with its gradient; the hinge boundary uses the zero branch. tau(A) equals
// -sqrt(min G). `hinge_radius` shrinks the off-support hinge (used to polish
// a strictly interior certificate); the dual value itself uses radius 1.
double dual_objective(const Eigen::VectorXd& nu, const Eigen::MatrixXd& A, std::size_t d,
                      const std::vector<std::size_t>& support,
                      const std::vector<Eigen::VectorXd>& directions, Eigen::VectorXd* gradient,
                      double hinge_radius = 1.0);

struct DualMinimum {
    double g_min = 0.0;
    Eigen::VectorXd nu_star;
    double gradient_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Minimizes the convex C^1 objective G by L-BFGS with a backtracking line
// search, warm-started at the least-squares cancellation of the support
// directions.
DualMinimum minimize_dual(const Eigen::MatrixXd& A, std::size_t d,
                          const std::vector<std::size_t>& support,
                          const std::vector<Eigen::VectorXd>& directions,
                          double hinge_radius = 1.0, std::size_t max_iters = 50000);

struct PrimalTau {
    double tau = 0.0;  // <= 0
    Eigen::VectorXd w; // achieving null-space vector, zero when tau = 0
    std::size_t iterations = 0;
    bool converged = false;
};

// tau(A) from the primal side: minimize
//   sum_off ||W_i|| + sum_supp X_i^T W_i / ||X_i||
// over the null space of A intersected with the unit ball. Positively
// homogeneous, so the ball minimum is min(0, sphere minimum); the ball form
// is convex and solved by operator splitting (prox of the objective against
// projection onto nullspace-cap-ball).
PrimalTau primal_tau(const Eigen::MatrixXd& A, std::size_t d,
                     const std::vector<std::size_t>& support,
                     const std::vector<Eigen::VectorXd>& directions,
                     std::size_t max_iters = 200000);

// Definitive verdict for one (A, support, directions) triple.
Certificate certify(const Eigen::MatrixXd& A, std::size_t d,
                    const std::vector<std::size_t>& support,
                    const std::vector<Eigen::VectorXd>& directions, const Margins& margins = {});

// Confirms a failure witness constructively: builds x from
// support/directions/magnitudes and scans t in {2^-j ||x|| : j = 0..40} for a
// feasible point x + t w with strictly smaller objective.
bool verify_failure_witness(const Eigen::VectorXd& w, std::size_t d,
                            const std::vector<std::size_t>& support,
                            const std::vector<Eigen::VectorXd>& directions,
                            const std::vector<double>& magnitudes);

std::string certificate_to_document(const Certificate& cert);

}  // namespace bsr::certify
