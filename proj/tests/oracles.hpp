#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately built on different algorithms than the
// production code: adaptive quadrature instead of series/continued fractions,
// grid scans and bisection instead of Newton, a primal-dual first-order
// method instead of operator splitting with a factorization.

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracles {

// Gamma(a) for half-integer a by the recursion down to Gamma(1) = 1 or
// Gamma(1/2) = sqrt(pi).
double gamma_half_integer(double a);

// Adaptive Simpson quadrature with an absolute tolerance.
double integrate(const std::function<double(double)>& f, double lo, double hi, double tol_abs);

// Regularized lower incomplete gamma for half-integer a, via the
// substitution t = u^2 (removes the endpoint singularity for a = 1/2).
double reg_inc_gamma_lower(double x, double a);

// Chi distribution with d degrees of freedom: pdf, cdf by quadrature,
// inverse cdf by bracketed bisection on the quadrature cdf.
double chi_pdf(double x, std::size_t d);
double chi_cdf(double x, std::size_t d);
double chi_inv_cdf(double p, std::size_t d);

// E[X^j ; X > c] / P(X > c)-free raw truncated moments: the integral of
// x^j * pdf over (c, infinity), i.e. the same normalization the library's
// truncated-moment routine reports.
double chi_trunc_raw_moment(double c, std::size_t d, int j);

// The weak-threshold pair computed end to end with the quadrature oracle:
// coarse scan plus bisection on the balance equation in theta, then the
// closed-form combination for alpha.
struct ThresholdOracle {
    double theta_hat = 0.0;
    double alpha_w = 0.0;
};
ThresholdOracle alpha_weak(double beta, std::size_t d);

// Brute-force value of the one-dimensional minimization behind the finite-n
// threshold estimate: a uniform grid scan of
//   h(s) = sum_free max(g - s, 0)^2 + sum_first (g - s)^2 + sum_rest g^2
// over s >= 0 with the given step.
double brute_waterfill_value(const std::vector<double>& free_mags,
                             const std::vector<double>& support_first,
                             const std::vector<double>& support_rest, double step);

// Reference solver for min sum-of-block-norms subject to A x = y: a plain
// primal-dual hybrid gradient iteration, no factorizations shared with the
// production solver.
Eigen::VectorXd pdhg_group_bp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, std::size_t d,
                              std::size_t iters);

}  // namespace oracles
