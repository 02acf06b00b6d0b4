#pragma once

#include <cstddef>

namespace bsr::specfun {

// log Gamma(a), a > 0. Relative error <= 1e-13 over the arguments used here
// (half-integers up to ~64).
double ln_gamma(double a);

// Regularized lower incomplete gamma P(a, x) = gammainc(x)/Gamma(a),
// evaluated by the standard split: power series for x < a + 1, continued
// fraction otherwise. x >= 0, a > 0.
double reg_inc_gamma_lower(double x, double a);

// Inverse of P(a, .) in x: returns x with P(a, x) = p, 0 <= p < 1.
// Newton iterations with a bisection-safeguarded bracket. p = 1 is a domain
// error; callers clamp.
double inv_reg_inc_gamma(double p, double a);

// Chi distribution with d degrees of freedom.
double chi_cdf(double x, std::size_t d);
double chi_inv_cdf(double p, std::size_t d);

// Truncated chi moments: m1 = E[chi_d 1{chi_d >= c}], m2 = E[chi_d^2 1{chi_d >= c}].
struct ChiMoments {
    std::size_t d = 1;
    double c = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

ChiMoments chi_trunc_moments(double c, std::size_t d);

// E[chi_d] = sqrt(2) Gamma((d+1)/2) / Gamma(d/2).
double chi_mean(std::size_t d);

}  // namespace bsr::specfun
