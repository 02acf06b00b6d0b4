#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bsr::thresholds {

// One point of the exact weak-threshold curve alpha_w(beta, d).
struct ThresholdPoint {
    std::size_t d = 1;
    double beta = 0.0;
    double theta_hat = 0.0;
    double alpha_w = 0.0;
};

// Residual of the theta equation at theta:
//   (1 - beta) * m1(c) / theta - c,   c = chi_inv_cdf((1-theta)/(1-beta), d),
// where m1 is the truncated first chi moment at c. Negative near theta =
// beta+, positive at theta = 1.
double theta_residual(double theta, double beta, std::size_t d);

// Root of the theta equation inside (beta, 1]: a 1000-point scan for the
// first sign change followed by bisection. Never falls back silently; a
// missing sign change raises.
double solve_theta(double beta, std::size_t d);

// The exact weak threshold:
//   alpha_w * d = (1-beta) * m2(c) + beta * d - ((1-beta) * m1(c))^2 / theta_hat.
// beta = 1 returns alpha_w = 1 by convention.
ThresholdPoint alpha_weak(double beta, std::size_t d);

// One ThresholdPoint per grid entry; the grid must be strictly ascending
// inside (0, 1).
std::vector<ThresholdPoint> threshold_curve(std::size_t d, const std::vector<double>& beta_grid);

// Evenly spaced grid of `steps` points from lo to hi, clamped into
// [1e-4, 1 - 1e-4] where the theta equation degenerates.
std::vector<double> make_beta_grid(double lo, double hi, std::size_t steps);

// CSV with header d,beta,theta_hat,alpha_w, floats with 17 significant digits.
std::string curve_to_csv(const std::vector<ThresholdPoint>& curve);

}  // namespace bsr::thresholds
