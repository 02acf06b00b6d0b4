#pragma once

#include <cstddef>
#include <vector>

#include "bsr/rng.hpp"

namespace bsr::thresholds {

// The sorted aggregate entering the finite-n minimization. The free part
// holds the n-k off-support block magnitudes sorted ascending; each support
// block contributes one signed standard normal (its first coordinate) and
// the magnitude of its remaining d-1 coordinates.
struct GbarSample {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t d = 1;
    std::vector<double> sorted_free;    // n-k, nondecreasing
    std::vector<double> support_first;  // k, signed
    std::vector<double> support_rest;   // k, nonnegative (zero when d = 1)
};

// Result of minimizing over s >= 0 and z in [0,1]^(n-k) the squared norm
//   h(s) = sum_free max(G_i - s, 0)^2 + sum_first (G_j - s)^2 + sum_rest G_j^2.
struct WaterFillResult {
    double s_star = 0.0;       // 1 / ||nu||_2 at the optimum
    std::size_t c_w = 0;       // #{free i : G_i <= s_star}
    double f_value = 0.0;      // h(s_star)
    double m_w_estimate = 0.0; // f_value / d
};

GbarSample sample_gbar(std::size_t n, std::size_t k, std::size_t d, RngSpec rng);

// Exact piecewise-quadratic descent over the sorted breakpoints; no search
// tolerance enters the result.
WaterFillResult waterfill(const GbarSample& sample);

// Mean and sample standard deviation of f_value / (d*n) over `samples`
// independent draws; per-sample streams derive from (rng, sample index).
struct FiniteNStats {
    std::size_t n = 0, k = 0, d = 1;
    std::size_t samples = 0;
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<double> ratios;
};

FiniteNStats finite_n_alpha_estimate(std::size_t n, std::size_t k, std::size_t d,
                                     std::size_t samples, RngSpec rng);

}  // namespace bsr::thresholds
