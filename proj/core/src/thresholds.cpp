#include "bsr/thresholds.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bsr/specfun.hpp"

namespace bsr::thresholds {

namespace {

void check_beta_d(double beta, std::size_t d, bool allow_one) {
    if (d < 1) throw std::domain_error("thresholds: d must be >= 1");
    const bool ok = beta > 0.0 && (allow_one ? beta <= 1.0 : beta < 1.0);
    if (!ok) throw std::domain_error("thresholds: beta out of range");
}

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double theta_residual(double theta, double beta, std::size_t d) {
    check_beta_d(beta, d, false);
    if (!(theta > beta && theta <= 1.0))
        throw std::domain_error("theta_residual: theta must lie in (beta, 1]");
    const double p = (1.0 - theta) / (1.0 - beta);
    const double c = specfun::chi_inv_cdf(p, d);
    const auto mom = specfun::chi_trunc_moments(c, d);
    return (1.0 - beta) * mom.m1 / theta - c;
}

double solve_theta(double beta, std::size_t d) {
    check_beta_d(beta, d, false);
    const double lo_edge = beta + 1e-6;
    if (lo_edge >= 1.0) throw std::domain_error("solve_theta: beta too close to 1");

    constexpr std::size_t kScanPoints = 1000;
    double prev_theta = lo_edge;
    double prev_res = theta_residual(prev_theta, beta, d);
    double a = 0.0, b = 0.0;
    bool bracketed = prev_res == 0.0;
    if (bracketed) return prev_theta;

    for (std::size_t i = 1; i <= kScanPoints; ++i) {
        const double t = lo_edge + (1.0 - lo_edge) * static_cast<double>(i) /
                                       static_cast<double>(kScanPoints);
        const double r = theta_residual(t, beta, d);
        if (r == 0.0) return t;
        if ((prev_res < 0.0) != (r < 0.0)) {
            a = prev_theta;
            b = t;
            bracketed = true;
            break;
        }
        prev_theta = t;
        prev_res = r;
    }
    if (!bracketed)
        throw std::runtime_error("solve_theta: no sign change of the theta residual on (beta, 1]");

    // Bisect until the interval collapses to adjacent doubles.  Near beta -> 1
    // with large d the root sits within ~1e-11 of theta = 1 and the residual's
    // slope there is 1/((1-beta) * chi_pdf(c)), which can reach 1e6..1e9; a
    // fixed-width stop (say 1e-12) would leave a residual far above what the
    // double grid supports, so we go to the last bit and hand back whichever
    // evaluated point had the smallest |residual|.
    double fa = theta_residual(a, beta, d);
    double best_theta = a;
    double best_abs = std::abs(fa);
    const auto consider = [&](double t, double r) {
        if (std::abs(r) < best_abs) {
            best_abs = std::abs(r);
            best_theta = t;
        }
    };
    consider(b, theta_residual(b, beta, d));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double fm = theta_residual(mid, beta, d);
        consider(mid, fm);
        if (fm == 0.0) return mid;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return std::min(best_theta, 1.0);
}

ThresholdPoint alpha_weak(double beta, std::size_t d) {
    check_beta_d(beta, d, true);
    ThresholdPoint pt;
    pt.d = d;
    pt.beta = beta;
    if (beta == 1.0) {
        // Full support needs full measurements.
        pt.theta_hat = 1.0;
        pt.alpha_w = 1.0;
        return pt;
    }
    const double dd = static_cast<double>(d);
    const double theta = solve_theta(beta, d);
    const double c = specfun::chi_inv_cdf((1.0 - theta) / (1.0 - beta), d);
    const auto mom = specfun::chi_trunc_moments(c, d);
    const double e1 = (1.0 - beta) * mom.m1;
    pt.theta_hat = theta;
    pt.alpha_w = ((1.0 - beta) * mom.m2 + beta * dd - e1 * e1 / theta) / dd;
    return pt;
}

std::vector<ThresholdPoint> threshold_curve(std::size_t d, const std::vector<double>& beta_grid) {
    if (beta_grid.empty()) throw std::invalid_argument("threshold_curve: empty beta grid");
    for (std::size_t i = 0; i < beta_grid.size(); ++i) {
        if (!(beta_grid[i] > 0.0 && beta_grid[i] < 1.0))
            throw std::invalid_argument("threshold_curve: grid entries must lie in (0, 1)");
        if (i > 0 && !(beta_grid[i] > beta_grid[i - 1]))
            throw std::invalid_argument("threshold_curve: grid must be strictly ascending");
    }
    std::vector<ThresholdPoint> curve;
    curve.reserve(beta_grid.size());
    for (const double beta : beta_grid) curve.push_back(alpha_weak(beta, d));
    return curve;
}

std::vector<double> make_beta_grid(double lo, double hi, std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("make_beta_grid: steps must be >= 1");
    auto clamp = [](double b) { return std::min(std::max(b, 1e-4), 1.0 - 1e-4); };
    std::vector<double> grid;
    grid.reserve(steps);
    if (steps == 1) {
        grid.push_back(clamp(lo));
        return grid;
    }
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
        grid.push_back(clamp(lo + (hi - lo) * t));
    }
    return grid;
}

std::string curve_to_csv(const std::vector<ThresholdPoint>& curve) {
    std::string out = "d,beta,theta_hat,alpha_w\n";
    for (const auto& pt : curve) {
        out += std::to_string(pt.d);
        out += ',';
        out += format17(pt.beta);
        out += ',';
        out += format17(pt.theta_hat);
        out += ',';
        out += format17(pt.alpha_w);
        out += '\n';
    }
    return out;
}

}  // namespace bsr::thresholds
