#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracles {

double gamma_half_integer(double a) {
    const double twice = 2.0 * a;
    if (!(a > 0.0) || std::floor(twice) != twice)
        throw std::invalid_argument("gamma_half_integer: a must be a positive half-integer");
    double value = 1.0;
    while (a > 1.0) {
        a -= 1.0;
        value *= a;
    }
    if (a == 0.5) value *= std::sqrt(M_PI);
    return value;  // a == 1.0 contributes the factor 1
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol_abs) {
    if (!(hi > lo)) return 0.0;
    // Unit-length panels before the adaptive refinement, so a sharply peaked
    // integrand on a wide interval cannot slip between the initial probes.
    const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    const double panel_tol = tol_abs / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + (hi - lo) * p / panels;
        const double b = lo + (hi - lo) * (p + 1) / panels;
        const double fa = f(a);
        const double fb = f(b);
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(f, a, b, fa, fm, fb, whole, panel_tol, 48);
    }
    return total;
}

double reg_inc_gamma_lower(double x, double a) {
    if (x <= 0.0) return 0.0;
    const double g = gamma_half_integer(a);
    // t = u^2 removes the t^(a-1) endpoint singularity for a = 1/2.
    const double value = integrate(
        [a](double u) { return 2.0 * std::pow(u, 2.0 * a - 1.0) * std::exp(-u * u); }, 0.0,
        std::sqrt(x), 0.5e-13 * g);
    return std::min(1.0, value / g);
}

double chi_pdf(double x, std::size_t d) {
    if (x < 0.0) return 0.0;
    const double dd = static_cast<double>(d);
    const double norm = std::pow(2.0, 0.5 * dd - 1.0) * gamma_half_integer(0.5 * dd);
    if (x == 0.0) return d == 1 ? 1.0 / norm : 0.0;
    return std::exp((dd - 1.0) * std::log(x) - 0.5 * x * x) / norm;
}

double chi_cdf(double x, std::size_t d) {
    if (x <= 0.0) return 0.0;
    const double hi = std::sqrt(static_cast<double>(d)) + 45.0;
    if (x >= hi) return 1.0;
    return std::min(1.0, integrate([d](double t) { return chi_pdf(t, d); }, 0.0, x, 1e-13));
}

double chi_inv_cdf(double p, std::size_t d) {
    if (!(p >= 0.0) || p >= 1.0) {
        if (p == 0.0) return 0.0;
        throw std::invalid_argument("chi_inv_cdf oracle: p must lie in [0, 1)");
    }
    double hi = 1.0;
    int guard = 0;
    while (chi_cdf(hi, d) < p) {
        hi *= 2.0;
        if (++guard > 40) throw std::runtime_error("chi_inv_cdf oracle: bracket failed");
    }
    double lo = 0.0;
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        (chi_cdf(mid, d) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double chi_trunc_raw_moment(double c, std::size_t d, int j) {
    if (c < 0.0) c = 0.0;
    const double hi = std::max(c, std::sqrt(static_cast<double>(d + j))) + 45.0;
    return integrate([d, j](double x) { return std::pow(x, j) * chi_pdf(x, d); }, c, hi, 1e-13);
}

ThresholdOracle alpha_weak(double beta, std::size_t d) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw std::invalid_argument("threshold oracle: beta must lie in (0, 1)");
    const double dd = static_cast<double>(d);
    auto residual = [&](double theta) {
        const double c = chi_inv_cdf((1.0 - theta) / (1.0 - beta), d);
        return (1.0 - beta) * chi_trunc_raw_moment(c, d, 1) / theta - c;
    };
    // Coarse scan for the sign change, then bisection.
    const int scan = 400;
    double lo = beta + 1e-9 * (1.0 - beta);
    double hi = 0.0;
    double prev = residual(lo);
    bool bracketed = false;
    for (int i = 1; i <= scan; ++i) {
        const double theta = beta + (1.0 - beta) * static_cast<double>(i) / scan;
        const double r = residual(std::min(theta, 1.0 - 1e-15));
        if (prev <= 0.0 && r > 0.0) {
            hi = std::min(theta, 1.0 - 1e-15);
            bracketed = true;
            break;
        }
        lo = std::min(theta, 1.0 - 1e-15);
        prev = r;
    }
    if (!bracketed) throw std::runtime_error("threshold oracle: no sign change in theta");
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) <= 0.0 ? lo : hi) = mid;
    }
    ThresholdOracle out;
    out.theta_hat = 0.5 * (lo + hi);
    const double c = chi_inv_cdf((1.0 - out.theta_hat) / (1.0 - beta), d);
    const double m1 = chi_trunc_raw_moment(c, d, 1);
    const double m2 = chi_trunc_raw_moment(c, d, 2);
    const double scaled = (1.0 - beta) * m1;
    out.alpha_w = ((1.0 - beta) * m2 + beta * dd - scaled * scaled / out.theta_hat) / dd;
    return out;
}

double brute_waterfill_value(const std::vector<double>& free_mags,
                             const std::vector<double>& support_first,
                             const std::vector<double>& support_rest, double step) {
    double top = 0.0;
    for (double g : free_mags) top = std::max(top, g);
    for (double g : support_first) top = std::max(top, g);
    top += 1.0;
    double fixed = 0.0;
    for (double g : support_rest) fixed += g * g;
    double best = std::numeric_limits<double>::infinity();
    for (double s = 0.0; s <= top; s += step) {
        double h = fixed;
        for (double g : free_mags) {
            const double excess = g - s;
            if (excess > 0.0) h += excess * excess;
        }
        for (double g : support_first) h += (g - s) * (g - s);
        best = std::min(best, h);
    }
    return best;
}

Eigen::VectorXd pdhg_group_bp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, std::size_t d,
                              std::size_t iters) {
    if (d == 0 || A.cols() % static_cast<Eigen::Index>(d) != 0)
        throw std::invalid_argument("pdhg oracle: d must divide the column count");
    const double L = A.jacobiSvd().singularValues()(0);
    const double tau = 0.95 / L;
    const double sigma = 0.95 / L;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());
    Eigen::VectorXd xbar = x;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(A.rows());
    const Eigen::Index dd = static_cast<Eigen::Index>(d);
    for (std::size_t it = 0; it < iters; ++it) {
        z += sigma * (A * xbar - y);
        Eigen::VectorXd q = x - tau * (A.transpose() * z);
        for (Eigen::Index b = 0; b < q.size(); b += dd) {
            auto seg = q.segment(b, dd);
            const double nrm = seg.norm();
            if (nrm <= tau)
                seg.setZero();
            else
                seg *= 1.0 - tau / nrm;
        }
        xbar = 2.0 * q - x;
        x = q;
    }
    return x;
}

}  // namespace oracles
