#include "bsr/certify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bsr::certify {

namespace {

struct Layout {
    std::size_t n_blocks = 0;
    std::size_t k = 0;
    std::vector<char> on_support;       // per block
    std::vector<std::size_t> slot_of;   // block index -> position in `support`, or npos
};

Layout check_pattern(const Eigen::MatrixXd& A, std::size_t d,
                     const std::vector<std::size_t>& support,
                     const std::vector<Eigen::VectorXd>& directions) {
    if (d == 0) throw std::invalid_argument("certify: d must be positive");
    if (A.cols() <= 0 || static_cast<std::size_t>(A.cols()) % d != 0)
        throw std::invalid_argument("certify: d must divide the column count of A");
    Layout lay;
    lay.n_blocks = static_cast<std::size_t>(A.cols()) / d;
    lay.k = support.size();
    if (directions.size() != lay.k)
        throw std::invalid_argument("certify: support and directions must have equal length");
    lay.on_support.assign(lay.n_blocks, 0);
    lay.slot_of.assign(lay.n_blocks, static_cast<std::size_t>(-1));
    for (std::size_t s = 0; s < lay.k; ++s) {
        const std::size_t b = support[s];
        if (b >= lay.n_blocks) throw std::invalid_argument("certify: support index out of range");
        if (s > 0 && support[s - 1] >= b)
            throw std::invalid_argument("certify: support must be strictly increasing");
        if (static_cast<std::size_t>(directions[s].size()) != d)
            throw std::invalid_argument("certify: each direction must have length d");
        if (std::abs(directions[s].norm() - 1.0) > 1e-9)
            throw std::invalid_argument("certify: directions must be unit vectors");
        lay.on_support[b] = 1;
        lay.slot_of[b] = s;
    }
    return lay;
}

}  // namespace

const char* verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::SUCCESS: return "SUCCESS";
        case Verdict::FAILURE: return "FAILURE";
        case Verdict::UNDECIDED: return "UNDECIDED";
    }
    return "UNDECIDED";
}

double dual_objective(const Eigen::VectorXd& nu, const Eigen::MatrixXd& A, std::size_t d,
                      const std::vector<std::size_t>& support,
                      const std::vector<Eigen::VectorXd>& directions, Eigen::VectorXd* gradient,
                      double hinge_radius) {
    const Layout lay = check_pattern(A, d, support, directions);
    if (nu.size() != A.rows())
        throw std::invalid_argument("certify: nu must have one entry per row of A");
    if (!(hinge_radius > 0.0))
        throw std::invalid_argument("certify: hinge_radius must be positive");

    Eigen::VectorXd psi = A.transpose() * nu;
    for (std::size_t s = 0; s < lay.k; ++s)
        psi.segment(static_cast<Eigen::Index>(support[s] * d), static_cast<Eigen::Index>(d)) +=
            directions[s];

    double value = 0.0;
    Eigen::VectorXd coeff;  // d/dpsi of the blockwise terms
    if (gradient != nullptr) coeff = Eigen::VectorXd::Zero(psi.size());
    for (std::size_t b = 0; b < lay.n_blocks; ++b) {
        const auto seg = psi.segment(static_cast<Eigen::Index>(b * d), static_cast<Eigen::Index>(d));
        const double nrm = seg.norm();
        if (lay.on_support[b]) {
            value += nrm * nrm;
            if (gradient != nullptr)
                coeff.segment(static_cast<Eigen::Index>(b * d), static_cast<Eigen::Index>(d)) =
                    2.0 * seg;
        } else {
            const double excess = nrm - hinge_radius;
            if (excess > 0.0) {
                value += excess * excess;
                if (gradient != nullptr)
                    coeff.segment(static_cast<Eigen::Index>(b * d), static_cast<Eigen::Index>(d)) =
                        (2.0 * excess / nrm) * seg;
            }
        }
    }
    if (gradient != nullptr) *gradient = A * coeff;
    return value;
}

DualMinimum minimize_dual(const Eigen::MatrixXd& A, std::size_t d,
                          const std::vector<std::size_t>& support,
                          const std::vector<Eigen::VectorXd>& directions, double hinge_radius,
                          std::size_t max_iters) {
    const Layout lay = check_pattern(A, d, support, directions);
    const Eigen::Index rows = A.rows();

    // Warm start: least-squares cancellation of the shifted support blocks,
    // i.e. the minimum-norm nu with A_i^T nu ~ -direction_i on the support.
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(rows);
    if (lay.k > 0) {
        const Eigen::Index kd = static_cast<Eigen::Index>(lay.k * d);
        Eigen::MatrixXd lhs(kd, rows);
        Eigen::VectorXd rhs(kd);
        for (std::size_t s = 0; s < lay.k; ++s) {
            lhs.middleRows(static_cast<Eigen::Index>(s * d), static_cast<Eigen::Index>(d)) =
                A.middleCols(static_cast<Eigen::Index>(support[s] * d),
                             static_cast<Eigen::Index>(d))
                    .transpose();
            rhs.segment(static_cast<Eigen::Index>(s * d), static_cast<Eigen::Index>(d)) =
                -directions[s];
        }
        nu = lhs.completeOrthogonalDecomposition().solve(rhs);
    }

    auto eval = [&](const Eigen::VectorXd& point, Eigen::VectorXd& grad) {
        return dual_objective(point, A, d, support, directions, &grad, hinge_radius);
    };

    DualMinimum out;
    Eigen::VectorXd grad(rows);
    double f = eval(nu, grad);
    const double gscale = std::max(1.0, grad.norm());
    const double gtol = 1e-10 * gscale;

    constexpr std::size_t kMemory = 10;
    std::vector<Eigen::VectorXd> mem_s, mem_y;
    std::vector<double> mem_rho;
    Eigen::VectorXd q(rows), dir(rows), nu_next(rows), grad_next(rows);
    std::vector<double> alpha(kMemory);

    std::size_t it = 0;
    for (; it < max_iters; ++it) {
        const double gnorm = grad.norm();
        if (gnorm <= gtol || f <= 1e-26) break;

        // Two-loop recursion for the quasi-Newton direction.
        q = grad;
        for (std::size_t i = mem_s.size(); i-- > 0;) {
            alpha[i] = mem_rho[i] * mem_s[i].dot(q);
            q -= alpha[i] * mem_y[i];
        }
        if (!mem_s.empty()) {
            const double gamma =
                mem_s.back().dot(mem_y.back()) / mem_y.back().squaredNorm();
            q *= gamma;
        }
        for (std::size_t i = 0; i < mem_s.size(); ++i) {
            const double beta = mem_rho[i] * mem_y[i].dot(q);
            q += (alpha[i] - beta) * mem_s[i];
        }
        dir = -q;
        double slope = grad.dot(dir);
        if (!(slope < 0.0)) {  // fall back to steepest descent
            dir = -grad;
            slope = -gnorm * gnorm;
            mem_s.clear();
            mem_y.clear();
            mem_rho.clear();
        }

        // Backtracking Armijo line search.
        double step = 1.0;
        double f_next = 0.0;
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            nu_next = nu + step * dir;
            f_next = eval(nu_next, grad_next);
            if (f_next <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!mem_s.empty()) {  // retry from a clean steepest-descent state
                mem_s.clear();
                mem_y.clear();
                mem_rho.clear();
                continue;
            }
            break;  // genuinely stuck; report what we have
        }

        const Eigen::VectorXd s = nu_next - nu;
        const Eigen::VectorXd y = grad_next - grad;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (mem_s.size() == kMemory) {
                mem_s.erase(mem_s.begin());
                mem_y.erase(mem_y.begin());
                mem_rho.erase(mem_rho.begin());
            }
            mem_s.push_back(s);
            mem_y.push_back(y);
            mem_rho.push_back(1.0 / sy);
        }
        nu.swap(nu_next);
        grad.swap(grad_next);
        f = f_next;
    }

    out.g_min = f;
    out.nu_star = nu;
    out.gradient_norm = grad.norm();
    out.iterations = it;
    out.converged = out.gradient_norm <= 1e-8 * gscale || f <= 1e-26;
    return out;
}

namespace {

// Ball-constrained primal objective sum_off ||W_i|| + sum_supp dir_i . W_i.
double primal_objective(const Eigen::VectorXd& w, std::size_t d, const Layout& lay,
                        const std::vector<Eigen::VectorXd>& directions) {
    double value = 0.0;
    for (std::size_t b = 0; b < lay.n_blocks; ++b) {
        const auto seg = w.segment(static_cast<Eigen::Index>(b * d), static_cast<Eigen::Index>(d));
        if (lay.on_support[b])
            value += directions[lay.slot_of[b]].dot(seg);
        else
            value += seg.norm();
    }
    return value;
}

}  // namespace

PrimalTau primal_tau(const Eigen::MatrixXd& A, std::size_t d,
                     const std::vector<std::size_t>& support,
                     const std::vector<Eigen::VectorXd>& directions, std::size_t max_iters) {
    const Layout lay = check_pattern(A, d, support, directions);
    const Eigen::Index dn = A.cols();

    PrimalTau out;
    out.w = Eigen::VectorXd::Zero(dn);

    // Orthonormal basis of the null space of A.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double sv_tol = (sv.size() > 0 ? sv(0) : 0.0) * std::numeric_limits<double>::epsilon() *
                          static_cast<double>(std::max(A.rows(), A.cols()));
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > sv_tol) ++rank;
    const Eigen::Index nulldim = dn - rank;
    if (nulldim == 0) {  // trivial null space: tau = 0 by convention
        out.converged = true;
        return out;
    }
    const Eigen::MatrixXd N = svd.matrixV().rightCols(nulldim);

    // Projection onto (null space) intersect (unit ball). The orthogonal
    // projection onto the subspace followed by radial clipping is exact:
    // the residual q - P_N q is orthogonal to every candidate.
    auto project = [&](const Eigen::VectorXd& q) {
        Eigen::VectorXd p = N * (N.transpose() * q);
        const double nrm = p.norm();
        if (nrm > 1.0) p /= nrm;
        return p;
    };

    // Prox of the objective: blockwise soft threshold off the support, a
    // constant shift along each support direction.
    auto prox = [&](Eigen::VectorXd q, double t) {
        for (std::size_t b = 0; b < lay.n_blocks; ++b) {
            auto seg = q.segment(static_cast<Eigen::Index>(b * d), static_cast<Eigen::Index>(d));
            if (lay.on_support[b]) {
                seg -= t * directions[lay.slot_of[b]];
            } else {
                const double nrm = seg.norm();
                if (nrm <= t)
                    seg.setZero();
                else
                    seg *= 1.0 - t / nrm;
            }
        }
        return q;
    };

    const double rho = 1.0;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dn);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dn);
    Eigen::VectorXd w(dn), v_old(dn);
    std::size_t it = 0;
    for (; it < max_iters; ++it) {
        w = prox(v - u, 1.0 / rho);
        v_old = v;
        v = project(w + u);
        u += w - v;
        const double scale = std::max({1.0, w.norm(), v.norm()});
        if ((w - v).norm() <= 1e-10 * scale && rho * (v - v_old).norm() <= 1e-10 * scale) {
            out.converged = true;
            ++it;
            break;
        }
    }
    out.iterations = it;

    // Polish: land exactly in the null space, and on the sphere when the
    // value is negative (the objective is positively homogeneous).
    Eigen::VectorXd p = N * (N.transpose() * v);
    double nrm = p.norm();
    if (nrm > 1.0) p /= nrm;
    double tau = primal_objective(p, d, lay, directions);
    if (tau < 0.0 && (nrm = p.norm()) > 1e-12) {
        p /= nrm;
        tau = primal_objective(p, d, lay, directions);
    }
    if (tau < 0.0) {
        out.tau = tau;
        out.w = p;
    }
    return out;
}

bool verify_failure_witness(const Eigen::VectorXd& w, std::size_t d,
                            const std::vector<std::size_t>& support,
                            const std::vector<Eigen::VectorXd>& directions,
                            const std::vector<double>& magnitudes) {
    if (d == 0) throw std::invalid_argument("certify: d must be positive");
    if (w.size() <= 0 || static_cast<std::size_t>(w.size()) % d != 0)
        throw std::invalid_argument("certify: d must divide the witness length");
    if (magnitudes.size() != support.size())
        throw std::invalid_argument("certify: magnitudes and support must have equal length");
    const std::size_t n_blocks = static_cast<std::size_t>(w.size()) / d;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(w.size());
    for (std::size_t s = 0; s < support.size(); ++s) {
        if (support[s] >= n_blocks)
            throw std::invalid_argument("certify: support index out of range");
        if (!(magnitudes[s] > 0.0))
            throw std::invalid_argument("certify: magnitudes must be positive");
        x.segment(static_cast<Eigen::Index>(support[s] * d), static_cast<Eigen::Index>(d)) =
            magnitudes[s] * directions[s];
    }

    auto norm_sum = [&](const Eigen::VectorXd& vec) {
        double total = 0.0;
        for (std::size_t b = 0; b < n_blocks; ++b)
            total +=
                vec.segment(static_cast<Eigen::Index>(b * d), static_cast<Eigen::Index>(d)).norm();
        return total;
    };

    const double base = norm_sum(x);
    const double xnorm = x.norm();
    if (!(xnorm > 0.0) || w.norm() <= 0.0) return false;

    // The witness must beat x at some step length; scan dyadic fractions of
    // ||x|| so that both the first-order regime and moderate steps are hit.
    double best_drop = 0.0;
    for (int j = 0; j <= 40; ++j) {
        const double t = std::ldexp(xnorm, -j);
        best_drop = std::max(best_drop, base - norm_sum(x + t * w));
    }
    return best_drop > 1e-12 * std::max(1.0, base);
}

Certificate certify(const Eigen::MatrixXd& A, std::size_t d,
                    const std::vector<std::size_t>& support,
                    const std::vector<Eigen::VectorXd>& directions, const Margins& margins) {
    check_pattern(A, d, support, directions);

    Certificate cert;
    cert.margins = margins;

    DualMinimum dm = minimize_dual(A, d, support, directions);
    const double sqrt_g = std::sqrt(std::max(dm.g_min, 0.0));
    cert.tau_estimate = -sqrt_g;

    if (sqrt_g <= margins.success_tol) {
        // Candidate success. Re-minimize against a shrunken hinge so the
        // certificate sits strictly inside the dual feasible region, then
        // check the actual block norms at hinge radius one.
        DualMinimum polished =
            minimize_dual(A, d, support, directions, 1.0 - 2.0 * margins.interior_margin);
        const Eigen::Index dd = static_cast<Eigen::Index>(d);
        Eigen::VectorXd psi = A.transpose() * polished.nu_star;
        for (std::size_t s = 0; s < support.size(); ++s)
            psi.segment(static_cast<Eigen::Index>(support[s] * d), dd) += directions[s];
        std::vector<char> on(static_cast<std::size_t>(A.cols()) / d, 0);
        for (std::size_t b : support) on[b] = 1;
        double max_off = 0.0;
        double supp_sq = 0.0;
        for (std::size_t b = 0; b < on.size(); ++b) {
            const double nrm = psi.segment(static_cast<Eigen::Index>(b * d), dd).norm();
            if (on[b])
                supp_sq += nrm * nrm;
            else
                max_off = std::max(max_off, nrm);
        }
        if (max_off <= 1.0 - margins.interior_margin &&
            std::sqrt(supp_sq) <= margins.success_tol) {
            cert.verdict = Verdict::SUCCESS;
            cert.nu_star = polished.nu_star;
        } else {
            cert.diagnostics = "dual certificate is not strictly interior";
        }
        return cert;
    }

    if (sqrt_g >= margins.failure_tol) {
        // Candidate failure. The evidence is a verified null-space witness,
        // not the dual value itself.
        PrimalTau pt = primal_tau(A, d, support, directions);
        const Eigen::VectorXd& w = pt.w;
        const double wnorm = w.norm();
        const double feas = (A * w).norm();
        const bool in_null = feas <= 1e-10 * std::max(1.0, A.norm()) * std::max(1.0, wnorm);
        const bool has_slack = pt.tau <= -margins.failure_margin * std::max(wnorm, 1e-300);
        std::vector<double> ones(support.size(), 1.0);
        if (wnorm > 0.0 && in_null && has_slack &&
            verify_failure_witness(w, d, support, directions, ones)) {
            cert.verdict = Verdict::FAILURE;
            cert.witness_w = w;
        } else {
            cert.diagnostics = "failure witness did not verify";
            if (!pt.converged) cert.diagnostics += " (primal splitting hit the iteration cap)";
        }
        return cert;
    }

    cert.diagnostics = "dual minimum falls between the decision margins";
    if (!dm.converged) cert.diagnostics += " (dual minimization did not converge)";
    return cert;
}

std::string certificate_to_document(const Certificate& cert) {
    nlohmann::json doc;
    doc["format"] = "bsr-certificate/1";
    doc["verdict"] = verdict_name(cert.verdict);
    doc["tau_estimate"] = cert.tau_estimate;
    doc["margins"] = {{"success_tol", cert.margins.success_tol},
                      {"interior_margin", cert.margins.interior_margin},
                      {"failure_tol", cert.margins.failure_tol},
                      {"failure_margin", cert.margins.failure_margin}};
    if (cert.nu_star.size() > 0)
        doc["nu_star"] = std::vector<double>(cert.nu_star.data(),
                                             cert.nu_star.data() + cert.nu_star.size());
    if (cert.witness_w.size() > 0)
        doc["witness_w"] = std::vector<double>(cert.witness_w.data(),
                                               cert.witness_w.data() + cert.witness_w.size());
    if (!cert.diagnostics.empty()) doc["diagnostics"] = cert.diagnostics;
    return doc.dump(2);
}

}  // namespace bsr::certify
