#include "bsr/recovery.hpp"

#include <json.hpp>
#include <cmath>
#include <stdexcept>

#include "bsr/instance.hpp"

namespace bsr::recovery {

namespace {

void block_soft_threshold(Eigen::VectorXd& v, std::size_t d, double thresh) {
    for (Eigen::Index i = 0; i < v.size(); i += static_cast<Eigen::Index>(d)) {
        auto blk = v.segment(i, static_cast<Eigen::Index>(d));
        const double norm = blk.norm();
        if (norm <= thresh)
            blk.setZero();
        else
            blk *= (1.0 - thresh / norm);
    }
}

}  // namespace

RecoveryResult solve_group_bp(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, std::size_t d,
                              const SolveOptions& opts) {
    if (d < 1) throw std::invalid_argument("solve_group_bp: d must be >= 1");
    if (A.cols() % static_cast<Eigen::Index>(d) != 0)
        throw std::invalid_argument("solve_group_bp: d must divide the column count");
    if (A.rows() != y.size())
        throw std::invalid_argument("solve_group_bp: A and y row counts differ");
    if (A.rows() > A.cols()) throw std::invalid_argument("solve_group_bp: A must have rows <= cols");

    const Eigen::MatrixXd gram = A * A.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("solve_group_bp: A A^T not positive definite (rank-deficient A)");

    const auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return v - A.transpose() * llt.solve(A * v - y);
    };

    const double rho = opts.rho;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
    Eigen::VectorXd u = Eigen::VectorXd::Zero(A.cols());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.cols());

    RecoveryResult result;
    const double ynorm_floor = std::max(1.0, y.norm());

    std::size_t it = 0;
    for (; it < opts.max_iters; ++it) {
        x = project(z - u);
        Eigen::VectorXd z_prev = std::move(z);
        z = x + u;
        block_soft_threshold(z, d, 1.0 / rho);
        u += x - z;

        const double primal = (x - z).norm();
        const double dual = rho * (z - z_prev).norm();
        const double scale = std::max({1.0, x.norm(), z.norm()});
        if (primal <= opts.feas_tol * scale && dual <= opts.feas_tol * scale) {
            result.converged = true;
            ++it;
            break;
        }
    }

    result.x_hat = project(z);  // feasible to factorization accuracy
    result.iterations = it;
    result.objective = block_norm_sum(result.x_hat, d);
    result.feas_residual = (A * result.x_hat - y).norm() / ynorm_floor;
    return result;
}

bool check_recovery(const RecoveryResult& result, const Eigen::VectorXd& x_true, double rec_tol) {
    if (result.x_hat.size() != x_true.size())
        throw std::invalid_argument("check_recovery: dimension mismatch");
    const double err = (result.x_hat - x_true).norm() / std::max(1.0, x_true.norm());
    return err <= rec_tol;
}

std::string result_to_document(const RecoveryResult& result) {
    nlohmann::json doc;
    doc["format"] = "bsr-result/1";
    nlohmann::json xb = nlohmann::json::array();
    for (Eigen::Index i = 0; i < result.x_hat.size(); ++i) xb.push_back(result.x_hat[i]);
    doc["x_hat"] = std::move(xb);
    doc["objective"] = result.objective;
    doc["feas_residual"] = result.feas_residual;
    doc["iterations"] = result.iterations;
    doc["converged"] = result.converged;
    doc["recovered"] = result.recovered;
    return doc.dump(2);
}

}  // namespace bsr::recovery
