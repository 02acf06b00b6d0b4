#include "bsr/instance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bsr {

void BlockStructure::validate() const {
    if (d < 1) throw std::invalid_argument("BlockStructure: d must be >= 1");
    if (n < 1) throw std::invalid_argument("BlockStructure: n must be >= 1");
    if (m < 1 || m > n)
        throw std::invalid_argument("BlockStructure: m must satisfy 1 <= m <= n, got m=" +
                                    std::to_string(m) + " n=" + std::to_string(n));
    if (k > n)
        throw std::invalid_argument("BlockStructure: k must satisfy 0 <= k <= n, got k=" +
                                    std::to_string(k) + " n=" + std::to_string(n));
}

void ProblemInstance::validate() const {
    structure.validate();
    const auto d = static_cast<Eigen::Index>(structure.d);
    const auto rows = static_cast<Eigen::Index>(structure.equations());
    const auto cols = static_cast<Eigen::Index>(structure.unknowns());
    if (A.rows() != rows || A.cols() != cols)
        throw std::invalid_argument("ProblemInstance: A must be d*m x d*n");
    if (y.size() != rows) throw std::invalid_argument("ProblemInstance: y must have length d*m");
    if (x_true.size() != cols)
        throw std::invalid_argument("ProblemInstance: x_true must have length d*n");
    if (support.size() != structure.k)
        throw std::invalid_argument("ProblemInstance: support must list k block indices");
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] >= structure.n)
            throw std::invalid_argument("ProblemInstance: support index out of range");
        if (i > 0 && support[i - 1] >= support[i])
            throw std::invalid_argument("ProblemInstance: support must be strictly ascending");
    }
    if (directions.size() != structure.k)
        throw std::invalid_argument("ProblemInstance: directions must hold k vectors");
    for (const auto& dir : directions) {
        if (dir.size() != d)
            throw std::invalid_argument("ProblemInstance: directions entries must have length d");
        if (std::abs(dir.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("ProblemInstance: directions must be unit vectors");
    }
    const double ynorm = y.norm();
    if ((A * x_true - y).norm() > 1e-12 * std::max(1.0, ynorm))
        throw std::invalid_argument("ProblemInstance: y != A*x_true");
}

ProblemInstance generate_instance(const BlockStructure& structure,
                                  double magnitude_low,
                                  double magnitude_high,
                                  RngSpec rng) {
    structure.validate();
    if (!(magnitude_low > 0.0) || !(magnitude_high >= magnitude_low))
        throw std::invalid_argument("generate_instance: need 0 < magnitude_low <= magnitude_high");

    const std::size_t d = structure.d;
    CounterRng gen(rng);

    ProblemInstance inst;
    inst.structure = structure;
    inst.seed = rng;
    inst.A.resize(static_cast<Eigen::Index>(structure.equations()),
                  static_cast<Eigen::Index>(structure.unknowns()));
    gen.fill_normals(inst.A.data(), static_cast<std::size_t>(inst.A.size()));

    inst.support = gen.sample_without_replacement(structure.n, structure.k);

    inst.x_true = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(structure.unknowns()));
    inst.directions.reserve(structure.k);
    for (std::size_t j = 0; j < structure.k; ++j) {
        Eigen::VectorXd dir(static_cast<Eigen::Index>(d));
        double norm = 0.0;
        do {
            gen.fill_normals(dir.data(), d);
            norm = dir.norm();
        } while (norm < 1e-300);
        dir /= norm;
        inst.directions.push_back(dir);
    }
    for (std::size_t j = 0; j < structure.k; ++j) {
        const double mag = gen.next_uniform(magnitude_low, magnitude_high);
        inst.x_true.segment(static_cast<Eigen::Index>(inst.support[j] * d),
                            static_cast<Eigen::Index>(d)) = mag * inst.directions[j];
    }
    inst.y = inst.A * inst.x_true;
    return inst;
}

double block_norm_sum(const Eigen::VectorXd& x, std::size_t d) {
    if (d < 1 || x.size() % static_cast<Eigen::Index>(d) != 0)
        throw std::invalid_argument("block_norm_sum: d must divide the vector length");
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); i += static_cast<Eigen::Index>(d))
        total += x.segment(i, static_cast<Eigen::Index>(d)).norm();
    return total;
}

}  // namespace bsr
