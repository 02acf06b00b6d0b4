#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "bsr/rng.hpp"

namespace bsr {

// Block-sparse problem dimensions. A vector of d*n unknowns split into n
// blocks of length d, observed through d*m equations, with k nonzero blocks.
struct BlockStructure {
    std::size_t n = 0;  // number of blocks
    std::size_t d = 1;  // block length
    std::size_t m = 0;  // number of measurement blocks (rows = d*m)
    std::size_t k = 0;  // number of nonzero blocks

    std::size_t unknowns() const noexcept { return d * n; }
    std::size_t equations() const noexcept { return d * m; }
    double alpha() const noexcept { return static_cast<double>(m) / static_cast<double>(n); }
    double beta() const noexcept { return static_cast<double>(k) / static_cast<double>(n); }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// A generated problem: y = A*x_true with x_true supported on `support`
// (sorted block indices) and unit directions stored in support order.
struct ProblemInstance {
    BlockStructure structure;
    Eigen::MatrixXd A;       // d*m rows, d*n cols
    Eigen::VectorXd y;       // d*m
    Eigen::VectorXd x_true;  // d*n
    std::vector<std::size_t> support;
    std::vector<Eigen::VectorXd> directions;  // k unit vectors of length d
    std::optional<RngSpec> seed;

    Eigen::VectorBlock<const Eigen::VectorXd> block_of(const Eigen::VectorXd& v,
                                                       std::size_t i) const {
        return v.segment(i * structure.d, structure.d);
    }

    // Consistency of all fields (dimensions, support sortedness, unit
    // directions, y = A*x_true). Throws std::invalid_argument on violation.
    void validate() const;
};

// Draws A with i.i.d. standard normal entries, a uniform support, uniform
// unit block directions and block magnitudes uniform in
// [magnitude_low, magnitude_high], then forms y = A*x_true. Pure function of
// its arguments; the stream consumption order is fixed as: A entries in
// column-major order, support, directions (support order), magnitudes.
ProblemInstance generate_instance(const BlockStructure& structure,
                                  double magnitude_low,
                                  double magnitude_high,
                                  RngSpec rng);

// Sum of block Euclidean norms, the objective both programs share.
double block_norm_sum(const Eigen::VectorXd& x, std::size_t d);

}  // namespace bsr
