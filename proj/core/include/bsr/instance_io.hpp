#pragma once

#include <string>

#include "bsr/instance.hpp"

namespace bsr {

// Instance document: structured JSON text holding n, d, m, k, optional seed,
// rng_algorithm, A as an array of d*m rows (each d*n long), y, x_true,
// support (0-based block indices) and directions. All floats are emitted as
// shortest round-trip decimals, so deserialize(serialize(x)) is bit-identical.
std::string serialize_instance(const ProblemInstance& inst);

// Throws std::invalid_argument naming the offending field on malformed input,
// dimension mismatch or non-unit directions.
ProblemInstance deserialize_instance(const std::string& text);

}  // namespace bsr
