#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bsr/recovery.hpp"
#include "bsr/rng.hpp"

namespace bsr::experiments {

inline constexpr const char* kLibraryVersion = "0.1.0";

// One row of a phase-transition sweep: fixed undersampling ratio, aggregated
// recovery rate over `trials` independent instances.
struct PhaseCell {
    double alpha = 0.0;           // requested m/n
    std::size_t m = 0;            // round(alpha * n)
    std::size_t k = 0;            // round(beta * n)
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t nonconverged = 0; // counted as failures in `successes`
    double rate = 0.0;            // successes / trials
};

struct ExperimentConfig {
    std::size_t d = 1;
    std::size_t n = 0;
    double beta = 0.0;
    std::vector<double> alpha_grid;  // strictly increasing, in (0, 1]
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    recovery::SolveOptions solve;
    double rec_tol = 1e-4;
    double magnitude_low = 1.0;
    double magnitude_high = 2.0;
    std::size_t jobs = 0;  // 0: one worker per hardware thread

    void validate() const;  // throws std::invalid_argument naming the field
};

struct PhaseResult {
    ExperimentConfig config;
    std::vector<PhaseCell> cells;  // one per alpha_grid entry, same order
};

// Runs the sweep. Every (cell, trial) pair draws from its own stream,
//   RngSpec{master_seed, derive_stream(cell_index, trial_index)},
// so results are identical for any worker count. A trial whose solve hits
// the iteration cap is logged to stderr, tallied in `nonconverged`, and
// scored as a failure.
PhaseResult run_phase(const ExperimentConfig& config);

// Smallest alpha at which the empirical rate reaches 1/2, by linear
// interpolation between the first bracketing cells. Throws std::runtime_error
// when the grid never crosses 1/2 (the message says which side is missing).
double estimate_crossing(const std::vector<PhaseCell>& cells);

// CSV with header d,n,m,k,alpha,beta,trials,successes,rate,nonconverged and
// one row per cell; floats carry full round-trip precision.
std::string phase_to_csv(const PhaseResult& result);

// Sidecar JSON recording everything needed to reproduce the sweep: the
// config, the RNG construction name, and the library version.
std::string phase_metadata_document(const ExperimentConfig& config);

}  // namespace bsr::experiments
