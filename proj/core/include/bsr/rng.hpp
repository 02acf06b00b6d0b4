#pragma once

#include <cstdint>
#include <vector>

namespace bsr {

// Identifies one reproducible random stream. Identical (master_seed,
// stream_id) pairs yield identical draws; see rng_algorithm_name() for the
// exact construction recorded in serialized outputs.
struct RngSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

// SplitMix64 finalizer. Bijective on 64-bit integers.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Two-round combiner used everywhere a substream is derived from a parent
// value and an index (experiment cells, trials, per-sample streams).
std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t index) noexcept;

// Counter-based generator: the i-th 64-bit output is
//   mix64(key + i * 0x9E3779B97F4A7C15)  with  key = derive_stream(master_seed, stream_id),
// i.e. SplitMix64 evaluated at an arbitrary counter. Gaussians come from the
// classic Box-Muller transform on consecutive uniform pairs; each call to
// fill_normals consumes whole pairs, nothing is carried across calls.
class CounterRng {
public:
    explicit CounterRng(RngSpec spec) noexcept;

    std::uint64_t next_u64() noexcept;

    // Uniform on [0, 1), 53-bit resolution.
    double next_unit() noexcept;

    // Uniform on [lo, hi).
    double next_uniform(double lo, double hi) noexcept;

    // Uniform integer in [0, bound) by rejection, no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) noexcept;

    // Standard normal draws via Box-Muller; consumes 2*ceil(count/2) uniforms.
    void fill_normals(double* out, std::size_t count) noexcept;
    std::vector<double> normals(std::size_t count);

    // Uniform k-subset of {0,...,n-1}, returned sorted ascending.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Name recorded in serialized metadata so experiments are auditable.
const char* rng_algorithm_name() noexcept;

}  // namespace bsr
