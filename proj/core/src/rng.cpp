#include "bsr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bsr {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t parent, std::uint64_t index) noexcept {
    return mix64(mix64(parent + kGolden) ^ (index + kGolden));
}

const char* rng_algorithm_name() noexcept { return "splitmix64-boxmuller-v1"; }

CounterRng::CounterRng(RngSpec spec) noexcept
    : key_(derive_stream(spec.master_seed, spec.stream_id)) {}

std::uint64_t CounterRng::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double CounterRng::next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * next_unit();
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    for (;;) {
        const std::uint64_t x = next_u64();
        if (x < limit) return x % bound;
    }
}

void CounterRng::fill_normals(double* out, std::size_t count) noexcept {
    for (std::size_t i = 0; i < count; i += 2) {
        // u1 in (0,1] so the log is finite.
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        out[i] = r * std::cos(t);
        if (i + 1 < count) out[i + 1] = r * std::sin(t);
    }
}

std::vector<double> CounterRng::normals(std::size_t count) {
    std::vector<double> v(count);
    fill_normals(v.data(), count);
    return v;
}

std::vector<std::size_t> CounterRng::sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace bsr
