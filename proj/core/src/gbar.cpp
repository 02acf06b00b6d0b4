#include "bsr/gbar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bsr::thresholds {

GbarSample sample_gbar(std::size_t n, std::size_t k, std::size_t d, RngSpec rng) {
    if (d < 1) throw std::domain_error("sample_gbar: d must be >= 1");
    if (k > n) throw std::domain_error("sample_gbar: need k <= n");

    CounterRng gen(rng);
    GbarSample out;
    out.n = n;
    out.k = k;
    out.d = d;

    // One block of d normals at a time, in the order the d*n-long Gaussian
    // vector lists them: n-k free blocks first, then the k support blocks.
    std::vector<double> block(d);
    out.sorted_free.reserve(n - k);
    for (std::size_t i = 0; i + k < n; ++i) {
        gen.fill_normals(block.data(), d);
        double sq = 0.0;
        for (const double v : block) sq += v * v;
        out.sorted_free.push_back(std::sqrt(sq));
    }
    std::sort(out.sorted_free.begin(), out.sorted_free.end());

    out.support_first.reserve(k);
    out.support_rest.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        gen.fill_normals(block.data(), d);
        out.support_first.push_back(block[0]);
        double sq = 0.0;
        for (std::size_t t = 1; t < d; ++t) sq += block[t] * block[t];
        out.support_rest.push_back(std::sqrt(sq));
    }
    return out;
}

WaterFillResult waterfill(const GbarSample& sample) {
    const std::size_t nf = sample.sorted_free.size();
    const std::size_t k = sample.support_first.size();
    const std::size_t n = sample.n;
    if (nf + k != n || sample.support_rest.size() != k)
        throw std::invalid_argument("waterfill: inconsistent sample lengths");

    const auto& free = sample.sorted_free;
    double sum_first = 0.0;
    for (const double v : sample.support_first) sum_first += v;
    double base = 0.0;
    for (const double v : sample.support_rest) base += v * v;

    // h'(s)/2 = s * (n - c) - (tail_c + sum_first) on the segment with
    // c = #{free <= s}; walk segments until the stationary point lands inside.
    std::vector<double> tail(nf + 1, 0.0);
    for (std::size_t i = nf; i-- > 0;) tail[i] = tail[i + 1] + free[i];

    double s_star = 0.0;
    std::size_t c_w = 0;
    bool found = false;
    for (std::size_t c = 0; c <= nf; ++c) {
        const double denom = static_cast<double>(n - c);
        const double seg_lo = (c == 0) ? 0.0 : free[c - 1];
        const double seg_hi = (c == nf) ? std::numeric_limits<double>::infinity() : free[c];
        if (denom == 0.0) {
            // k = 0 and every free entry below s: h is flat at zero.
            s_star = nf > 0 ? free[nf - 1] : 0.0;
            c_w = nf;
            found = true;
            break;
        }
        const double cand = (tail[c] + sum_first) / denom;
        if (cand <= seg_lo) {
            // Stationary point lies left of this segment; by convexity the
            // minimizer is the segment edge (or 0 for the first segment).
            s_star = seg_lo;
            c_w = c;
            found = true;
            break;
        }
        if (cand <= seg_hi) {
            s_star = cand;
            c_w = c;
            found = true;
            break;
        }
    }
    if (!found) throw std::logic_error("waterfill: no segment accepted the stationary point");
    if (s_star < 0.0) s_star = 0.0;

    // c_w counts free entries <= s_star, including breakpoint ties.
    while (c_w < nf && free[c_w] <= s_star) ++c_w;

    WaterFillResult out;
    out.s_star = s_star;
    out.c_w = c_w;
    double h = base;
    for (std::size_t i = c_w; i < nf; ++i) {
        const double t = free[i] - s_star;
        if (t > 0.0) h += t * t;
    }
    for (const double v : sample.support_first) {
        const double t = v - s_star;
        h += t * t;
    }
    out.f_value = h;
    out.m_w_estimate = h / static_cast<double>(sample.d);
    return out;
}

FiniteNStats finite_n_alpha_estimate(std::size_t n, std::size_t k, std::size_t d,
                                     std::size_t samples, RngSpec rng) {
    if (samples < 1) throw std::invalid_argument("finite_n_alpha_estimate: samples must be >= 1");
    FiniteNStats stats;
    stats.n = n;
    stats.k = k;
    stats.d = d;
    stats.samples = samples;
    stats.ratios.reserve(samples);

    const double dn = static_cast<double>(d) * static_cast<double>(n);
    for (std::size_t i = 0; i < samples; ++i) {
        const RngSpec per{rng.master_seed, derive_stream(rng.stream_id, i)};
        const auto sample = sample_gbar(n, k, d, per);
        stats.ratios.push_back(waterfill(sample).f_value / dn);
    }
    double mean = 0.0;
    for (const double r : stats.ratios) mean += r;
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (const double r : stats.ratios) var += (r - mean) * (r - mean);
    stats.mean = mean;
    stats.stddev = samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) : 0.0;
    return stats;
}

}  // namespace bsr::thresholds
