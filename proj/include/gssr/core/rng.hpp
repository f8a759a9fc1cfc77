#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace gssr {

/// Deterministic, serializable pseudo-random generator (xoshiro256++ core).
///
/// The whole generator state is the four 64-bit words, so checkpointing a
/// stream is exact: save `state()`, later `restore()` it, and the stream
/// continues bit-identically. `normal()` deliberately draws two uniforms per
/// call and discards the second Box-Muller variate instead of caching it, so
/// there is no hidden state outside the four words.
class Rng {
  public:
    explicit Rng(uint64_t seed = 0) { reseed(seed); }

    /// Expands a 64-bit seed into the full state via splitmix64.
    void reseed(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n); n must be positive. Uses rejection sampling
    /// so the distribution is exact.
    uint64_t below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            const uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via Box-Muller. Consumes exactly two uniforms per call.
    double normal() {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::array<uint64_t, 4> state() const { return s_; }
    void restore(const std::array<uint64_t, 4>& state) { s_ = state; }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<uint64_t, 4> s_{};
};

/// Draws `count` indices from the unnormalized weight vector with
/// replacement. Weights must be non-negative with a positive sum.
inline std::vector<size_t> multinomial_draw(Rng& rng, const std::vector<double>& weights, size_t count) {
    std::vector<double> cdf(weights.size());
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cdf[i] = acc;
    }
    std::vector<size_t> out(count);
    for (size_t k = 0; k < count; ++k) {
        const double u = rng.uniform() * acc;
        // First index whose cdf strictly exceeds u; zero-weight entries are
        // never selected because their cdf equals the previous entry's.
        size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            if (cdf[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        out[k] = lo;
    }
    return out;
}

}  // namespace gssr
