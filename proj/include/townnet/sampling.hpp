#pragma once

// Stochastic primitives. All rounding is half-away-from-zero (std::round).
//
// Random streams are std::mt19937_64 engines seeded through std::seed_seq with
// the (master seed, stream index) pair split into 32-bit words. Both the engine
// and seed_seq are fully specified by the standard, and the transforms below
// avoid the implementation-defined std:: distributions, so a stream produces the
// same values on every conforming platform.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "townnet/layers.hpp"

namespace townnet {

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                          static_cast<std::uint32_t>(stream_index), static_cast<std::uint32_t>(stream_index >> 32)};
        engine_.seed(seq);
    }

    RngStream(const RngStream&) = delete;
    RngStream& operator=(const RngStream&) = delete;
    RngStream(RngStream&&) = default;
    RngStream& operator=(RngStream&&) = default;

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), unbiased by rejection.
    std::uint64_t uniform_index(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("uniform_index: empty range");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x = 0;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0, v = 0.0, s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Exp(rate) waiting time; always strictly positive.
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finaliser, used to derive independent seeds from structured keys.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) { return mix64(base ^ mix64(a)); }

template <class... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, Rest... rest) {
    return derive_seed(derive_seed(base, a), static_cast<std::uint64_t>(rest)...);
}

/// xi + omega * Z with Z standard skew-normal of shape alpha, drawn as
/// delta*|U0| + sqrt(1 - delta^2)*V.
inline double sample_skew_normal(RngStream& rng, double alpha, double xi, double omega) {
    const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
    const double u0 = rng.normal();
    const double v = rng.normal();
    const double z = delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * v;
    return xi + omega * z;
}

/// Mean of the skew-normal distribution.
inline double skew_normal_mean(double alpha, double xi, double omega) {
    const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
    return xi + omega * delta * std::sqrt(2.0 / std::numbers::pi);
}

/// round(Normal(mu, sigma)) clamped to >= floor. One normal is consumed even when sigma == 0.
inline std::int64_t sample_count(RngStream& rng, double mu, double sigma, std::int64_t floor) {
    const double x = std::round(mu + sigma * rng.normal());
    if (!(x > static_cast<double>(floor))) return floor;
    if (x >= 0x1.0p62) return std::int64_t{1} << 62;
    return static_cast<std::int64_t>(x);
}

/// round(i + d) mod n, result in [0, n).
inline Vertex displace(Vertex i, double d, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("displace: empty ring");
    if (!std::isfinite(d)) throw std::invalid_argument("displace: non-finite displacement");
    const double size = static_cast<double>(n);
    double m = std::fmod(std::round(static_cast<double>(i) + d), size);
    if (m < 0.0) m += size;
    if (m >= size) m = 0.0;
    return static_cast<Vertex>(m);
}

}  // namespace townnet
