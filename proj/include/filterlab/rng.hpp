#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace filterlab {

/// Counter-based pseudo-random generator (splitmix64 finalizer over a
/// keyed counter). Any number of independent substreams can be derived
/// from (seed, stream-id) without coordination, so parallel workers can
/// each own a private stream while the whole run stays reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(derive_key(mix(seed + kGolden), stream)) {}

    /// Child generator for (this stream, id); deterministic, collision-safe
    /// for practical purposes.
    Rng substream(std::uint64_t id) const { return Rng(key_, id, FromKey{}); }

    Rng substream(std::uint64_t a, std::uint64_t b) const {
        return substream(a).substream(b);
    }

    std::uint64_t next_u64() {
        counter_ += kGolden;
        return mix(key_ ^ counter_);
    }

    /// Uniform on (0, 1): never returns an exact endpoint.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; the spare draw is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by the
    /// boost trick gamma(a) = gamma(a+1) * U^(1/a).
    double gamma(double shape) {
        if (shape <= 0.0) throw std::invalid_argument("Rng::gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::uniform_index: empty range");
        // Rejection-free modulo is fine here: n is tiny versus 2^64.
        return next_u64() % n;
    }

private:
    struct FromKey {};
    Rng(std::uint64_t parent_key, std::uint64_t id, FromKey)
        : key_(derive_key(parent_key, id)) {}

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t derive_key(std::uint64_t parent, std::uint64_t id) {
        return mix(parent ^ mix(id * kGolden + 0x632BE59BD9B4E019ULL));
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace filterlab
