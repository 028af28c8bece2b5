#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace fbnet {

// Deterministic random source. std::mt19937_64 output is pinned by the
// standard, and all mappings to ranges/doubles are done here by hand, so
// streams are reproducible across compilers and platforms. Every seeded
// component in the project draws through this wrapper; nothing uses
// std::*_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    bool next_bool(double p_true) { return next_double() < p_true; }

    // Standard normal via Box-Muller (both draws consumed every call so the
    // stream position does not depend on earlier results).
    double next_normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Log-normal with a given median: median * exp(sigma * Z).
    double next_lognormal(double median, double sigma) {
        return median * std::exp(sigma * next_normal());
    }

    // Knuth-style Poisson; fine for the small means used here.
    std::uint64_t next_poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > 30.0) {
            // Normal approximation for larger means.
            double v = mean + std::sqrt(mean) * next_normal();
            return v < 0.0 ? 0 : static_cast<std::uint64_t>(v + 0.5);
        }
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = next_double();
        while (prod > limit) {
            ++k;
            prod *= next_double();
        }
        return k;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derive an independent stream, e.g. one per walk or per tree.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 finalizer over the pair.
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace fbnet
