#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mscp {

// Deterministic generator: xoshiro256++ seeded through splitmix64.
// All samplers are implemented here so that a given seed reproduces the
// exact same stream regardless of the standard library in use.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto &word : state_) {
            // splitmix64
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
        have_cached_normal_ = false;
    }

    // Derive an independent stream for replicate r from a master seed.
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate) {
        std::uint64_t x = master ^ (0x9E3779B97F4A7C15ULL * (replicate + 1));
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // rejection to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller, caching the second deviate.
    double normal() {
        if (have_cached_normal_) {
            have_cached_normal_ = false;
            return cached_normal_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        have_cached_normal_ = true;
        return r * std::cos(a);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    // Gamma(shape, rate) by Marsaglia-Tsang; shape < 1 handled by boosting.
    double gamma(double shape, double rate) {
        if (shape <= 0.0 || rate <= 0.0)
            throw std::invalid_argument("gamma: shape and rate must be positive");
        if (shape < 1.0) {
            double u;
            do {
                u = uniform();
            } while (u <= 0.0);
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
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
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v / rate;
        }
    }

    // Poisson(mean); multiplication method, chunked for large means.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) throw std::invalid_argument("poisson: mean must be positive");
        std::uint64_t total = 0;
        while (mean > 30.0) {
            total += poisson_knuth(30.0);
            mean -= 30.0;
        }
        return total + poisson_knuth(mean);
    }

    // Binomial(n, p) as a sum of Bernoulli draws (n is small here).
    std::uint64_t binomial(unsigned n, double p) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: p outside [0,1]");
        std::uint64_t k = 0;
        for (unsigned i = 0; i < n; ++i)
            if (uniform() < p) ++k;
        return k;
    }

    double exponential(double rate) {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -std::log(u) / rate;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t k = 0;
        do {
            prod *= uniform();
            ++k;
        } while (prod > limit);
        return k - 1;
    }

    std::uint64_t state_[4]{};
    double cached_normal_ = 0.0;
    bool have_cached_normal_ = false;
};

} // namespace mscp
