#pragma once

#include <cmath>
#include <cstdint>

namespace pplab {

// Reproducible stream RNG. Distinct (seed, stream) pairs give independent
// sequences; all distribution transforms live here so results do not depend
// on the standard library's unspecified algorithms.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 over (seed, stream) to fill xoshiro256++ state
        std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        for (auto& si : s_) {
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            si = z ^ (z >> 31);
        }
        // avoid the all-zero state
        if (!(s_[0] | s_[1] | s_[2] | s_[3])) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0,1)
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Marsaglia polar method; one cached value
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, w;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            w = u * u + v * v;
        } while (w >= 1.0 || w == 0.0);
        const double m = std::sqrt(-2.0 * std::log(w) / w);
        cached_ = v * m;
        have_cached_ = true;
        return u * m;
    }

    double exponential(double rate = 1.0) {
        double u;
        do { u = uniform(); } while (u == 0.0);
        return -std::log(u) / rate;
    }

    // Knuth for small mean, PTRS transformed rejection for large mean
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) {
            const double limit = std::exp(-mean);
            double prod = 1.0;
            long k = -1;
            do {
                ++k;
                prod *= uniform();
            } while (prod > limit);
            return k;
        }
        return poisson_ptrs(mean);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long poisson_ptrs(double mu) {
        // W. Hoermann, "The transformed rejection method for generating
        // Poisson random variables" (PTRS)
        const double smu = std::sqrt(mu);
        const double b = 0.931 + 2.53 * smu;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mu = std::log(mu);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform();
            double us = 0.5 - std::abs(u);
            double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                kf * log_mu - mu - std::lgamma(kf + 1.0))
                return static_cast<long>(kf);
        }
    }

    std::uint64_t s_[4];
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace pplab
