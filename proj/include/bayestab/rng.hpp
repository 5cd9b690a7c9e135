#pragma once

#include <cmath>
#include <cstdint>

namespace bayestab {

// SplitMix64 finalizer. Statistically strong enough to both derive substream
// keys and act as the generator itself (the state walks the Weyl sequence).
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream key from a master seed and stream indices.
inline uint64_t substream_seed(uint64_t master, uint64_t a) {
    return mix64(mix64(master + 0x9e3779b97f4a7c15ULL) ^ (a + 0x6a09e667f3bcc909ULL));
}
inline uint64_t substream_seed(uint64_t master, uint64_t a, uint64_t b) {
    return substream_seed(substream_seed(master, a), b);
}

// Counter-based generator: the whole state is (key-derived) starting counter.
// Two CounterRng constructed from the same (master, stream) produce identical
// output regardless of what any other stream did, which is what makes the
// Monte Carlo kernels reproducible under arbitrary sharding.
class CounterRng {
   public:
    explicit CounterRng(uint64_t seed) : state_(mix64(seed + 0x9e3779b97f4a7c15ULL)) {}
    CounterRng(uint64_t master, uint64_t stream) : CounterRng(substream_seed(master, stream)) {}
    CounterRng(uint64_t master, uint64_t s1, uint64_t s2)
        : CounterRng(substream_seed(master, s1, s2)) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform on [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1); rejects exact zeros so logs are always finite.
    double next_double_pos() {
        double u;
        do {
            u = next_double();
        } while (u <= 0.0);
        return u;
    }

    // Standard normal via the Marsaglia polar method; caches the spare.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 boosted through
    // Gamma(shape+1) * U^(1/shape).
    double next_gamma(double shape) {
        if (shape < 1.0) {
            const double g = next_gamma(shape + 1.0);
            return g * std::pow(next_double_pos(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = next_normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = next_double_pos();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Hypergeometric draw: number of successes among k draws from m successes
    // and n failures, by inverse-CDF scan with the pmf ratio recurrence.
    long long next_hypergeom(long long m, long long n, long long k);

   private:
    uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bayestab
