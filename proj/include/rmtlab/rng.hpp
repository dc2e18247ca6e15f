#pragma once

#include <cstdint>
#include <cmath>

namespace rmtlab::rng {

/// Philox4x32-10 counter-based generator. Each (key, counter) pair maps to
/// 128 output bits with no shared state, so independently keyed streams can
/// be drawn concurrently and reproducibly.
class Philox {
  public:
    explicit Philox(std::uint64_t seed) : key0_(static_cast<std::uint32_t>(seed)), key1_(static_cast<std::uint32_t>(seed >> 32)) {}

    std::uint64_t next_u64() {
        if (have_ == 0) {
            block(counter_++);
            have_ = 2;
        }
        --have_;
        return out_[1 - have_];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the paired value is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

  private:
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;

    static void round(std::uint32_t& c0, std::uint32_t& c1, std::uint32_t& c2, std::uint32_t& c3, std::uint32_t k0,
                      std::uint32_t k1) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0, n1 = lo1, n2 = hi0 ^ c3 ^ k1, n3 = lo0;
        c0 = n0;
        c1 = n1;
        c2 = n2;
        c3 = n3;
    }

    void block(std::uint64_t ctr) {
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr), c1 = static_cast<std::uint32_t>(ctr >> 32);
        std::uint32_t c2 = 0, c3 = 0;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int i = 0; i < 10; ++i) {
            round(c0, c1, c2, c3, k0, k1);
            k0 += kW0;
            k1 += kW1;
        }
        out_[0] = (static_cast<std::uint64_t>(c1) << 32) | c0;
        out_[1] = (static_cast<std::uint64_t>(c3) << 32) | c2;
    }

    std::uint32_t key0_, key1_;
    std::uint64_t counter_ = 0;
    std::uint64_t out_[2] = {0, 0};
    int have_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// SplitMix64 finalizer, used to derive per-task keys from a master seed.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Per-task seed derivation; independent of worker count by construction.
inline std::uint64_t task_seed(std::uint64_t master, std::uint64_t task_index) {
    return mix(mix(master) ^ (task_index + 0x1000193u));
}

}  // namespace rmtlab::rng
