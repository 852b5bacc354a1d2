#pragma once

#include <cstdint>
#include <cmath>
#include <utility>
#include <vector>

namespace pumpscan {

// Stateless counter-based generator: every draw is a hash of
// (seed, stream, counter), so independent streams can be generated in any
// order — or in parallel — with identical output. The mixer is the
// splitmix64 finalizer applied to the combined key.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_hi, std::uint64_t stream_lo = 0) noexcept
        : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ stream_hi) ^ stream_lo) {}

    std::uint64_t next_u64() noexcept { return mix(key_ ^ counter_++); }

    // uniform in [0, 1) with 53 random bits
    double next_u01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double next_uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_u01();
    }

    // log-uniform in [lo, hi), lo > 0
    double next_log_uniform(double lo, double hi) noexcept {
        return lo * std::exp(next_u01() * std::log(hi / lo));
    }

    // standard normal via Box-Muller; always consumes exactly two draws
    double next_normal() noexcept {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = next_u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // exponential with the given mean; always positive
    double next_exponential(double mean) noexcept {
        const double u = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        return -mean * std::log(u);
    }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) noexcept { return next_u64() % n; }

private:
    static std::uint64_t mix(std::uint64_t x) noexcept {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Deterministic partial Fisher-Yates: picks k distinct indices out of n.
// Own implementation (not std::shuffle) so results are identical across
// standard libraries.
template <typename Out>
void sample_indices(std::uint64_t n, std::uint64_t k, CounterRng& rng, Out out) {
    if (k > n) k = n;
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + rng.next_below(n - i);
        std::swap(pool[i], pool[j]);
        *out++ = pool[i];
    }
}

}  // namespace pumpscan
