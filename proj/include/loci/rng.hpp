#pragma once

#include <cstdint>

#include "loci/math_util.hpp"

namespace loci {

/// Counter-based splittable random stream.
///
/// A stream is a (key, counter) pair; each draw hashes the pair, so the state
/// never mixes across streams and a child derived with derive(tag) is
/// statistically independent of its parent. Work units (replication, method,
/// try point, resample) each derive their own stream up front, which makes
/// every result a pure function of the master seed regardless of how the work
/// is scheduled across threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(mix(golden, seed)), ctr_(0) {}

    /// Child stream for the given tag. Deriving the same tag twice yields the
    /// same child; distinct tags (or distinct parents) yield distinct keys.
    RngStream derive(std::uint64_t tag) const { return RngStream(mix(key_, tag), 0); }

    std::uint64_t next_u64() { return mix(key_, ctr_++); }

    /// Uniform draw on the open interval (0,1), symmetric around 1/2.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via inverse CDF (deterministic, one uniform per draw).
    double next_normal() { return normal_quantile(next_double()); }

    /// Uniform integer in [0, n), unbiased (rejection sampling).
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    std::uint64_t key() const { return key_; }

private:
    RngStream(std::uint64_t key, std::uint64_t ctr) : key_(key), ctr_(ctr) {}

    static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Stateless PRF over (key, x). The inner finalize spreads x so that the
    // combined input has no exploitable linear structure across streams.
    static std::uint64_t mix(std::uint64_t key, std::uint64_t x) {
        return finalize(key ^ (finalize(x + golden) + golden));
    }

    std::uint64_t key_;
    std::uint64_t ctr_;
};

}  // namespace loci
