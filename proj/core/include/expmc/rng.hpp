// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace expmc {

/// Deterministic counter-based random stream (Philox 4x32, 10 rounds).
///
/// A stream is addressed by (seed, level, sample index, lane); the key and
/// the fixed part of the counter encode the address, the low counter word
/// enumerates 128-bit blocks. Identical addresses give identical draw
/// sequences on every platform and under any thread scheduling; distinct
/// addresses give statistically independent streams.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint32_t level, std::uint64_t sample_index,
              std::uint32_t lane = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          base_{0u,
                static_cast<std::uint32_t>(sample_index),
                static_cast<std::uint32_t>(sample_index >> 32),
                (level & 0xFFFFFFu) | (lane << 24)} {}

    /// Next double in [0, 1), 53 random mantissa bits. Never returns 1.
    double next_uniform() {
        if (cached_ == 0) refill();
        const std::uint64_t bits = buffer_[--cached_];
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static void round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    }

    void refill() {
        std::array<std::uint32_t, 4> c = base_;
        c[0] = block_++;
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int r = 0; r < 10; ++r) {
            round(c, k0, k1);
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        buffer_[0] = (static_cast<std::uint64_t>(c[0]) << 32) | c[1];
        buffer_[1] = (static_cast<std::uint64_t>(c[2]) << 32) | c[3];
        cached_ = 2;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> base_;
    std::uint32_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int cached_ = 0;
};

/// The unique stream for (seed, level, sample_index, lane).
inline RngStream stream_for(std::uint64_t seed, std::uint32_t level, std::uint64_t sample_index,
                            std::uint32_t lane = 0) {
    return RngStream(seed, level, sample_index, lane);
}

inline double draw_uniform(RngStream& stream) { return stream.next_uniform(); }

/// Exponential holding time by inverse CDF on 1 - U (so log(0) cannot occur).
/// rate == 0 models an absorbing state and yields +inf.
inline double draw_exponential(RngStream& stream, double rate) {
    if (rate < 0.0) throw std::invalid_argument("exponential rate must be >= 0");
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-stream.next_uniform()) / rate;
}

}  // namespace expmc
