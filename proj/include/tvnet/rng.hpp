#pragma once

#include <array>
#include <cstdint>

namespace tvnet {

/// Philox4x64-10 counter-based generator (Salmon et al., 2011). Each 256-bit
/// counter maps independently to four 64-bit outputs under a 128-bit key, so
/// streams can be sliced by (replicate, unit, purpose) without any
/// sequential seeding and sampled in parallel with identical results.
struct Philox4x64 {
    static constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::array<std::uint64_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            unsigned __int128 p0 = static_cast<unsigned __int128>(kMult0) * ctr[0];
            unsigned __int128 p1 = static_cast<unsigned __int128>(kMult1) * ctr[2];
            std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
            std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
            std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
            std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

/// Sequential draws from one Philox stream. The stream is addressed by
/// (seed, purpose, replicate, unit); the block index occupies the first
/// counter word.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t replicate,
                  std::uint64_t unit)
        : key_{seed, purpose}, base_{0, replicate, unit, purpose} {}

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            ++base_[0];
            pos_ = 0;
        }
        if (pos_ == 0) buffer_ = Philox4x64::block(base_, key_);
        return buffer_[pos_++];
    }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> base_;
    std::array<std::uint64_t, 4> buffer_{};
    int pos_ = 0;
};

/// Stream purposes used by the generators; fixed so artifacts reproduce.
namespace rng_purpose {
inline constexpr std::uint64_t kSampling = 0;
inline constexpr std::uint64_t kTrendCoins = 1;
inline constexpr std::uint64_t kLatentPaths = 2;
} // namespace rng_purpose

} // namespace tvnet
