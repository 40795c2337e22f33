#pragma once

#include <cstdint>

namespace slrt {

/// SplitMix64 finalizer; maps (base, stream) to well-separated engine seeds so
/// that ensemble members are independent of scheduling.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream tags so different consumers of one seed never share a sequence.
inline constexpr std::uint64_t kStreamBumpPosition = 1;
inline constexpr std::uint64_t kStreamUntexture = 2;
inline constexpr std::uint64_t kStreamRmtTwin = 3;

}  // namespace slrt
