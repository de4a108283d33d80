#pragma once

#include <cstdint>
#include <limits>

namespace pigeonsim {

/// SplitMix64 (Steele, Lea & Flood). Output is fully specified by the
/// algorithm, so sampled results are bit-identical on every platform.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    /// Stream for one shot: the state starts at mix(seed) advanced by shot_index + 1
    /// golden-ratio increments, so shot streams never depend on execution order.
    static constexpr SplitMix64 for_shot(std::uint64_t seed, std::uint64_t shot_index) noexcept {
        return SplitMix64(mix(seed) + (shot_index + 1) * kGamma);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace pigeonsim
