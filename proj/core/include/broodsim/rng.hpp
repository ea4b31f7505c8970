#pragma once

#include <cstdint>

namespace broodsim {

// SplitMix64 finalizer (Steele, Lea & Flood; Vigna's fixed-increment variant).
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// Derive an independent sub-seed from (seed, domain, index). Used to hand each
// replicate / work unit its own reproducible seed without sharing any state.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t domain,
                                 std::uint64_t index) noexcept {
  std::uint64_t s = mix64(seed + kGolden);
  s = mix64(s ^ (domain + kGolden));
  return mix64(s ^ (index + kGolden));
}

// Counter-style generator for one named stream. The stream is keyed by
// (seed, k1, k2, k3) -- in the simulation: (seed, generation, phase, agent) --
// so any agent's draws can be produced on any worker without coordination,
// and the whole run is reproducible from the model seed alone.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2,
            std::uint64_t k3) noexcept {
    std::uint64_t s = mix64(seed + kGolden);
    s = mix64(s ^ (k1 + kGolden));
    s = mix64(s ^ (k2 + kGolden));
    state_ = mix64(s ^ (k3 + kGolden));
  }

  std::uint64_t next_u64() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), unbiased (Lemire's multiply-shift rejection).
  std::uint64_t next_below(std::uint64_t n) noexcept {
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) *
            static_cast<unsigned __int128>(n);
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace broodsim
