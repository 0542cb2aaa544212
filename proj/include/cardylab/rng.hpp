#pragma once

// Counter-based per-site randomness.
//
// Every uniform is a pure function of (seed, sample index, site index):
// three chained 64-bit finalizer rounds (splitmix64-style avalanche), one
// per component. There is no generator state, so any number of workers can
// evaluate any subset of samples and always see the same configurations,
// and coupled runs on different lattices share randomness exactly whenever
// they share site indices.
//
// The constants are part of the output format: frozen test values and golden
// CSV files depend on them. Any change must bump kMixerVersion.

#include <cstdint>

#include "cardylab/lattice.hpp"

namespace cardylab {

inline constexpr int kMixerVersion = 1;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t pack_site(Site s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.i)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.j));
}

// Avalanched prefix of one (seed, sample) pair; hoists the first two rounds
// out of the per-site loop when a whole configuration is drawn.
struct SampleKey {
  std::uint64_t h = 0;
};

constexpr SampleKey sample_key(std::uint64_t seed, std::uint64_t sample_idx) {
  const std::uint64_t h0 = mix64(seed ^ 0x243f6a8885a308d3ull);  // pi fraction bits
  return {mix64(h0 ^ (sample_idx + 0x9e3779b97f4a7c15ull))};
}

constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

constexpr double site_uniform(SampleKey key, Site s) {
  return to_unit_interval(mix64(key.h ^ pack_site(s)));
}

constexpr double site_uniform(std::uint64_t seed, std::uint64_t sample_idx, Site s) {
  return site_uniform(sample_key(seed, sample_idx), s);
}

}  // namespace cardylab
