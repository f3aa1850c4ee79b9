#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace svx {

// All randomness in the library flows from one master seed through
// derive_seed. Stream ids are structured as (purpose, replicate): every
// consumer derives its own independent generator, so results do not depend
// on scheduling or thread count.
//
// The derivation is a SplitMix64 finalizer over master + golden-ratio
// multiples of the stream id. Distinct (master, stream) pairs map to
// well-separated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Fixed stream-id offsets for the major consumers. Replicate r of a given
// purpose uses stream = purpose + r * kStreamStride.
enum StreamPurpose : std::uint64_t {
  kStreamGaussianPath = 1,
  kStreamInnovations = 2,
  kStreamLimitMc = 3,
  kStreamThreshold = 4,
  kStreamShuffle = 5,
};
inline constexpr std::uint64_t kStreamStride = 1000;

// mt19937_64 with explicit uniform/normal transforms so the sampled values
// are pinned by this file rather than by the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0,1), 53-bit resolution, endpoints excluded.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller, pairs cached.
  double normal();

  std::uint64_t bits() { return engine_(); }

  // Fisher-Yates index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % n);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Deterministic parallel Monte Carlo: `total` iterations are split over a
// fixed number of logical streams (independent of thread count), each stream
// carries its own generator, and per-stream accumulators are merged in
// stream order. `body(rng, accum)` is called once per iteration.
inline constexpr int kMcStreams = 64;

struct StreamSlice {
  std::uint64_t begin;
  std::uint64_t count;
  std::uint64_t seed;
};

std::vector<StreamSlice> mc_slices(std::uint64_t total, std::uint64_t seed,
                                   std::uint64_t purpose);

}  // namespace svx
