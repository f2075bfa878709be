#pragma once
#include <array>
#include <cstdint>

namespace eigenchaos {

// Identity of one random stream. Monte Carlo code assigns every trial its own
// stream_id, so the values a trial sees depend only on (master_seed,
// stream_id) and never on how trials were scheduled across threads.
struct SeedStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// Per-stream generator: xoshiro256++ with its 256-bit state derived from the
// (master_seed, stream_id) pair. The derivation is the documented contract:
//
//   mix64(x): SplitMix64 finalizer
//     x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
//     x = (x ^ (x >> 27)) * 0x94D049BB133111EB
//     return x ^ (x >> 31)
//
//   h = mix64(master_seed + 0x9E3779B97F4A7C15) + stream_id
//   state[i] = mix64(h + (i+1) * 0x9E3779B97F4A7C15), i = 0..3
//
// (0x9E3779B97F4A7C15 is the 64-bit golden-ratio increment of SplitMix64.)
// Identical (master_seed, stream_id) therefore yields an identical value
// sequence on every platform, thread count, and run.
class Rng {
 public:
  explicit Rng(SeedStream id);
  Rng(std::uint64_t master_seed, std::uint64_t stream_id) : Rng(SeedStream{master_seed, stream_id}) {}

  SeedStream id() const { return id_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  // Standard normal via Box-Muller; pairs are cached, so draws come in a
  // fixed per-stream order.
  double normal();

  // Uniform integer in {0, ..., bound-1}, unbiased (rejection).
  std::uint64_t uniform_below(std::uint64_t bound);

  // Poisson(mean) by counting unit-rate exponential arrivals; exact for the
  // moderate means used here (O(mean) uniforms per draw). mean must be >= 0.
  long poisson(double mean);

  // A derived, statistically independent stream. Used for deterministic
  // redraws: fork(r) of the same parent with the same salt always yields the
  // same child stream. Child stream_id = mix64(stream_id ^ (salt+1 salted by
  // the golden ratio)); see rng.cpp.
  Rng fork(std::uint64_t salt) const;

 private:
  std::array<std::uint64_t, 4> s_{};
  SeedStream id_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace eigenchaos
