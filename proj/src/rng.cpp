#include "eigenchaos/rng.hpp"

#include <cmath>

#include "eigenchaos/common.hpp"

namespace eigenchaos {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(SeedStream id) : id_(id) {
  const std::uint64_t h = mix64(id.master_seed + kGolden) + id.stream_id;
  for (int i = 0; i < 4; ++i) {
    s_[i] = mix64(h + static_cast<std::uint64_t>(i + 1) * kGolden);
  }
  // All-zero state would lock xoshiro at zero; unreachable in practice but
  // cheap to guard.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kGolden;
}

std::uint64_t Rng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // 1 - U keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("uniform_below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t x = next_u64();
    if (x < limit) return x % bound;
  }
}

long Rng::poisson(double mean) {
  if (mean < 0 || !std::isfinite(mean)) throw ValidationError("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  long k = 0;
  double acc = -std::log(1.0 - uniform01());
  while (acc <= mean) {
    ++k;
    acc += -std::log(1.0 - uniform01());
  }
  return k;
}

Rng Rng::fork(std::uint64_t salt) const {
  const std::uint64_t child = mix64(id_.stream_id ^ ((salt + 1) * kGolden));
  return Rng(SeedStream{id_.master_seed, child});
}

}  // namespace eigenchaos
