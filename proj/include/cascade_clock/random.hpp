#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cascade_clock {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Uniform integer in [0, bound) by multiply-shift; bias is below 2^-64 * bound.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(rng()) * bound) >> 64);
}

/// Calls `fn(k)` for every k in [0, total) that succeeds in an independent
/// Bernoulli(p) trial, using geometric skips between successes.
template <typename Fn>
void for_each_success(std::uint64_t total, double p, Rng& rng, Fn&& fn) {
  if (total == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::uint64_t k = 0; k < total; ++k) fn(k);
    return;
  }
  const double log_q = std::log1p(-p);
  std::uint64_t k = 0;
  while (true) {
    const double skip = std::floor(std::log1p(-uniform01(rng)) / log_q);
    if (skip >= static_cast<double>(total - k)) return;
    k += static_cast<std::uint64_t>(skip);
    fn(k);
    if (++k >= total) return;
  }
}

}  // namespace cascade_clock
