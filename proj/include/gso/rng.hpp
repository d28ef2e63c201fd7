#ifndef GSO_RNG_HPP
#define GSO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gso {

// Project-wide random stream. std::mt19937_64 has a fully specified output
// sequence, and every transform below is written out by hand (the standard
// distributions are implementation-defined), so a seed reproduces the same
// instance on every platform.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream for replica `index` of a run seeded with `seed`.
inline Rng replica_rng(std::uint64_t seed, std::uint64_t index)
{
  return Rng(seed ^ splitmix64(index));
}

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound), rejection sampled so there is no modulo bias.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound)
{
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit)
    x = rng();
  return x % bound;
}

// Standard normal by Box-Muller; one draw per call, the sine branch is dropped.
inline double standard_normal(Rng& rng)
{
  double u1 = uniform01(rng);
  while (u1 <= 0.0)
    u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <typename T>
void shuffle(T& items, Rng& rng)
{
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace gso

#endif  // GSO_RNG_HPP
