#pragma once

// Counter-based deterministic RNG: every draw is a pure function of
// (seed, stream, counter), so sharded sampling reproduces bit-for-bit
// regardless of thread count or evaluation order.

#include <cstdint>

namespace bumpforge {

namespace rngdetail {
inline std::uint64_t avalanche(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace rngdetail

inline std::uint64_t rng_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  using rngdetail::avalanche;
  return avalanche(seed ^ avalanche(stream ^ avalanche(counter ^ 0x6a09e667f3bcc909ull)));
}

// Strictly inside (0, 1): safe under log().
inline double rng_u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return (static_cast<double>(rng_word(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

inline double rng_angle(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return rng_u01(seed, stream, counter) * 6.283185307179586476925286766559;
}

inline double rng_loguniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                             double lo, double hi) {
  const double u = rng_u01(seed, stream, counter);
  return lo * std::exp(u * std::log(hi / lo));
}

}  // namespace bumpforge
