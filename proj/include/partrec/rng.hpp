#pragma once

#include <cstdint>

namespace partrec {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Counter-based draw keyed by (seed, stream, counter). The value depends only
/// on the key, never on evaluation order.
constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ull);
  h = splitmix64(h ^ stream);
  return splitmix64(h ^ (counter * 0xd1b54a32d192ed03ull));
}

/// Maps 64 random bits to the open interval (0, 1): midpoints of a 2^-52
/// lattice, so both extremes (2^-53 and 1 - 2^-53) are exact doubles.
constexpr double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// A seeded stream of uniforms: the k-th draw is counter_hash(seed, stream, k).
class RngStream {
 public:
  constexpr RngStream(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  constexpr double uniform() { return to_open_unit(counter_hash(seed_, stream_, counter_++)); }
  constexpr std::uint64_t bits() { return counter_hash(seed_, stream_, counter_++); }
  constexpr std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace partrec
