#include "eqplant/rng.hpp"

#include <limits>
#include <stdexcept>

namespace eqplant {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                          std::initializer_list<std::uint64_t> ids) noexcept {
  std::uint64_t h = splitmix64(seed ^ hash_tag(tag));
  for (const auto id : ids) h = splitmix64(h ^ id);
  return h;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // Accept draws below the largest multiple of bound in [0, 2^64).
  const std::uint64_t last_accepted = kMax - (kMax % bound + 1) % bound;
  std::uint64_t x = rng();
  while (x > last_accepted) x = rng();
  return x % bound;
}

double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace eqplant
