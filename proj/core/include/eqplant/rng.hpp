#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace eqplant {

// All randomness in the toolkit flows through std::mt19937_64, whose output
// sequence is fixed by the standard. Distributions are implemented here
// rather than taken from <random> because the standard leaves their
// algorithms unspecified, and instance files must regenerate bit-exactly
// from a seed on any platform.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// 64-bit FNV-1a of a tag string.
std::uint64_t hash_tag(std::string_view tag) noexcept;

// Stream derivation rule:
//   h = splitmix64(seed ^ hash_tag(tag)); for each id: h = splitmix64(h ^ id)
// Every named stream (shuffles, right-hand sides, replicas, batch members)
// is derived from its parent seed this way.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                          std::initializer_list<std::uint64_t> ids = {}) noexcept;

inline Rng make_stream(std::uint64_t seed, std::string_view tag,
                       std::initializer_list<std::uint64_t> ids = {}) {
  return Rng{derive_seed(seed, tag, ids)};
}

// Uniform integer in [0, bound) by rejection on the top of the 64-bit range.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform_unit(Rng& rng);

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

// Fisher-Yates, descending index.
template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace eqplant
