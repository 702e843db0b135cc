#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eqplant {

// Index of the unordered pair (i, j), i < j, among n spins in the order
// (0,1), (0,2), ..., (0,n-1), (1,2), ...
constexpr std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) noexcept {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Integer two-body Ising term set on k clause spins (0..k-1) followed by
// `aux` auxiliary spins. Spin configurations are bit masks: bit t set means
// spin t is -1.
struct Gadget {
  unsigned k = 0;
  unsigned aux = 0;
  int parity = 1;  // required product of the clause spins, +1 or -1
  int ground_energy = 0;
  std::vector<int> fields;     // length k + aux
  std::vector<int> couplings;  // length C(k + aux, 2), pair_index order

  unsigned spins() const noexcept { return k + aux; }
  int coupling(std::size_t i, std::size_t j) const;
  int energy(std::uint32_t config) const;

  bool operator==(const Gadget&) const = default;
};

// Parameters in the order (h, h_aux, J, J_aux): h on every clause spin,
// h_aux on the auxiliary, J between clause spins, J_aux between the
// auxiliary and every clause spin.
struct SymmetricParams {
  int h = 0;
  int h_aux = 0;
  int j = 0;
  int j_aux = 0;

  bool operator==(const SymmetricParams&) const = default;
};

inline constexpr SymmetricParams kXor3Params{-1, -2, 1, 2};
inline constexpr SymmetricParams kXor3ParamsAlt{-1, 2, 1, -2};

// Fully connected 3 + 1 spin gadget from symmetric parameters. ground_energy
// is filled by enumeration.
Gadget symmetric_3xor(SymmetricParams p, int parity);

// b = 0: kXor3Params, ground states on the clause spins are the four
// product-(+1) triples, energy -4. b = 1: the same gadget gauge-flipped on
// clause spin 0, which keeps the energy and flips the parity.
Gadget builtin_3xor(int b);

// Negate the field of `spin` and every coupling incident on it. Flips the
// parity iff `spin` is a clause spin.
Gadget gauge_flip(Gadget g, unsigned spin);

struct VerificationReport {
  int ground_energy = 0;
  std::vector<std::uint32_t> ground_configs;   // full masks, ascending
  std::vector<std::uint32_t> clause_manifold;  // distinct clause-spin masks, ascending
  std::optional<int> gap;  // lowest wrong-parity energy minus ground energy
  bool declared_energy_matches = false;
  bool pass = false;
};

inline constexpr unsigned kMaxVerifySpins = 24;
inline constexpr unsigned kMaxSearchSpins = 20;

// Exhaustive check over all 2^(k+aux) configurations. Passes iff the clause
// manifold has exactly 2^(k-1) members, all of the declared parity, and the
// declared ground energy is the true minimum. Throws std::invalid_argument
// above kMaxVerifySpins.
VerificationReport verify(const Gadget& g);

// Brute-force search on the fully connected (k + aux)-spin graph for a
// gadget whose clause manifold is the parity-`parity` set.
//
// Order: first the permutation-symmetric ansatz (clause spins share h and J;
// auxiliaries share h_aux, J_aux to every clause spin and K among
// themselves), then the general scan over all fields and couplings. Within
// each phase, candidates are visited by increasing maximum magnitude
// M = 0, 1, ..., max_magnitude and, for equal M, in ascending lexicographic
// order of the parameter tuple ((h, h_aux, J, J_aux[, K]) for the ansatz;
// fields then couplings in pair_index order for the general scan). The first
// passing candidate is returned.
std::optional<Gadget> search(unsigned k, unsigned aux, int max_magnitude, int parity);

// Verified gadgets keyed by (k, parity).
class GadgetLibrary {
 public:
  // k = 1, 2 and the k = 3 built-ins, both parities.
  static GadgetLibrary standard();

  // Throws DomainError unless the gadget verifies.
  void add(Gadget g);
  bool contains(unsigned k, int parity) const;
  // Throws DomainError when no gadget is registered.
  const Gadget& get(unsigned k, int parity) const;

 private:
  std::map<std::pair<unsigned, int>, Gadget> gadgets_;
};

// {"spins","k","aux","parity","ground_energy","h":[...],"J":[[i,j,v],...]}.
// Zero couplings are omitted from "J".
std::string to_json(const Gadget& g);
Gadget gadget_from_json(std::string_view text);

}  // namespace eqplant
