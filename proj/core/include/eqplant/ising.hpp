#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqplant/gadgets.hpp"
#include "eqplant/gf2.hpp"
#include "eqplant/xorsat.hpp"

namespace eqplant {

// Configuration of +/-1 spins.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::size_t n, std::int8_t value = 1) : spins_(n, value) {}
  // Throws std::invalid_argument on any entry other than +1/-1.
  explicit SpinConfig(std::vector<std::int8_t> spins);

  // s_i = (-1)^{x_i}
  static SpinConfig from_bits(const BitVector& x);
  // Inverse of from_bits over the first `count` spins.
  BitVector to_bits(std::size_t count) const;

  std::size_t size() const noexcept { return spins_.size(); }
  int operator[](std::size_t i) const noexcept { return spins_[i]; }
  void set(std::size_t i, int value) noexcept { spins_[i] = static_cast<std::int8_t>(value); }
  void flip(std::size_t i) noexcept { spins_[i] = static_cast<std::int8_t>(-spins_[i]); }
  std::span<const std::int8_t> values() const noexcept { return spins_; }

  bool operator==(const SpinConfig&) const = default;
  auto operator<=>(const SpinConfig&) const = default;

 private:
  std::vector<std::int8_t> spins_;
};

struct Coupling {
  std::uint32_t i = 0;
  std::uint32_t j = 0;  // i < j
  int value = 0;

  bool operator==(const Coupling&) const = default;
};

struct Neighbor {
  std::uint32_t spin = 0;
  int coupling = 0;
};

// Where the spins of a compiled instance came from: the first n_logical spins
// are the XORSAT variables; the auxiliaries of clause c are
// aux_begin[c] .. aux_begin[c] + aux_count[c] - 1.
struct Provenance {
  std::size_t n_logical = 0;
  std::vector<std::uint32_t> aux_begin;
  std::vector<std::uint32_t> aux_count;

  bool operator==(const Provenance&) const = default;
};

// Two-body integer Ising cost  sum_{i<j} J_ij s_i s_j + sum_i h_i s_i.
class IsingInstance {
 public:
  IsingInstance() = default;
  // Duplicate pairs are summed, zero couplings dropped, and the list sorted.
  IsingInstance(std::size_t n_spins, std::vector<int> fields, std::vector<Coupling> couplings,
                std::optional<long> ground_energy = std::nullopt,
                std::optional<Provenance> provenance = std::nullopt);

  std::size_t n_spins() const noexcept { return fields_.size(); }
  std::span<const int> fields() const noexcept { return fields_; }
  std::span<const Coupling> couplings() const noexcept { return couplings_; }
  std::span<const Neighbor> neighbors(std::size_t spin) const noexcept {
    return {adjacency_.data() + offsets_[spin], offsets_[spin + 1] - offsets_[spin]};
  }
  const std::optional<long>& ground_energy() const noexcept { return ground_energy_; }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

  // Largest possible |delta E| of a single flip: 2 (|h_i| + sum_j |J_ij|).
  long max_flip_delta() const noexcept { return max_flip_delta_; }
  int max_abs_coupling() const noexcept;

  bool operator==(const IsingInstance& other) const {
    return fields_ == other.fields_ && couplings_ == other.couplings_ &&
           ground_energy_ == other.ground_energy_;
  }

 private:
  std::vector<int> fields_;
  std::vector<Coupling> couplings_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::optional<long> ground_energy_;
  std::optional<Provenance> provenance_;
  long max_flip_delta_ = 0;
};

// Sums per-clause gadgets: clause spin t of clause c is variable vars[t];
// auxiliaries are appended after the logical spins in clause order, so with
// one auxiliary per clause the auxiliary of clause c is spin n + c. The
// ground energy is the sum of gadget ground energies when the system is
// satisfiable and unknown otherwise.
IsingInstance compile(const XorsatSystem& system, const GadgetLibrary& gadgets);

// Throws std::invalid_argument on length mismatch.
long energy(const IsingInstance& instance, const SpinConfig& config);

// Logical spins from x, every auxiliary block set to its lowest-energy
// values given its clause spins (first minimizer in mask order on ties).
// Works for any assignment.
SpinConfig extend_assignment(const XorsatSystem& system, const GadgetLibrary& gadgets,
                             const BitVector& x);
// As extend_assignment, but throws DomainError unless x solves the system.
SpinConfig extend(const XorsatSystem& system, const GadgetLibrary& gadgets, const BitVector& x);

struct StructureReport {
  std::size_t n_spins = 0;
  std::size_t max_degree = 0;
  int field_min = 0;
  int field_max = 0;
  int coupling_min = 0;
  int coupling_max = 0;
  std::optional<long> ground_energy;
};

StructureReport structure_report(const IsingInstance& instance);

struct GroundStates {
  long energy_min = 0;
  std::vector<SpinConfig> configs;  // in Gray-code visit order
};

inline constexpr std::size_t kBruteForceSpinCap = 26;

// Exhaustive Gray-code enumeration. Throws DomainError when n_spins > cap or
// when more than max_configs configurations share the minimum.
GroundStates brute_force_ground_states(const IsingInstance& instance,
                                       std::size_t cap = kBruteForceSpinCap,
                                       std::size_t max_configs = std::size_t{1} << 20);

// Text format:
//   p ising <n_spins> <ground_energy|?>
//   h <i> <value>        one per nonzero field, ascending i
//   J <i> <j> <value>    one per nonzero coupling, i < j, lexicographic
std::string to_text(const IsingInstance& instance);
// Throws FormatError with the offending line number.
IsingInstance ising_from_text(std::string_view text);

}  // namespace eqplant
