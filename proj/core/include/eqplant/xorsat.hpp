#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqplant/gf2.hpp"

namespace eqplant {

struct Clause {
  std::vector<std::uint32_t> vars;  // sorted, distinct
  std::uint8_t rhs = 0;             // parity of the vars' values

  bool operator==(const Clause&) const = default;
};

// A k-uniform, r-regular linear system over GF(2). Clause i reads
//   x[vars[0]] ^ x[vars[1]] ^ ... = rhs.
struct XorsatSystem {
  std::size_t n_vars = 0;
  unsigned k = 3;
  unsigned r = 3;
  std::vector<Clause> clauses;
  std::uint64_t seed = 0;
  std::optional<BitVector> planted;
  // Generator restarts (regular) or draws (nullity targeting) consumed.
  std::size_t attempts = 1;

  std::size_t n_clauses() const noexcept { return clauses.size(); }
  Gf2Matrix coefficients() const;
  BitVector rhs() const;

  bool operator==(const XorsatSystem&) const = default;
};

inline constexpr std::size_t kMaxShuffleRestarts = 10'000;

// Draws r independent shuffles of (0..n-1), concatenates them into L of length
// n*r, and forms clause i from L[i], L[i+m], ..., L[i+(k-1)m] with m = n*r/k.
// For k == r this is exactly "clause i = the i-th entries of k shuffles". Any
// clause with a repeated index restarts the whole draw. The right-hand side is
// a fresh uniform bit vector, so the result may be inconsistent.
//
// Streams: shuffles come from derive_seed(seed, "shuffle"), the right-hand
// side from derive_seed(seed, "rhs").
XorsatSystem generate_regular(std::size_t n, unsigned k, unsigned r, std::uint64_t seed);

// Sets every rhs to the parity of `assignment` on the clause and records it.
XorsatSystem plant(XorsatSystem system, const BitVector& assignment);
// Plants a uniform assignment drawn from derive_seed(seed, "plant").
XorsatSystem plant(XorsatSystem system, std::uint64_t seed);

// Draw t (t = 0, 1, ...) is generate_regular(n, k, r, derive_seed(seed, "attempt", {t}))
// and is kept once its coefficient matrix has nullity d_target; it is then
// planted from derive_seed(seed, "plant"). The result carries the master
// seed and the number of draws used.
XorsatSystem generate_with_nullity(std::size_t n, std::size_t d_target, std::uint64_t seed,
                                   std::size_t max_attempts, unsigned k = 3, unsigned r = 3);

// Rejection mode: keeps the random right-hand side and redraws until the
// system is consistent (and, if given, has the requested nullity). No
// planted assignment is recorded.
XorsatSystem generate_filtered(std::size_t n, std::optional<std::size_t> d_target,
                               std::uint64_t seed, std::size_t max_attempts, unsigned k = 3,
                               unsigned r = 3);

// F_2 = -sum_i (-1)^{b_i} prod_{j in clause i} s_j with s_j = (-1)^{x_j},
// which equals (#violated - #satisfied).
long cost(const XorsatSystem& system, const BitVector& assignment);
std::size_t violated_count(const XorsatSystem& system, const BitVector& assignment);
bool is_solution(const XorsatSystem& system, const BitVector& assignment);

// True when every clause has k distinct in-range indices and every variable
// appears exactly r times.
bool is_regular(const XorsatSystem& system);

struct SystemAnalysis {
  std::size_t rank = 0;
  std::size_t nullity = 0;
  bool satisfiable = false;
  std::optional<std::uint64_t> n_ground_states;  // 2^nullity when satisfiable and it fits
  // Exact when satisfiable (-m). For unsatisfiable systems it is computed by
  // exhaustive search when n_vars <= kExactUnsatLimit, otherwise absent.
  std::optional<long> ground_cost;
  // Always valid: -m when satisfiable, -m + 2 otherwise.
  long ground_cost_lower_bound = 0;
  Gf2SolutionSet solutions;
};

inline constexpr std::size_t kExactUnsatLimit = 22;

SystemAnalysis analyze(const XorsatSystem& system);

// Instance file, format tag "xorsat-v1". Fields in fixed order:
// format, n, k, r, seed, clauses, nullity, planted.
std::string to_json(const XorsatSystem& system);
// Throws FormatError naming the field at fault; the stored nullity must agree
// with the recomputed one.
XorsatSystem system_from_json(std::string_view text);

}  // namespace eqplant
