#include "eqplant/xorsat.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "eqplant/errors.hpp"
#include "eqplant/rng.hpp"

namespace eqplant {

Gf2Matrix XorsatSystem::coefficients() const {
  Gf2Matrix a(clauses.size(), n_vars);
  for (std::size_t i = 0; i < clauses.size(); ++i)
    for (const auto v : clauses[i].vars) a.set(i, v, true);
  return a;
}

BitVector XorsatSystem::rhs() const {
  BitVector b(clauses.size());
  for (std::size_t i = 0; i < clauses.size(); ++i) b.set(i, clauses[i].rhs != 0);
  return b;
}

namespace {

void check_shape(std::size_t n, unsigned k, unsigned r) {
  if (n == 0 || k == 0 || r == 0)
    throw std::invalid_argument("generate_regular: n, k and r must be positive");
  if (k > n) throw std::invalid_argument("generate_regular: k exceeds the number of variables");
  if ((n * r) % k != 0)
    throw std::invalid_argument("generate_regular: n*r = " + std::to_string(n * r) +
                                " is not divisible by k = " + std::to_string(k));
}

void check_length(const XorsatSystem& system, const BitVector& x, const char* who) {
  if (x.size() != system.n_vars)
    throw std::invalid_argument(std::string(who) + ": assignment has " + std::to_string(x.size()) +
                                " bits, system has " + std::to_string(system.n_vars) +
                                " variables");
}

bool clause_parity(const Clause& c, const BitVector& x) {
  bool p = false;
  for (const auto v : c.vars) p ^= x.get(v);
  return p;
}

}  // namespace

XorsatSystem generate_regular(std::size_t n, unsigned k, unsigned r, std::uint64_t seed) {
  check_shape(n, k, r);
  const std::size_t m = n * r / k;
  Rng shuffles = make_stream(seed, "shuffle");

  std::vector<std::uint32_t> slots(n * r);
  std::vector<Clause> clauses(m);
  std::size_t restarts = 0;
  for (;;) {
    for (std::size_t s = 0; s < r; ++s) {
      auto block = std::span(slots).subspan(s * n, n);
      std::iota(block.begin(), block.end(), std::uint32_t{0});
      shuffle(block, shuffles);
    }
    bool repeat_free = true;
    for (std::size_t i = 0; i < m && repeat_free; ++i) {
      auto& vars = clauses[i].vars;
      vars.resize(k);
      for (std::size_t t = 0; t < k; ++t) vars[t] = slots[i + t * m];
      std::sort(vars.begin(), vars.end());
      repeat_free = std::adjacent_find(vars.begin(), vars.end()) == vars.end();
    }
    if (repeat_free) break;
    if (++restarts >= kMaxShuffleRestarts)
      throw DomainError("generate_regular: no repeat-free clause set after " +
                        std::to_string(kMaxShuffleRestarts) + " restarts");
  }

  Rng rhs = make_stream(seed, "rhs");
  for (auto& c : clauses) c.rhs = coin(rhs) ? 1 : 0;

  XorsatSystem out;
  out.n_vars = n;
  out.k = k;
  out.r = r;
  out.clauses = std::move(clauses);
  out.seed = seed;
  out.attempts = restarts + 1;
  return out;
}

XorsatSystem plant(XorsatSystem system, const BitVector& assignment) {
  check_length(system, assignment, "plant");
  for (auto& c : system.clauses) c.rhs = clause_parity(c, assignment) ? 1 : 0;
  system.planted = assignment;
  return system;
}

XorsatSystem plant(XorsatSystem system, std::uint64_t seed) {
  Rng rng = make_stream(seed, "plant");
  BitVector x(system.n_vars);
  for (std::size_t i = 0; i < x.size(); ++i) x.set(i, coin(rng));
  return plant(std::move(system), x);
}

XorsatSystem generate_with_nullity(std::size_t n, std::size_t d_target, std::uint64_t seed,
                                   std::size_t max_attempts, unsigned k, unsigned r) {
  if (max_attempts == 0) throw std::invalid_argument("generate_with_nullity: max_attempts < 1");
  for (std::size_t t = 0; t < max_attempts; ++t) {
    XorsatSystem s = generate_regular(n, k, r, derive_seed(seed, "attempt", {t}));
    const std::size_t nullity = n - rank(s.coefficients());
    if (nullity != d_target) continue;
    s = plant(std::move(s), seed);
    s.seed = seed;
    s.attempts = t + 1;
    return s;
  }
  throw DomainError("generate_with_nullity: no system with nullity " + std::to_string(d_target) +
                    " at n = " + std::to_string(n) + " within " + std::to_string(max_attempts) +
                    " attempts");
}

XorsatSystem generate_filtered(std::size_t n, std::optional<std::size_t> d_target,
                               std::uint64_t seed, std::size_t max_attempts, unsigned k,
                               unsigned r) {
  if (max_attempts == 0) throw std::invalid_argument("generate_filtered: max_attempts < 1");
  for (std::size_t t = 0; t < max_attempts; ++t) {
    XorsatSystem s = generate_regular(n, k, r, derive_seed(seed, "attempt", {t}));
    const Gf2SolutionSet sol = solve_affine(s.coefficients(), s.rhs());
    if (!sol.consistent) continue;
    if (d_target && sol.nullity != *d_target) continue;
    s.seed = seed;
    s.attempts = t + 1;
    return s;
  }
  throw DomainError("generate_filtered: no satisfiable system within " +
                    std::to_string(max_attempts) + " attempts");
}

std::size_t violated_count(const XorsatSystem& system, const BitVector& assignment) {
  check_length(system, assignment, "violated_count");
  std::size_t violated = 0;
  for (const auto& c : system.clauses)
    if (clause_parity(c, assignment) != (c.rhs != 0)) ++violated;
  return violated;
}

long cost(const XorsatSystem& system, const BitVector& assignment) {
  check_length(system, assignment, "cost");
  long total = 0;
  for (const auto& c : system.clauses) {
    // s_j = (-1)^{x_j}, so the product of spins is (-1)^{parity}.
    const int product = clause_parity(c, assignment) ? -1 : 1;
    const int sign = c.rhs ? -1 : 1;
    total -= sign * product;
  }
  return total;
}

bool is_solution(const XorsatSystem& system, const BitVector& assignment) {
  return violated_count(system, assignment) == 0;
}

bool is_regular(const XorsatSystem& system) {
  std::vector<unsigned> occurrences(system.n_vars, 0);
  for (const auto& c : system.clauses) {
    if (c.vars.size() != system.k) return false;
    for (std::size_t t = 0; t < c.vars.size(); ++t) {
      if (c.vars[t] >= system.n_vars) return false;
      if (t > 0 && c.vars[t] <= c.vars[t - 1]) return false;
      ++occurrences[c.vars[t]];
    }
  }
  return std::all_of(occurrences.begin(), occurrences.end(),
                     [&](unsigned o) { return o == system.r; });
}

SystemAnalysis analyze(const XorsatSystem& system) {
  SystemAnalysis a;
  a.solutions = solve_affine(system.coefficients(), system.rhs());
  a.rank = a.solutions.rank;
  a.nullity = a.solutions.nullity;
  a.satisfiable = a.solutions.consistent;
  const long m = static_cast<long>(system.n_clauses());
  if (a.satisfiable) {
    a.n_ground_states = a.solutions.solution_count();
    a.ground_cost = -m;
    a.ground_cost_lower_bound = -m;
    return a;
  }
  a.ground_cost_lower_bound = -m + 2;
  if (system.n_vars <= kExactUnsatLimit) {
    long best = m;
    BitVector x(system.n_vars);
    const std::uint64_t total = std::uint64_t{1} << system.n_vars;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      for (std::size_t i = 0; i < system.n_vars; ++i) x.set(i, (bits >> i) & 1U);
      best = std::min(best, cost(system, x));
    }
    a.ground_cost = best;
  }
  return a;
}

namespace {

using ordered_json = nlohmann::ordered_json;

template <class T>
T require(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("instance file: missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("instance file: field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

std::string to_json(const XorsatSystem& system) {
  const SystemAnalysis analysis = analyze(system);
  ordered_json j;
  j["format"] = "xorsat-v1";
  j["n"] = system.n_vars;
  j["k"] = system.k;
  j["r"] = system.r;
  j["seed"] = system.seed;
  ordered_json clauses = ordered_json::array();
  for (const auto& c : system.clauses) {
    ordered_json cj;
    cj["vars"] = c.vars;
    cj["b"] = static_cast<int>(c.rhs);
    clauses.push_back(std::move(cj));
  }
  j["clauses"] = std::move(clauses);
  j["nullity"] = analysis.nullity;
  if (system.planted) {
    std::vector<int> bits(system.n_vars);
    for (std::size_t i = 0; i < system.n_vars; ++i) bits[i] = system.planted->get(i) ? 1 : 0;
    j["planted"] = bits;
  } else {
    j["planted"] = nullptr;
  }
  return j.dump() + "\n";
}

XorsatSystem system_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("instance file: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("instance file: top level is not an object");
  if (require<std::string>(j, "format") != "xorsat-v1")
    throw FormatError("instance file: field \"format\" must be \"xorsat-v1\"");

  XorsatSystem s;
  s.n_vars = require<std::size_t>(j, "n");
  s.k = require<unsigned>(j, "k");
  s.r = require<unsigned>(j, "r");
  s.seed = require<std::uint64_t>(j, "seed");
  if (!j.contains("clauses") || !j["clauses"].is_array())
    throw FormatError("instance file: field \"clauses\" must be an array");
  std::size_t index = 0;
  for (const auto& cj : j["clauses"]) {
    const std::string where = "clauses[" + std::to_string(index) + "]";
    if (!cj.is_object() || !cj.contains("vars") || !cj.contains("b"))
      throw FormatError("instance file: " + where + " needs \"vars\" and \"b\"");
    Clause c;
    try {
      c.vars = cj["vars"].get<std::vector<std::uint32_t>>();
    } catch (const nlohmann::json::exception&) {
      throw FormatError("instance file: " + where + ".vars is not an index list");
    }
    if (!cj["b"].is_number_integer() || (cj["b"] != 0 && cj["b"] != 1))
      throw FormatError("instance file: " + where + ".b must be 0 or 1");
    c.rhs = cj["b"].get<int>() != 0 ? 1 : 0;
    for (std::size_t t = 0; t < c.vars.size(); ++t) {
      if (c.vars[t] >= s.n_vars)
        throw FormatError("instance file: " + where + ".vars has index out of range");
      if (t > 0 && c.vars[t] <= c.vars[t - 1])
        throw FormatError("instance file: " + where + ".vars must be sorted and distinct");
    }
    s.clauses.push_back(std::move(c));
    ++index;
  }
  if (!j.contains("planted")) throw FormatError("instance file: missing field \"planted\"");
  if (!j["planted"].is_null()) {
    std::vector<int> bits;
    try {
      bits = j["planted"].get<std::vector<int>>();
    } catch (const nlohmann::json::exception&) {
      throw FormatError("instance file: field \"planted\" must be a bit list or null");
    }
    if (bits.size() != s.n_vars) throw FormatError("instance file: \"planted\" has the wrong length");
    BitVector x(s.n_vars);
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != 0 && bits[i] != 1)
        throw FormatError("instance file: \"planted\" entries must be 0 or 1");
      x.set(i, bits[i] == 1);
    }
    s.planted = std::move(x);
  }
  const auto nullity = require<std::size_t>(j, "nullity");
  if (nullity != s.n_vars - rank(s.coefficients()))
    throw FormatError("instance file: field \"nullity\" disagrees with the clause matrix");
  if (s.planted && !is_solution(s, *s.planted))
    throw FormatError("instance file: \"planted\" does not satisfy the clauses");
  return s;
}

}  // namespace eqplant
