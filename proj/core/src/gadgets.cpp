#include "eqplant/gadgets.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "eqplant/errors.hpp"

namespace eqplant {

namespace {

int spin_of(std::uint32_t config, std::size_t t) { return ((config >> t) & 1U) ? -1 : 1; }

int clause_product(std::uint32_t config, unsigned k) {
  const std::uint32_t clause_bits = config & ((std::uint32_t{1} << k) - 1);
  return (std::popcount(clause_bits) & 1) ? -1 : 1;
}

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

}  // namespace

int Gadget::coupling(std::size_t i, std::size_t j) const {
  if (i == j) throw std::invalid_argument("Gadget::coupling: i == j");
  if (i > j) std::swap(i, j);
  return couplings.at(pair_index(i, j, spins()));
}

int Gadget::energy(std::uint32_t config) const {
  const std::size_t n = spins();
  int e = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int si = spin_of(config, i);
    e += fields[i] * si;
    for (std::size_t j = i + 1; j < n; ++j)
      e += couplings[pair_index(i, j, n)] * si * spin_of(config, j);
  }
  return e;
}

Gadget symmetric_3xor(SymmetricParams p, int parity) {
  Gadget g;
  g.k = 3;
  g.aux = 1;
  g.parity = parity;
  g.fields = {p.h, p.h, p.h, p.h_aux};
  g.couplings.assign(pair_count(4), 0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) g.couplings[pair_index(i, j, 4)] = p.j;
    g.couplings[pair_index(i, 3, 4)] = p.j_aux;
  }
  int best = std::numeric_limits<int>::max();
  for (std::uint32_t c = 0; c < 16; ++c) best = std::min(best, g.energy(c));
  g.ground_energy = best;
  return g;
}

Gadget builtin_3xor(int b) {
  if (b != 0 && b != 1) throw std::invalid_argument("builtin_3xor: b must be 0 or 1");
  Gadget g = symmetric_3xor(kXor3Params, 1);
  return b == 0 ? g : gauge_flip(std::move(g), 0);
}

Gadget gauge_flip(Gadget g, unsigned spin) {
  const unsigned n = g.spins();
  if (spin >= n) throw std::invalid_argument("gauge_flip: spin out of range");
  g.fields[spin] = -g.fields[spin];
  for (unsigned other = 0; other < n; ++other) {
    if (other == spin) continue;
    auto& c = g.couplings[pair_index(std::min(spin, other), std::max(spin, other), n)];
    c = -c;
  }
  if (spin < g.k) g.parity = -g.parity;
  return g;
}

VerificationReport verify(const Gadget& g) {
  const unsigned n = g.spins();
  if (n > kMaxVerifySpins)
    throw std::invalid_argument("verify: " + std::to_string(n) + " spins exceed the cap of " +
                                std::to_string(kMaxVerifySpins));
  if (g.k == 0 || g.fields.size() != n || g.couplings.size() != pair_count(n))
    throw std::invalid_argument("verify: malformed gadget");

  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<int> energies(total);
  int ground = std::numeric_limits<int>::max();
  for (std::uint32_t c = 0; c < total; ++c) {
    energies[c] = g.energy(c);
    ground = std::min(ground, energies[c]);
  }

  VerificationReport report;
  report.ground_energy = ground;
  bool parity_ok = true;
  const std::uint32_t clause_mask = (std::uint32_t{1} << g.k) - 1;
  std::optional<int> wrong_best;
  for (std::uint32_t c = 0; c < total; ++c) {
    const bool right = clause_product(c, g.k) == g.parity;
    if (!right) wrong_best = std::min(wrong_best.value_or(energies[c]), energies[c]);
    if (energies[c] != ground) continue;
    report.ground_configs.push_back(c);
    report.clause_manifold.push_back(c & clause_mask);
    parity_ok = parity_ok && right;
  }
  auto& manifold = report.clause_manifold;
  std::sort(manifold.begin(), manifold.end());
  manifold.erase(std::unique(manifold.begin(), manifold.end()), manifold.end());
  if (wrong_best) report.gap = *wrong_best - ground;

  report.declared_energy_matches = g.ground_energy == ground;
  report.pass = parity_ok && manifold.size() == (std::size_t{1} << (g.k - 1)) &&
                report.declared_energy_matches && report.gap.value_or(1) >= 1;
  return report;
}

namespace {

// Energies of every configuration are dot products of the parameter tuple
// with per-configuration feature vectors; the scan keeps them up to date as
// an odometer walks the tuple space.
class ParameterScan {
 public:
  ParameterScan(unsigned n, unsigned k, int parity, std::vector<std::vector<int>> features)
      : k_(k), parity_(parity), configs_(std::size_t{1} << n), features_(std::move(features)) {
    right_parity_.resize(configs_);
    for (std::uint32_t c = 0; c < configs_; ++c) right_parity_[c] = clause_product(c, k) == parity_;
  }

  // First tuple, in (max magnitude, lexicographic) order, whose ground
  // manifold is the requested parity class.
  std::optional<std::vector<int>> run(int max_magnitude) {
    for (int m = 0; m <= max_magnitude; ++m)
      if (auto hit = scan_magnitude(m)) return hit;
    return std::nullopt;
  }

 private:
  std::optional<std::vector<int>> scan_magnitude(int m) {
    const std::size_t p = features_.size();
    std::vector<int> values(p, -m);
    std::vector<long> energy(configs_, 0);
    for (std::size_t q = 0; q < p; ++q) add_feature(energy, q, -m);
    std::size_t at_max = p;  // entries with |v| == m; all start at -m

    for (;;) {
      if (at_max > 0 && accepts(energy)) return values;
      // Advance the odometer, last position fastest.
      std::size_t q = p;
      while (q > 0 && values[q - 1] == m) --q;
      if (q == 0) return std::nullopt;
      --q;
      for (std::size_t t = q + 1; t < p; ++t) {
        // m -> -m keeps |v| = m.
        add_feature(energy, t, -2 * m);
        values[t] = -m;
      }
      if (std::abs(values[q]) == m) --at_max;
      ++values[q];
      add_feature(energy, q, 1);
      if (std::abs(values[q]) == m) ++at_max;
    }
  }

  void add_feature(std::vector<long>& energy, std::size_t q, long scale) const {
    if (scale == 0) return;
    const auto& f = features_[q];
    for (std::size_t c = 0; c < configs_; ++c) energy[c] += scale * f[c];
  }

  bool accepts(const std::vector<long>& energy) {
    const long ground = *std::min_element(energy.begin(), energy.end());
    seen_.assign(std::size_t{1} << k_, false);
    std::size_t distinct = 0;
    const std::uint32_t clause_mask = (std::uint32_t{1} << k_) - 1;
    for (std::uint32_t c = 0; c < configs_; ++c) {
      if (energy[c] != ground) continue;
      if (!right_parity_[c]) return false;
      if (!seen_[c & clause_mask]) {
        seen_[c & clause_mask] = true;
        ++distinct;
      }
    }
    return distinct == (std::size_t{1} << (k_ - 1));
  }

  unsigned k_;
  int parity_;
  std::size_t configs_;
  std::vector<std::vector<int>> features_;
  std::vector<bool> right_parity_;
  std::vector<bool> seen_;
};

std::vector<int> field_feature(unsigned n, std::size_t t) {
  std::vector<int> f(std::size_t{1} << n);
  for (std::uint32_t c = 0; c < f.size(); ++c) f[c] = spin_of(c, t);
  return f;
}

std::vector<int> pair_feature(unsigned n, std::size_t i, std::size_t j) {
  std::vector<int> f(std::size_t{1} << n);
  for (std::uint32_t c = 0; c < f.size(); ++c) f[c] = spin_of(c, i) * spin_of(c, j);
  return f;
}

void accumulate(std::vector<int>& into, const std::vector<int>& f) {
  if (into.empty()) into.assign(f.size(), 0);
  for (std::size_t c = 0; c < f.size(); ++c) into[c] += f[c];
}

enum class Role { kClauseField, kAuxField, kClausePair, kAuxClausePair, kAuxPair };

Role role_of_pair(std::size_t i, std::size_t j, unsigned k) {
  if (j < k) return Role::kClausePair;
  if (i < k) return Role::kAuxClausePair;
  return Role::kAuxPair;
}

Gadget finish(unsigned k, unsigned aux, int parity, std::vector<int> fields,
              std::vector<int> couplings) {
  Gadget g;
  g.k = k;
  g.aux = aux;
  g.parity = parity;
  g.fields = std::move(fields);
  g.couplings = std::move(couplings);
  int best = std::numeric_limits<int>::max();
  for (std::uint32_t c = 0; c < (std::uint32_t{1} << g.spins()); ++c) best = std::min(best, g.energy(c));
  g.ground_energy = best;
  return g;
}

std::optional<Gadget> search_symmetric(unsigned k, unsigned aux, int max_magnitude, int parity) {
  const unsigned n = k + aux;
  // Ansatz roles in tuple order.
  std::vector<Role> roles{Role::kClauseField};
  if (aux > 0) roles.push_back(Role::kAuxField);
  if (k > 1) roles.push_back(Role::kClausePair);
  if (aux > 0) roles.push_back(Role::kAuxClausePair);
  if (aux > 1) roles.push_back(Role::kAuxPair);

  auto slot = [&](Role r) {
    return static_cast<std::size_t>(std::find(roles.begin(), roles.end(), r) - roles.begin());
  };
  std::vector<std::vector<int>> features(roles.size());
  for (std::size_t t = 0; t < n; ++t)
    accumulate(features[slot(t < k ? Role::kClauseField : Role::kAuxField)], field_feature(n, t));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      accumulate(features[slot(role_of_pair(i, j, k))], pair_feature(n, i, j));

  ParameterScan scan(n, k, parity, std::move(features));
  const auto hit = scan.run(max_magnitude);
  if (!hit) return std::nullopt;

  std::vector<int> fields(n), couplings(pair_count(n));
  for (std::size_t t = 0; t < n; ++t)
    fields[t] = (*hit)[slot(t < k ? Role::kClauseField : Role::kAuxField)];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      couplings[pair_index(i, j, n)] = (*hit)[slot(role_of_pair(i, j, k))];
  return finish(k, aux, parity, std::move(fields), std::move(couplings));
}

std::optional<Gadget> search_general(unsigned k, unsigned aux, int max_magnitude, int parity) {
  const unsigned n = k + aux;
  std::vector<std::vector<int>> features;
  for (std::size_t t = 0; t < n; ++t) features.push_back(field_feature(n, t));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) features.push_back(pair_feature(n, i, j));

  ParameterScan scan(n, k, parity, std::move(features));
  const auto hit = scan.run(max_magnitude);
  if (!hit) return std::nullopt;
  std::vector<int> fields(hit->begin(), hit->begin() + n);
  std::vector<int> couplings(hit->begin() + n, hit->end());
  return finish(k, aux, parity, std::move(fields), std::move(couplings));
}

}  // namespace

std::optional<Gadget> search(unsigned k, unsigned aux, int max_magnitude, int parity) {
  if (k == 0) throw std::invalid_argument("search: k must be positive");
  if (k + aux > kMaxSearchSpins)
    throw std::invalid_argument("search: k + aux exceeds " + std::to_string(kMaxSearchSpins));
  if (max_magnitude < 0) throw std::invalid_argument("search: max_magnitude must be >= 0");
  if (parity != 1 && parity != -1) throw std::invalid_argument("search: parity must be +1 or -1");
  if (auto g = search_symmetric(k, aux, max_magnitude, parity)) return g;
  return search_general(k, aux, max_magnitude, parity);
}

GadgetLibrary GadgetLibrary::standard() {
  GadgetLibrary lib;
  for (const int parity : {1, -1}) {
    Gadget one;
    one.k = 1;
    one.parity = parity;
    one.fields = {-parity};
    one.ground_energy = -1;
    lib.add(one);

    Gadget two;
    two.k = 2;
    two.parity = parity;
    two.fields = {0, 0};
    two.couplings = {-parity};
    two.ground_energy = -1;
    lib.add(two);
  }
  lib.add(builtin_3xor(0));
  lib.add(builtin_3xor(1));
  return lib;
}

void GadgetLibrary::add(Gadget g) {
  if (!verify(g).pass)
    throw DomainError("GadgetLibrary: gadget for k = " + std::to_string(g.k) + ", parity " +
                      std::to_string(g.parity) + " fails verification");
  const auto key = std::make_pair(g.k, g.parity);
  gadgets_.insert_or_assign(key, std::move(g));
}

bool GadgetLibrary::contains(unsigned k, int parity) const {
  return gadgets_.contains({k, parity});
}

const Gadget& GadgetLibrary::get(unsigned k, int parity) const {
  const auto it = gadgets_.find({k, parity});
  if (it == gadgets_.end())
    throw DomainError("no gadget available for k = " + std::to_string(k) + ", parity " +
                      std::to_string(parity));
  return it->second;
}

std::string to_json(const Gadget& g) {
  nlohmann::ordered_json j;
  j["spins"] = g.spins();
  j["k"] = g.k;
  j["aux"] = g.aux;
  j["parity"] = g.parity;
  j["ground_energy"] = g.ground_energy;
  j["h"] = g.fields;
  auto couplings = nlohmann::ordered_json::array();
  const unsigned n = g.spins();
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j2 = i + 1; j2 < n; ++j2) {
      const int v = g.couplings[pair_index(i, j2, n)];
      if (v != 0) couplings.push_back({i, j2, v});
    }
  j["J"] = std::move(couplings);
  return j.dump() + "\n";
}

Gadget gadget_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("gadget file: ") + e.what());
  }
  try {
    Gadget g;
    const auto spins = j.at("spins").get<unsigned>();
    g.k = j.at("k").get<unsigned>();
    g.aux = j.at("aux").get<unsigned>();
    if (g.k + g.aux != spins) throw FormatError("gadget file: spins != k + aux");
    g.parity = j.at("parity").get<int>();
    if (g.parity != 1 && g.parity != -1) throw FormatError("gadget file: parity must be +1 or -1");
    g.ground_energy = j.at("ground_energy").get<int>();
    g.fields = j.at("h").get<std::vector<int>>();
    if (g.fields.size() != spins) throw FormatError("gadget file: \"h\" has the wrong length");
    g.couplings.assign(pair_count(spins), 0);
    for (const auto& entry : j.at("J")) {
      const auto t = entry.get<std::vector<int>>();
      if (t.size() != 3 || t[0] < 0 || t[1] <= t[0] || static_cast<unsigned>(t[1]) >= spins)
        throw FormatError("gadget file: \"J\" entries must be [i, j, value] with i < j < spins");
      g.couplings[pair_index(static_cast<std::size_t>(t[0]), static_cast<std::size_t>(t[1]), spins)] = t[2];
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("gadget file: ") + e.what());
  }
}

}  // namespace eqplant
