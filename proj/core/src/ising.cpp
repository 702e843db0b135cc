#include "eqplant/ising.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "eqplant/errors.hpp"

namespace eqplant {

SpinConfig::SpinConfig(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (const auto s : spins_)
    if (s != 1 && s != -1) throw std::invalid_argument("SpinConfig: entries must be +1 or -1");
}

SpinConfig SpinConfig::from_bits(const BitVector& x) {
  SpinConfig c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.get(i)) c.spins_[i] = -1;
  return c;
}

BitVector SpinConfig::to_bits(std::size_t count) const {
  if (count > spins_.size()) throw std::invalid_argument("SpinConfig::to_bits: count too large");
  BitVector x(count);
  for (std::size_t i = 0; i < count; ++i) x.set(i, spins_[i] < 0);
  return x;
}

IsingInstance::IsingInstance(std::size_t n_spins, std::vector<int> fields,
                             std::vector<Coupling> couplings, std::optional<long> ground_energy,
                             std::optional<Provenance> provenance)
    : fields_(std::move(fields)),
      ground_energy_(ground_energy),
      provenance_(std::move(provenance)) {
  if (fields_.size() != n_spins)
    throw std::invalid_argument("IsingInstance: field count does not match n_spins");
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> merged;
  for (auto c : couplings) {
    if (c.i == c.j || c.i >= n_spins || c.j >= n_spins)
      throw std::invalid_argument("IsingInstance: invalid coupling indices");
    if (c.i > c.j) std::swap(c.i, c.j);
    merged[{c.i, c.j}] += c.value;
  }
  for (const auto& [key, value] : merged)
    if (value != 0) couplings_.push_back({key.first, key.second, value});

  std::vector<std::size_t> degree(n_spins, 0);
  for (const auto& c : couplings_) {
    ++degree[c.i];
    ++degree[c.j];
  }
  offsets_.assign(n_spins + 1, 0);
  for (std::size_t i = 0; i < n_spins; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& c : couplings_) {
    adjacency_[cursor[c.i]++] = {c.j, c.value};
    adjacency_[cursor[c.j]++] = {c.i, c.value};
  }
  for (std::size_t i = 0; i < n_spins; ++i) {
    long bound = std::abs(fields_[i]);
    for (const auto& nb : neighbors(i)) bound += std::abs(nb.coupling);
    max_flip_delta_ = std::max(max_flip_delta_, 2 * bound);
  }
}

int IsingInstance::max_abs_coupling() const noexcept {
  int best = 0;
  for (const auto& c : couplings_) best = std::max(best, std::abs(c.value));
  return best;
}

IsingInstance compile(const XorsatSystem& system, const GadgetLibrary& gadgets) {
  const std::size_t n = system.n_vars;
  Provenance prov;
  prov.n_logical = n;
  std::size_t next_aux = n;
  std::vector<const Gadget*> chosen;
  chosen.reserve(system.n_clauses());
  for (const auto& clause : system.clauses) {
    const Gadget& g = gadgets.get(static_cast<unsigned>(clause.vars.size()), clause.rhs ? -1 : 1);
    chosen.push_back(&g);
    prov.aux_begin.push_back(static_cast<std::uint32_t>(next_aux));
    prov.aux_count.push_back(g.aux);
    next_aux += g.aux;
  }

  const std::size_t n_spins = next_aux;
  std::vector<int> fields(n_spins, 0);
  std::vector<Coupling> couplings;
  long ground = 0;
  for (std::size_t c = 0; c < system.n_clauses(); ++c) {
    const Gadget& g = *chosen[c];
    const auto& vars = system.clauses[c].vars;
    auto global = [&](unsigned local) -> std::uint32_t {
      return local < g.k ? vars[local] : prov.aux_begin[c] + (local - g.k);
    };
    const unsigned spins = g.spins();
    for (unsigned t = 0; t < spins; ++t) fields[global(t)] += g.fields[t];
    for (unsigned i = 0; i < spins; ++i)
      for (unsigned j = i + 1; j < spins; ++j) {
        const int v = g.couplings[pair_index(i, j, spins)];
        if (v != 0) couplings.push_back({global(i), global(j), v});
      }
    ground += g.ground_energy;
  }

  std::optional<long> ground_energy;
  if (analyze(system).satisfiable) ground_energy = ground;
  return IsingInstance(n_spins, std::move(fields), std::move(couplings), ground_energy,
                       std::move(prov));
}

long energy(const IsingInstance& instance, const SpinConfig& config) {
  if (config.size() != instance.n_spins())
    throw std::invalid_argument("energy: config has " + std::to_string(config.size()) +
                                " spins, instance has " + std::to_string(instance.n_spins()));
  long e = 0;
  const auto h = instance.fields();
  for (std::size_t i = 0; i < h.size(); ++i) e += static_cast<long>(h[i]) * config[i];
  for (const auto& c : instance.couplings()) e += static_cast<long>(c.value) * config[c.i] * config[c.j];
  return e;
}

SpinConfig extend_assignment(const XorsatSystem& system, const GadgetLibrary& gadgets,
                             const BitVector& x) {
  if (x.size() != system.n_vars)
    throw std::invalid_argument("extend: assignment length does not match the system");
  SpinConfig logical = SpinConfig::from_bits(x);
  std::vector<std::int8_t> spins(logical.values().begin(), logical.values().end());
  for (const auto& clause : system.clauses) {
    const Gadget& g = gadgets.get(static_cast<unsigned>(clause.vars.size()), clause.rhs ? -1 : 1);
    std::uint32_t clause_mask = 0;
    for (unsigned t = 0; t < g.k; ++t)
      if (x.get(clause.vars[t])) clause_mask |= std::uint32_t{1} << t;
    std::uint32_t best_aux = 0;
    int best = std::numeric_limits<int>::max();
    for (std::uint32_t aux = 0; aux < (std::uint32_t{1} << g.aux); ++aux) {
      const int e = g.energy(clause_mask | (aux << g.k));
      if (e < best) {
        best = e;
        best_aux = aux;
      }
    }
    for (unsigned t = 0; t < g.aux; ++t)
      spins.push_back(((best_aux >> t) & 1U) ? std::int8_t{-1} : std::int8_t{1});
  }
  return SpinConfig(std::move(spins));
}

SpinConfig extend(const XorsatSystem& system, const GadgetLibrary& gadgets, const BitVector& x) {
  if (x.size() != system.n_vars)
    throw std::invalid_argument("extend: assignment length does not match the system");
  if (!is_solution(system, x)) throw DomainError("extend: assignment does not solve the system");
  return extend_assignment(system, gadgets, x);
}

StructureReport structure_report(const IsingInstance& instance) {
  StructureReport r;
  r.n_spins = instance.n_spins();
  r.ground_energy = instance.ground_energy();
  const auto h = instance.fields();
  if (!h.empty()) {
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    r.field_min = *lo;
    r.field_max = *hi;
  }
  const auto cs = instance.couplings();
  if (!cs.empty()) {
    r.coupling_min = r.coupling_max = cs.front().value;
    for (const auto& c : cs) {
      r.coupling_min = std::min(r.coupling_min, c.value);
      r.coupling_max = std::max(r.coupling_max, c.value);
    }
  }
  for (std::size_t i = 0; i < instance.n_spins(); ++i)
    r.max_degree = std::max(r.max_degree, instance.neighbors(i).size());
  return r;
}

GroundStates brute_force_ground_states(const IsingInstance& instance, std::size_t cap,
                                       std::size_t max_configs) {
  const std::size_t n = instance.n_spins();
  if (n > cap || n >= 63)
    throw DomainError("brute_force_ground_states: " + std::to_string(n) +
                      " spins exceed the cap of " + std::to_string(cap));
  SpinConfig config(n, 1);
  const auto h = instance.fields();
  // local[i] = h_i + sum_j J_ij s_j
  std::vector<long> local(h.begin(), h.end());
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& nb : instance.neighbors(i)) local[i] += nb.coupling;
  long e = energy(instance, config);

  GroundStates out;
  out.energy_min = e;
  out.configs.push_back(config);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    // Gray code: flip the lowest set bit of the step counter.
    const auto i = static_cast<std::size_t>(std::countr_zero(step));
    const int s = config[i];
    e -= 2L * s * local[i];
    config.flip(i);
    for (const auto& nb : instance.neighbors(i)) local[nb.spin] -= 2L * nb.coupling * s;
    if (e > out.energy_min) continue;
    if (e < out.energy_min) {
      out.energy_min = e;
      out.configs.clear();
    }
    if (out.configs.size() >= max_configs)
      throw DomainError("brute_force_ground_states: more than " + std::to_string(max_configs) +
                        " ground configurations");
    out.configs.push_back(config);
  }
  return out;
}

std::string to_text(const IsingInstance& instance) {
  std::string out = "p ising " + std::to_string(instance.n_spins()) + " ";
  out += instance.ground_energy() ? std::to_string(*instance.ground_energy()) : "?";
  out += '\n';
  const auto h = instance.fields();
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] != 0) out += "h " + std::to_string(i) + " " + std::to_string(h[i]) + "\n";
  for (const auto& c : instance.couplings())
    out += "J " + std::to_string(c.i) + " " + std::to_string(c.j) + " " + std::to_string(c.value) + "\n";
  return out;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t next = line.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? line.size() : next;
    parts.push_back(line.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

template <class T>
T parse_int(std::string_view token, std::size_t line_no) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc{} || ptr != last)
    throw FormatError("ising text line " + std::to_string(line_no) + ": bad integer \"" +
                      std::string(token) + "\"");
  return value;
}

}  // namespace

IsingInstance ising_from_text(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<std::size_t> n_spins;
  std::optional<long> ground;
  std::vector<int> fields;
  std::vector<Coupling> couplings;
  std::vector<bool> field_seen;
  std::optional<std::size_t> last_h;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> last_j;

  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      throw FormatError("ising text line " + std::to_string(line_no + 1) + ": missing newline");
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto parts = split_spaces(line);
    auto fail = [&](const std::string& why) -> FormatError {
      return FormatError("ising text line " + std::to_string(line_no) + ": " + why);
    };

    if (!n_spins) {
      if (parts.size() != 4 || parts[0] != "p" || parts[1] != "ising")
        throw fail("expected header \"p ising <n_spins> <ground_energy|?>\"");
      n_spins = parse_int<std::size_t>(parts[2], line_no);
      if (parts[3] != "?") ground = parse_int<long>(parts[3], line_no);
      fields.assign(*n_spins, 0);
      continue;
    }
    if (parts.size() == 3 && parts[0] == "h") {
      if (last_j) throw fail("field lines must precede coupling lines");
      const auto i = parse_int<std::size_t>(parts[1], line_no);
      const auto v = parse_int<int>(parts[2], line_no);
      if (i >= *n_spins) throw fail("spin index out of range");
      if (last_h && i <= *last_h) throw fail("field lines must be in ascending spin order");
      if (v == 0) throw fail("zero fields are not listed");
      fields[i] = v;
      last_h = i;
    } else if (parts.size() == 4 && parts[0] == "J") {
      const auto i = parse_int<std::uint32_t>(parts[1], line_no);
      const auto j = parse_int<std::uint32_t>(parts[2], line_no);
      const auto v = parse_int<int>(parts[3], line_no);
      if (i >= j || j >= *n_spins) throw fail("coupling needs i < j < n_spins");
      if (last_j && std::make_pair(i, j) <= *last_j)
        throw fail("coupling lines must be in lexicographic order");
      if (v == 0) throw fail("zero couplings are not listed");
      couplings.push_back({i, j, v});
      last_j = std::make_pair(i, j);
    } else {
      throw fail("expected \"h <i> <value>\" or \"J <i> <j> <value>\"");
    }
  }
  if (!n_spins) throw FormatError("ising text: empty input");
  return IsingInstance(*n_spins, std::move(fields), std::move(couplings), ground);
}

}  // namespace eqplant
