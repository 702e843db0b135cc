#include "eqplant/pt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "eqplant/errors.hpp"

namespace eqplant {

std::vector<double> beta_grid(std::size_t n_t, double beta_min, double beta_max) {
  if (n_t < 2) throw std::invalid_argument("beta_grid: need at least two temperatures");
  if (!(beta_min > 0.0) || !(beta_max > beta_min))
    throw std::invalid_argument("beta_grid: need 0 < beta_min < beta_max");
  std::vector<double> betas(n_t);
  const double log_ratio = std::log(beta_max / beta_min) / static_cast<double>(n_t - 1);
  for (std::size_t t = 0; t < n_t; ++t)
    betas[t] = beta_min * std::exp(log_ratio * static_cast<double>(t));
  betas.front() = beta_min;
  betas.back() = beta_max;
  return betas;
}

std::vector<double> default_betas() {
  return beta_grid(kDefaultTemperatureCount, kDefaultBetaMin, kDefaultBetaMax);
}

double beta_max_for(int max_abs_coupling) {
  if (max_abs_coupling <= 0) throw std::invalid_argument("beta_max_for: |J_max| must be positive");
  return 10.0 / max_abs_coupling;
}

std::vector<double> betas_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<double> betas;
  std::string token;
  while (in >> token) {
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw FormatError("beta grid: entry " + std::to_string(betas.size() + 1) + " (\"" + token +
                        "\") is not a number");
    }
    if (!(value > 0.0) || !std::isfinite(value))
      throw FormatError("beta grid: entry " + std::to_string(betas.size() + 1) + " must be positive");
    if (!betas.empty() && !(value > betas.back()))
      throw FormatError("beta grid: entry " + std::to_string(betas.size() + 1) +
                        " is not larger than its predecessor");
    betas.push_back(value);
  }
  if (betas.empty()) throw FormatError("beta grid: no values");
  return betas;
}

double swap_probability(double beta_i, double beta_j, long e_i, long e_j) {
  const double x = (beta_i - beta_j) * static_cast<double>(e_i - e_j);
  return x >= 0.0 ? 1.0 : std::exp(x);
}

Replica::Replica(const IsingInstance& instance, SpinConfig config)
    : config_(std::move(config)), local_(instance.fields().begin(), instance.fields().end()) {
  if (config_.size() != instance.n_spins())
    throw std::invalid_argument("Replica: config length does not match the instance");
  for (std::size_t i = 0; i < local_.size(); ++i)
    for (const auto& nb : instance.neighbors(i)) local_[i] += static_cast<long>(nb.coupling) * config_[nb.spin];
  energy_ = eqplant::energy(instance, config_);
}

void Replica::flip(const IsingInstance& instance, std::size_t i) noexcept {
  const long s = config_[i];
  energy_ -= 2 * s * local_[i];
  config_.flip(i);
  for (const auto& nb : instance.neighbors(i)) local_[nb.spin] -= 2 * nb.coupling * s;
}

MetropolisTable::MetropolisTable(double beta, long max_delta)
    : beta_(beta), prob_(static_cast<std::size_t>(std::max(max_delta, 0L)) + 1, 1.0) {
  if (beta < 0.0) throw std::invalid_argument("MetropolisTable: beta must be >= 0");
  for (std::size_t d = 1; d < prob_.size(); ++d) prob_[d] = std::exp(-beta * static_cast<double>(d));
}

bool MetropolisTable::accept(long delta, Rng& rng) const {
  if (delta <= 0) return true;
  const double p = static_cast<std::size_t>(delta) < prob_.size()
                       ? prob_[static_cast<std::size_t>(delta)]
                       : std::exp(-beta_ * static_cast<double>(delta));
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform_unit(rng) < p;
}

void metropolis_sweep(const IsingInstance& instance, Replica& replica, const MetropolisTable& table,
                      Rng& rng) {
  const std::size_t n = instance.n_spins();
  for (std::size_t i = 0; i < n; ++i)
    if (table.accept(replica.flip_delta(i), rng)) replica.flip(instance, i);
}

void metropolis_sweep(const IsingInstance& instance, Replica& replica, double beta, Rng& rng) {
  metropolis_sweep(instance, replica, MetropolisTable(beta, instance.max_flip_delta()), rng);
}

std::size_t houdayer_move(const IsingInstance& instance, Replica& a, Replica& b, Rng& rng) {
  const std::size_t n = instance.n_spins();
  if (a.config().size() != n || b.config().size() != n)
    throw std::invalid_argument("houdayer_move: replica length does not match the instance");
  std::vector<std::uint32_t> disagree;
  for (std::size_t i = 0; i < n; ++i)
    if (a.config()[i] != b.config()[i]) disagree.push_back(static_cast<std::uint32_t>(i));
  if (disagree.empty()) return 0;

  const std::uint32_t start = disagree[uniform_index(rng, disagree.size())];
  std::vector<bool> in_cluster(n, false);
  std::vector<std::uint32_t> cluster{start};
  in_cluster[start] = true;
  for (std::size_t head = 0; head < cluster.size(); ++head) {
    for (const auto& nb : instance.neighbors(cluster[head])) {
      const auto j = nb.spin;
      if (in_cluster[j] || a.config()[j] == b.config()[j]) continue;
      in_cluster[j] = true;
      cluster.push_back(j);
    }
  }
  for (const auto i : cluster) {
    a.flip(instance, i);
    b.flip(instance, i);
  }
  return cluster.size();
}

namespace {

SpinConfig random_config(std::size_t n, Rng& rng) {
  SpinConfig c(n);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng)) c.flip(i);
  return c;
}

}  // namespace

RunResult run(const IsingInstance& instance, const PtParams& params,
              std::optional<long> target_energy) {
  const auto& betas = params.betas;
  if (betas.empty()) throw std::invalid_argument("run: empty beta grid");
  for (std::size_t t = 0; t < betas.size(); ++t)
    if (!(betas[t] > 0.0) || (t > 0 && !(betas[t] > betas[t - 1])))
      throw std::invalid_argument("run: betas must be positive and strictly increasing");
  if (params.record_minima && params.snapshot_interval == 0)
    throw std::invalid_argument("run: snapshot_interval must be positive");

  const auto started = std::chrono::steady_clock::now();
  const std::size_t n_t = betas.size();
  const std::size_t sets = params.houdayer ? 2 : 1;
  const std::size_t n = instance.n_spins();

  std::vector<MetropolisTable> tables;
  tables.reserve(n_t);
  for (const double beta : betas) tables.emplace_back(beta, instance.max_flip_delta());

  std::vector<std::vector<Rng>> rngs(sets);
  std::vector<std::vector<Replica>> replicas(sets);
  for (std::size_t s = 0; s < sets; ++s)
    for (std::size_t t = 0; t < n_t; ++t) {
      rngs[s].push_back(make_stream(params.seed, "replica", {s, t}));
      replicas[s].emplace_back(instance, random_config(n, rngs[s].back()));
    }
  Rng swap_rng = make_stream(params.seed, "swap");
  std::vector<Rng> cluster_rngs;
  if (params.houdayer)
    for (std::size_t t = 0; t < n_t; ++t) cluster_rngs.push_back(make_stream(params.seed, "houdayer", {t}));

  std::vector<std::uint64_t> swap_attempts(n_t > 0 ? n_t - 1 : 0, 0);
  std::vector<std::uint64_t> swap_accepts(swap_attempts.size(), 0);

  RunResult result;
  result.replicas = sets * n_t;
  result.target_energy = target_energy;
  result.best_energy = replicas[0][0].energy();
  result.best_config = replicas[0][0].config();
  long cold_best = replicas[0][n_t - 1].energy();
  SpinConfig cold_best_config = replicas[0][n_t - 1].config();

  for (std::size_t sweep = 1; sweep <= params.sweeps_max; ++sweep) {
    for (std::size_t s = 0; s < sets; ++s)
      for (std::size_t t = 0; t < n_t; ++t) metropolis_sweep(instance, replicas[s][t], tables[t], rngs[s][t]);

    for (std::size_t s = 0; s < sets; ++s)
      for (std::size_t t = (sweep + 1) % 2; t + 1 < n_t; t += 2) {
        ++swap_attempts[t];
        const double p = swap_probability(betas[t], betas[t + 1], replicas[s][t].energy(),
                                          replicas[s][t + 1].energy());
        if (p >= 1.0 || uniform_unit(swap_rng) < p) {
          std::swap(replicas[s][t], replicas[s][t + 1]);
          ++swap_accepts[t];
        }
      }

    if (params.houdayer)
      for (std::size_t t = 0; t < n_t; ++t) houdayer_move(instance, replicas[0][t], replicas[1][t], cluster_rngs[t]);

    for (std::size_t s = 0; s < sets; ++s)
      for (std::size_t t = 0; t < n_t; ++t)
        if (replicas[s][t].energy() < result.best_energy) {
          result.best_energy = replicas[s][t].energy();
          result.best_config = replicas[s][t].config();
        }
    if (replicas[0][n_t - 1].energy() < cold_best) {
      cold_best = replicas[0][n_t - 1].energy();
      cold_best_config = replicas[0][n_t - 1].config();
    }
    if (params.record_minima && sweep % params.snapshot_interval == 0)
      result.minima_log.push_back({sweep, cold_best, cold_best_config});

    result.sweeps_done = sweep;
    if (target_energy && result.best_energy <= *target_energy) {
      result.found = true;
      result.sweeps_to_solution = sweep;
      break;
    }
  }

  result.spin_updates = static_cast<std::uint64_t>(result.sweeps_done) * n * result.replicas;
  result.swap_rates.resize(swap_attempts.size(), 0.0);
  for (std::size_t t = 0; t < swap_attempts.size(); ++t)
    if (swap_attempts[t] > 0)
      result.swap_rates[t] = static_cast<double>(swap_accepts[t]) / static_cast<double>(swap_attempts[t]);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::string to_json(const RunResult& result) {
  nlohmann::ordered_json j;
  j["found"] = result.found;
  j["sweeps_to_solution"] =
      result.sweeps_to_solution ? nlohmann::ordered_json(*result.sweeps_to_solution) : nullptr;
  j["sweeps_done"] = result.sweeps_done;
  j["replicas"] = result.replicas;
  j["spin_updates"] = result.spin_updates;
  j["target_energy"] = result.target_energy ? nlohmann::ordered_json(*result.target_energy) : nullptr;
  j["best_energy"] = result.best_energy;
  j["swap_rates"] = result.swap_rates;
  std::vector<int> spins(result.best_config.values().begin(), result.best_config.values().end());
  j["best_config"] = spins;
  return j.dump() + "\n";
}

std::string minima_csv(const RunResult& result, const std::optional<SpinConfig>& solution,
                       std::size_t logical) {
  std::string out = "sweep,energy,hamming_to_solution\n";
  for (const auto& snap : result.minima_log) {
    out += std::to_string(snap.sweep) + "," + std::to_string(snap.energy) + ",";
    if (solution) {
      const std::size_t len = std::min({logical, solution->size(), snap.config.size()});
      std::size_t d = 0;
      for (std::size_t i = 0; i < len; ++i) d += (*solution)[i] != snap.config[i];
      out += std::to_string(d);
    }
    out += "\n";
  }
  return out;
}

}  // namespace eqplant
