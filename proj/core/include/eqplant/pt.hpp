#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqplant/ising.hpp"
#include "eqplant/rng.hpp"

namespace eqplant {

inline constexpr std::size_t kDefaultTemperatureCount = 37;
inline constexpr double kDefaultBetaMin = 0.0166667;
inline constexpr double kDefaultBetaMax = 3.33333;

// Geometric progression of n_t inverse temperatures with both endpoints
// included exactly.
std::vector<double> beta_grid(std::size_t n_t, double beta_min, double beta_max);

// beta_grid(37, 0.0166667, 3.33333).
std::vector<double> default_betas();

// beta_max * |J_max| = 10.
double beta_max_for(int max_abs_coupling);

// Whitespace-separated list of inverse temperatures; must be positive and
// strictly increasing. Throws FormatError otherwise.
std::vector<double> betas_from_text(std::string_view text);

// min(1, exp((beta_i - beta_j) (E_i - E_j)))
double swap_probability(double beta_i, double beta_j, long e_i, long e_j);

// A spin configuration with its energy and cached local fields
// local_i = h_i + sum_j J_ij s_j, so a flip costs O(degree).
class Replica {
 public:
  Replica(const IsingInstance& instance, SpinConfig config);

  const SpinConfig& config() const noexcept { return config_; }
  long energy() const noexcept { return energy_; }
  long flip_delta(std::size_t i) const noexcept { return -2L * config_[i] * local_[i]; }
  void flip(const IsingInstance& instance, std::size_t i) noexcept;

 private:
  SpinConfig config_;
  std::vector<long> local_;
  long energy_ = 0;
};

// Acceptance probabilities exp(-beta * dE) for dE = 1..max_delta.
class MetropolisTable {
 public:
  MetropolisTable(double beta, long max_delta);

  double beta() const noexcept { return beta_; }
  // dE <= 0 always accepts; otherwise one uniform draw is spent only when
  // the probability is strictly between 0 and 1.
  bool accept(long delta, Rng& rng) const;

 private:
  double beta_;
  std::vector<double> prob_;
};

// One proposal per spin in index order.
void metropolis_sweep(const IsingInstance& instance, Replica& replica, const MetropolisTable& table,
                      Rng& rng);
void metropolis_sweep(const IsingInstance& instance, Replica& replica, double beta, Rng& rng);

// Houdayer cluster move for two replicas at the same temperature: pick a
// uniformly random site with s^A_i != s^B_i, grow its connected cluster over
// instance edges through such sites, and flip it in both replicas. E_A + E_B
// is unchanged. Returns the cluster size (0 when the replicas agree).
std::size_t houdayer_move(const IsingInstance& instance, Replica& a, Replica& b, Rng& rng);

struct PtParams {
  std::vector<double> betas = default_betas();
  std::size_t sweeps_max = 100'000;
  std::uint64_t seed = 0;
  bool houdayer = false;
  bool record_minima = false;
  std::size_t snapshot_interval = 10;
};

struct MinimaSnapshot {
  std::size_t sweep = 0;
  long energy = 0;
  SpinConfig config;
};

struct RunResult {
  bool found = false;
  std::optional<std::size_t> sweeps_to_solution;
  std::size_t sweeps_done = 0;
  std::size_t replicas = 0;
  // sweeps_done * n_spins * replicas; when found this is the cost to solution.
  std::uint64_t spin_updates = 0;
  double wall_seconds = 0.0;
  std::optional<long> target_energy;
  long best_energy = 0;
  SpinConfig best_config;
  std::vector<double> swap_rates;  // one per adjacent pair (t, t+1)
  std::vector<MinimaSnapshot> minima_log;
};

// One sweep: Metropolis on every replica; one swap attempt on each adjacent
// pair of one parity (even pairs on odd sweep numbers, odd pairs on even
// ones) within each replica set; with houdayer, one cluster move per
// temperature between the two replica sets. Stops after the first sweep at
// whose end some replica is at or below target_energy.
//
// RNG streams, derived from params.seed: "replica"{set, t} for the
// initial configuration and Metropolis draws of temperature slot t,
// "swap" for exchanges, "houdayer"{t} for cluster seeds.
RunResult run(const IsingInstance& instance, const PtParams& params,
              std::optional<long> target_energy);

// Fixed key order; wall time is left out so identical runs give identical
// bytes.
std::string to_json(const RunResult& result);

// "sweep,energy,hamming_to_solution" rows; the last column is empty without
// a solution. Distance is over the first `logical` spins.
std::string minima_csv(const RunResult& result, const std::optional<SpinConfig>& solution,
                       std::size_t logical);

}  // namespace eqplant
