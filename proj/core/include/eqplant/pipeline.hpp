#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "eqplant/analysis.hpp"
#include "eqplant/gadgets.hpp"
#include "eqplant/pt.hpp"
#include "eqplant/xorsat.hpp"

namespace eqplant {

enum class Solver { kPt, kPtHoudayer };

// "pt" or "pth"; throws std::invalid_argument otherwise.
Solver parse_solver(std::string_view name);
std::string_view solver_name(Solver solver);

// Batch seeding:
//   instance seed = derive_seed(master, "inst", {n, index})
//   run seed      = derive_seed(master, "run", {instance_seed, run_index})
std::uint64_t instance_seed(std::uint64_t master, std::size_t n, std::size_t index);
std::uint64_t run_seed(std::uint64_t master, std::uint64_t instance_seed, std::size_t run_index);

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written by index so output order never depends on scheduling. The first
// exception thrown by any task is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::size_t default_thread_count();

PtParams solver_params(Solver solver, std::uint64_t seed, std::size_t sweeps_max,
                       std::vector<double> betas);

struct BenchJob {
  std::vector<std::size_t> sizes;
  std::size_t instances_per_size = 100;
  Solver solver = Solver::kPt;
  std::size_t runs_per_instance = 1;
  std::uint64_t seed = 0;
  std::size_t sweeps_max = 1'000'000;
  std::size_t nullity = 0;
  std::size_t max_generation_attempts = 100'000;
  std::vector<double> betas = default_betas();
  std::size_t threads = 1;
};

// Throws std::invalid_argument unless every count is >= 1 and sizes are
// positive.
void validate(const BenchJob& job);

struct BenchRecord {
  std::size_t n = 0;
  std::size_t instance = 0;
  std::size_t run = 0;
  std::uint64_t instance_seed = 0;
  std::uint64_t run_seed = 0;
  bool found = false;
  std::size_t sweeps = 0;
  std::uint64_t spin_updates = 0;
  double wall_seconds = 0.0;
  std::vector<double> swap_rates;
};

struct BenchResult {
  std::vector<BenchRecord> records;  // ordered by (size, instance, run)
  std::vector<ScalingRow> rows;      // one per size
  std::optional<ScalingFit> fit;     // present with >= 3 sizes
  std::size_t unsolved = 0;
};

// Each instance is a planted 3R3X system with the job's nullity. A run that
// exhausts sweeps_max enters the statistics with the budget it spent. The
// per-instance cost is the lower median over its runs.
BenchResult run_bench(const BenchJob& job);

// n,instance,run,instance_seed,run_seed,found,sweeps,spin_updates
std::string bench_runs_csv(const BenchResult& result);
// n,instance,run,wall_seconds
std::string bench_timing_csv(const BenchResult& result);
// {"alpha","log_prefactor","stderr_alpha","points":[[n,median],...],"unsolved"}
std::string fit_json(const BenchResult& result);

struct SampleJob {
  std::size_t runs = 100;
  Solver solver = Solver::kPtHoudayer;
  std::uint64_t seed = 0;
  std::size_t sweeps_max = 1'000'000;
  std::vector<double> betas = default_betas();
  std::size_t threads = 1;
  std::uint64_t enumeration_limit = 1U << 16;
};

// Solves the compiled system `runs` times, each stopping at its first
// ground state, and tallies ground states by canonical solution index. The
// system must be satisfiable.
SamplingReport sample_ground_states(const XorsatSystem& system, const GadgetLibrary& gadgets,
                                    const SampleJob& job);

// {"runs","misses","chi2","dof","p_value","mean_pairwise_hamming","tallies","pairwise_hamming"}
std::string sampling_json(const SamplingReport& report);

}  // namespace eqplant
