#include "eqplant/pipeline.hpp"

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "eqplant/errors.hpp"
#include "eqplant/ising.hpp"
#include "eqplant/rng.hpp"

namespace eqplant {

Solver parse_solver(std::string_view name) {
  if (name == "pt") return Solver::kPt;
  if (name == "pth") return Solver::kPtHoudayer;
  throw std::invalid_argument("unknown solver \"" + std::string(name) + "\" (expected pt or pth)");
}

std::string_view solver_name(Solver solver) {
  return solver == Solver::kPt ? "pt" : "pth";
}

std::uint64_t instance_seed(std::uint64_t master, std::size_t n, std::size_t index) {
  return derive_seed(master, "inst", {n, index});
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t inst_seed, std::size_t run_index) {
  return derive_seed(master, "run", {inst_seed, run_index});
}

std::size_t default_thread_count() {
  return std::max(1U, std::thread::hardware_concurrency());
}

PtParams solver_params(Solver solver, std::uint64_t seed, std::size_t sweeps_max,
                       std::vector<double> betas) {
  PtParams p;
  p.betas = std::move(betas);
  p.sweeps_max = sweeps_max;
  p.seed = seed;
  p.houdayer = solver == Solver::kPtHoudayer;
  return p;
}

void validate(const BenchJob& job) {
  if (job.sizes.empty()) throw std::invalid_argument("bench: no sizes given");
  for (const auto n : job.sizes)
    if (n == 0) throw std::invalid_argument("bench: sizes must be positive");
  if (job.instances_per_size == 0 || job.runs_per_instance == 0 || job.sweeps_max == 0 ||
      job.max_generation_attempts == 0 || job.threads == 0)
    throw std::invalid_argument("bench: counts must be >= 1");
}

BenchResult run_bench(const BenchJob& job) {
  validate(job);
  const GadgetLibrary gadgets = GadgetLibrary::standard();
  const std::size_t per_size = job.instances_per_size;

  struct InstanceTask {
    std::size_t n;
    std::size_t index;
    std::uint64_t seed;
  };
  std::vector<InstanceTask> tasks;
  for (const auto n : job.sizes)
    for (std::size_t i = 0; i < per_size; ++i) tasks.push_back({n, i, instance_seed(job.seed, n, i)});

  BenchResult result;
  result.records.resize(tasks.size() * job.runs_per_instance);
  parallel_for(tasks.size(), job.threads, [&](std::size_t t) {
    const auto& task = tasks[t];
    const XorsatSystem system = generate_with_nullity(task.n, job.nullity, task.seed,
                                                      job.max_generation_attempts);
    const IsingInstance instance = compile(system, gadgets);
    for (std::size_t r = 0; r < job.runs_per_instance; ++r) {
      BenchRecord rec;
      rec.n = task.n;
      rec.instance = task.index;
      rec.run = r;
      rec.instance_seed = task.seed;
      rec.run_seed = run_seed(job.seed, task.seed, r);
      const RunResult run =
          eqplant::run(instance, solver_params(job.solver, rec.run_seed, job.sweeps_max, job.betas),
                       instance.ground_energy());
      rec.found = run.found;
      rec.sweeps = run.sweeps_done;
      rec.spin_updates = run.spin_updates;
      rec.wall_seconds = run.wall_seconds;
      rec.swap_rates = run.swap_rates;
      result.records[t * job.runs_per_instance + r] = std::move(rec);
    }
  });

  std::vector<ScalingPoint> points;
  for (std::size_t s = 0; s < job.sizes.size(); ++s) {
    std::vector<double> per_instance;
    for (std::size_t i = 0; i < per_size; ++i) {
      const std::size_t base = (s * per_size + i) * job.runs_per_instance;
      std::vector<double> costs;
      for (std::size_t r = 0; r < job.runs_per_instance; ++r) {
        const auto& rec = result.records[base + r];
        costs.push_back(static_cast<double>(rec.spin_updates));
        if (!rec.found) ++result.unsolved;
      }
      per_instance.push_back(runtime_summary(costs).median);
    }
    const RuntimeSummary summary = runtime_summary(per_instance);
    result.rows.push_back({job.sizes[s], summary});
    points.push_back({static_cast<double>(job.sizes[s]), summary.median});
  }
  if (points.size() >= 3) result.fit = fit_exponent(points);
  return result;
}

std::string bench_runs_csv(const BenchResult& result) {
  std::string out = "n,instance,run,instance_seed,run_seed,found,sweeps,spin_updates\n";
  for (const auto& r : result.records)
    out += std::to_string(r.n) + "," + std::to_string(r.instance) + "," + std::to_string(r.run) + "," +
           std::to_string(r.instance_seed) + "," + std::to_string(r.run_seed) + "," +
           (r.found ? "1" : "0") + "," + std::to_string(r.sweeps) + "," +
           std::to_string(r.spin_updates) + "\n";
  return out;
}

std::string bench_timing_csv(const BenchResult& result) {
  std::string out = "n,instance,run,wall_seconds\n";
  for (const auto& r : result.records)
    out += std::to_string(r.n) + "," + std::to_string(r.instance) + "," + std::to_string(r.run) + "," +
           format_double(r.wall_seconds) + "\n";
  return out;
}

std::string fit_json(const BenchResult& result) {
  nlohmann::ordered_json j;
  if (result.fit) {
    j["alpha"] = result.fit->alpha;
    j["log_prefactor"] = result.fit->log_prefactor;
    j["stderr_alpha"] = result.fit->stderr_alpha;
  } else {
    j["alpha"] = nullptr;
    j["log_prefactor"] = nullptr;
    j["stderr_alpha"] = nullptr;
  }
  auto points = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) points.push_back({row.n, row.summary.median});
  j["points"] = std::move(points);
  j["unsolved"] = result.unsolved;
  return j.dump() + "\n";
}

SamplingReport sample_ground_states(const XorsatSystem& system, const GadgetLibrary& gadgets,
                                    const SampleJob& job) {
  if (job.runs == 0) throw std::invalid_argument("sample: runs must be >= 1");
  const SystemAnalysis analysis = analyze(system);
  if (!analysis.satisfiable) throw DomainError("sample: system is unsatisfiable");
  const std::vector<BitVector> solutions = enumerate_solutions(analysis.solutions, job.enumeration_limit);
  const IsingInstance instance = compile(system, gadgets);
  const std::size_t n = system.n_vars;

  std::vector<std::optional<std::uint64_t>> hits(job.runs);
  parallel_for(job.runs, job.threads, [&](std::size_t r) {
    const PtParams params =
        solver_params(job.solver, run_seed(job.seed, system.seed, r), job.sweeps_max, job.betas);
    const RunResult run = eqplant::run(instance, params, instance.ground_energy());
    if (!run.found) return;
    const auto index = solution_index(analysis.solutions, run.best_config.to_bits(n));
    if (!index) throw std::logic_error("sample: ground configuration does not decode to a solution");
    hits[r] = *index;
  });

  SamplingReport report;
  report.tallies.assign(solutions.size(), 0);
  for (const auto& hit : hits) {
    if (!hit) {
      ++report.misses;
      continue;
    }
    ++report.tallies[*hit];
    ++report.runs;
  }
  if (report.tallies.size() >= 2 && report.runs > 0) report.chi2 = chi2_uniform_pvalue(report.tallies);

  std::vector<SpinConfig> logical;
  for (const auto& x : solutions) logical.push_back(SpinConfig::from_bits(x));
  report.pairwise_hamming.assign(solutions.size(), std::vector<double>(solutions.size(), 0.0));
  for (std::size_t a = 0; a < logical.size(); ++a)
    for (std::size_t b = 0; b < logical.size(); ++b)
      report.pairwise_hamming[a][b] = hamming(logical[a], logical[b]).normalized;
  return report;
}

std::string sampling_json(const SamplingReport& report) {
  nlohmann::ordered_json j;
  j["runs"] = report.runs;
  j["misses"] = report.misses;
  j["chi2"] = report.chi2.stat;
  j["dof"] = report.chi2.dof;
  j["p_value"] = report.chi2.p;
  j["mean_pairwise_hamming"] = mean_pairwise(report.pairwise_hamming);
  j["tallies"] = report.tallies;
  j["pairwise_hamming"] = report.pairwise_hamming;
  return j.dump() + "\n";
}

}  // namespace eqplant
