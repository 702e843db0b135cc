// eqplant command-line tool.
//
// Exit codes: 0 success, 1 domain error (bad parameter values, unsatisfiable
// system where a ground energy is needed, failed verification), 2 I/O,
// format or usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqplant/analysis.hpp"
#include "eqplant/errors.hpp"
#include "eqplant/gadgets.hpp"
#include "eqplant/ising.hpp"
#include "eqplant/pipeline.hpp"
#include "eqplant/pt.hpp"
#include "eqplant/xorsat.hpp"

namespace fs = std::filesystem;
using namespace eqplant;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "-" or empty means stdout.
void write_output(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << body;
  if (!out) throw IoError("write failed: " + path);
}

bool looks_like_json(const std::string& text) {
  const auto at = text.find_first_not_of(" \t\r\n");
  return at != std::string::npos && text[at] == '{';
}

// Input for solve/verify: an instance JSON (compiled on the fly) or Ising text.
struct LoadedInstance {
  std::optional<XorsatSystem> system;
  IsingInstance instance;
};

LoadedInstance load_instance(const std::string& path, const GadgetLibrary& lib) {
  const std::string text = read_file(path);
  LoadedInstance out;
  if (looks_like_json(text)) {
    out.system = system_from_json(text);
    out.instance = compile(*out.system, lib);
  } else {
    out.instance = ising_from_text(text);
  }
  return out;
}

std::vector<double> load_betas(const std::string& path) {
  if (path.empty()) return default_betas();
  return betas_from_text(read_file(path));
}

// ---- generate

struct GenerateOpts {
  std::size_t n = 0;
  unsigned k = 3;
  unsigned r = 3;
  std::optional<std::size_t> nullity;
  bool plant = false;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 100000;
  std::string out;
};

void cmd_generate(const GenerateOpts& o) {
  XorsatSystem s;
  if (o.plant && o.nullity)
    s = generate_with_nullity(o.n, *o.nullity, o.seed, o.max_attempts, o.k, o.r);
  else if (o.plant)
    s = plant(generate_regular(o.n, o.k, o.r, o.seed), o.seed);
  else if (o.nullity)
    s = generate_filtered(o.n, o.nullity, o.seed, o.max_attempts, o.k, o.r);
  else
    s = generate_regular(o.n, o.k, o.r, o.seed);
  write_output(o.out, to_json(s));
}

// ---- compile

void cmd_compile(const std::string& in, const std::string& out) {
  const auto lib = GadgetLibrary::standard();
  write_output(out, to_text(compile(system_from_json(read_file(in)), lib)));
}

// ---- solve

struct SolveOpts {
  std::string in;
  std::string solver = "pt";
  std::uint64_t seed = 0;
  std::size_t sweeps_max = 100000;
  std::string betas_file;
  std::string target = "auto";
  std::string out;
  std::string minima;
  std::size_t snapshot_interval = 10;
};

std::optional<long> parse_target(const std::string& text, const IsingInstance& inst) {
  if (text == "auto") {
    if (!inst.ground_energy())
      throw DomainError("--target auto: the instance has no certified ground energy");
    return inst.ground_energy();
  }
  if (text == "none") return std::nullopt;
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--target", "expected auto, none or an integer, got \"" + text + "\"");
  }
}

void cmd_solve(const SolveOpts& o) {
  const auto lib = GadgetLibrary::standard();
  const auto loaded = load_instance(o.in, lib);
  const auto target = parse_target(o.target, loaded.instance);
  PtParams p = solver_params(parse_solver(o.solver), o.seed, o.sweeps_max, load_betas(o.betas_file));
  p.record_minima = !o.minima.empty();
  p.snapshot_interval = o.snapshot_interval;
  const RunResult r = run(loaded.instance, p, target);
  write_output(o.out, to_json(r));
  if (!o.minima.empty()) {
    std::optional<SpinConfig> solution;
    std::size_t logical = loaded.instance.n_spins();
    if (loaded.system) {
      logical = loaded.system->n_vars;
      if (loaded.system->planted) solution = extend(*loaded.system, lib, *loaded.system->planted);
    }
    write_output(o.minima, minima_csv(r, solution, logical));
  }
}

// ---- bench

struct BenchOpts {
  std::vector<std::size_t> sizes;
  std::size_t instances = 100;
  std::string solver = "pt";
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::size_t sweeps_max = 1'000'000;
  std::size_t nullity = 0;
  std::string betas_file;
  std::size_t threads = 0;
  bool timing = false;
  std::string out_dir;
};

void cmd_bench(const BenchOpts& o) {
  BenchJob job;
  job.sizes = o.sizes;
  job.instances_per_size = o.instances;
  job.solver = parse_solver(o.solver);
  job.runs_per_instance = o.runs;
  job.seed = o.seed;
  job.sweeps_max = o.sweeps_max;
  job.nullity = o.nullity;
  job.betas = load_betas(o.betas_file);
  job.threads = o.threads == 0 ? default_thread_count() : o.threads;
  const BenchResult r = run_bench(job);

  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw IoError("cannot create " + o.out_dir + ": " + ec.message());
  const fs::path dir(o.out_dir);
  write_output((dir / "runs.csv").string(), bench_runs_csv(r));
  write_output((dir / "scaling.csv").string(), scaling_csv(r.rows, r.fit));
  write_output((dir / "fit.json").string(), fit_json(r));
  // Wall-clock numbers differ run to run, so they only go out on request.
  if (o.timing) write_output((dir / "timing.csv").string(), bench_timing_csv(r));
  if (r.fit)
    std::cerr << "alpha = " << format_double(r.fit->alpha) << " +/- " << format_double(r.fit->stderr_alpha)
              << "\n";
  if (r.unsolved > 0) std::cerr << r.unsolved << " run(s) hit --sweeps-max\n";
}

// ---- sample

struct SampleOpts {
  std::string in;
  std::size_t runs = 100;
  std::string solver = "pth";
  std::uint64_t seed = 0;
  std::size_t sweeps_max = 1'000'000;
  std::string betas_file;
  std::size_t threads = 0;
  std::string out;
  std::string report;
};

void cmd_sample(const SampleOpts& o) {
  const auto lib = GadgetLibrary::standard();
  const auto text = read_file(o.in);
  if (!looks_like_json(text)) throw FormatError("sample: --in must be an instance JSON file");
  const XorsatSystem system = system_from_json(text);
  SampleJob job;
  job.runs = o.runs;
  job.solver = parse_solver(o.solver);
  job.seed = o.seed;
  job.sweeps_max = o.sweeps_max;
  job.betas = load_betas(o.betas_file);
  job.threads = o.threads == 0 ? default_thread_count() : o.threads;
  const SamplingReport rep = sample_ground_states(system, lib, job);
  write_output(o.out, sampling_csv(rep));
  if (!o.report.empty()) write_output(o.report, sampling_json(rep));
  std::cerr << "chi2 = " << format_double(rep.chi2.stat) << " (dof " << rep.chi2.dof
            << "), p = " << format_double(rep.chi2.p) << ", misses = " << rep.misses << "\n";
}

// ---- gadget-search

void cmd_gadget_search(unsigned k, unsigned aux, int max_mag, int parity, const std::string& out) {
  if (parity != 1 && parity != -1) throw std::invalid_argument("--parity must be 1 or -1");
  const auto g = search(k, aux, max_mag, parity);
  if (!g)
    throw DomainError("no gadget with k=" + std::to_string(k) + ", aux=" + std::to_string(aux) +
                      " and |parameters| <= " + std::to_string(max_mag));
  write_output(out, to_json(*g));
}

// ---- verify

int cmd_verify(const std::string& in) {
  const auto lib = GadgetLibrary::standard();
  const auto loaded = load_instance(in, lib);
  const auto& inst = loaded.instance;
  const auto rep = structure_report(inst);
  bool ok = true;
  std::ostringstream out;
  auto check = [&](const std::string& name, bool pass, const std::string& detail) {
    out << (pass ? "ok   " : "FAIL ") << name << ": " << detail << "\n";
    ok = ok && pass;
  };

  out << "spins: " << rep.n_spins << "\n";
  if (loaded.system) {
    const auto& sys = *loaded.system;
    const auto a = analyze(sys);
    out << "variables: " << sys.n_vars << "\nclauses: " << sys.n_clauses() << "\nrank: " << a.rank
        << "\nnullity: " << a.nullity << "\nsatisfiable: " << (a.satisfiable ? "yes" : "no") << "\n";
    check("regular", is_regular(sys), std::to_string(sys.k) + "-uniform, " + std::to_string(sys.r) + "-regular");
    if (sys.planted) check("planted", is_solution(sys, *sys.planted), "planted assignment satisfies every clause");
    if (sys.k == 3 && sys.r == 3) {
      check("degree", rep.max_degree <= 9, "max degree " + std::to_string(rep.max_degree) + " (bound 9)");
      const bool ranges = rep.field_min >= -3 && rep.field_max <= 3 && rep.coupling_min >= -3 &&
                          rep.coupling_max <= 3;
      check("ranges", ranges,
            "h in [" + std::to_string(rep.field_min) + ", " + std::to_string(rep.field_max) + "], J in [" +
                std::to_string(rep.coupling_min) + ", " + std::to_string(rep.coupling_max) + "] (bound 3)");
    }
  } else {
    out << "max degree: " << rep.max_degree << "\nh range: [" << rep.field_min << ", " << rep.field_max
        << "]\nJ range: [" << rep.coupling_min << ", " << rep.coupling_max << "]\n";
  }

  const auto& declared = inst.ground_energy();
  out << "ground energy: " << (declared ? std::to_string(*declared) : "?") << "\n";
  if (inst.n_spins() <= kBruteForceSpinCap) {
    const auto gs = brute_force_ground_states(inst);
    out << "brute-force minimum: " << gs.energy_min << " (" << gs.configs.size() << " configuration(s))\n";
    if (declared) check("ground energy", *declared == gs.energy_min, "declared matches exhaustive search");
    if (loaded.system) {
      const auto a = analyze(*loaded.system);
      if (a.n_ground_states)
        check("degeneracy", gs.configs.size() == *a.n_ground_states,
              std::to_string(gs.configs.size()) + " ground states, 2^nullity = " +
                  std::to_string(*a.n_ground_states));
    }
  } else {
    out << "brute-force minimum: skipped (more than " << kBruteForceSpinCap << " spins)\n";
  }
  std::cout << out.str();
  return ok ? 0 : 1;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--sizes", "expected a comma-separated list of sizes, got \"" + text + "\"");
    }
  }
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equation-planted Ising benchmark toolkit"};
  app.require_subcommand(1);

  GenerateOpts gen;
  auto* generate = app.add_subcommand("generate", "Random regular k-XORSAT instance as JSON");
  generate->add_option("--n", gen.n, "Number of variables")->required();
  generate->add_option("--k", gen.k, "Variables per clause")->capture_default_str();
  generate->add_option("--r", gen.r, "Occurrences per variable")->capture_default_str();
  generate->add_option("--nullity", gen.nullity, "Required nullity of the clause matrix");
  generate->add_flag("--plant", gen.plant, "Plant a random solution");
  generate->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  generate->add_option("--max-attempts", gen.max_attempts, "Draws allowed when targeting a nullity")
      ->capture_default_str();
  generate->add_option("--out", gen.out, "Output file (default stdout)");

  std::string compile_in, compile_out;
  auto* compile_cmd = app.add_subcommand("compile", "Compile an instance JSON to Ising text");
  compile_cmd->add_option("--in", compile_in, "Instance JSON")->required();
  compile_cmd->add_option("--out", compile_out, "Output file (default stdout)");

  SolveOpts solve;
  auto* solve_cmd = app.add_subcommand("solve", "Parallel tempering on one instance");
  solve_cmd->add_option("--in", solve.in, "Instance JSON or Ising text")->required();
  solve_cmd->add_option("--solver", solve.solver, "pt or pth")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "Seed")->capture_default_str();
  solve_cmd->add_option("--sweeps-max", solve.sweeps_max, "Sweep budget")->capture_default_str();
  solve_cmd->add_option("--betas-file", solve.betas_file, "Explicit inverse-temperature grid");
  solve_cmd->add_option("--target", solve.target, "auto, none or an energy")->capture_default_str();
  solve_cmd->add_option("--out", solve.out, "Result JSON (default stdout)");
  solve_cmd->add_option("--minima", solve.minima, "Write local-minima snapshots as CSV");
  solve_cmd->add_option("--snapshot-interval", solve.snapshot_interval, "Sweeps between snapshots")
      ->capture_default_str();

  BenchOpts bench;
  std::string sizes_text;
  auto* bench_cmd = app.add_subcommand("bench", "Median time-to-solution over planted instances");
  bench_cmd->add_option("--sizes", sizes_text, "Comma-separated sizes, e.g. 16,24,32")->required();
  bench_cmd->add_option("--instances", bench.instances, "Instances per size")->capture_default_str();
  bench_cmd->add_option("--solver", bench.solver, "pt or pth")->capture_default_str();
  bench_cmd->add_option("--runs", bench.runs, "Runs per instance")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--sweeps-max", bench.sweeps_max, "Sweep budget per run")->capture_default_str();
  bench_cmd->add_option("--nullity", bench.nullity, "Nullity of every instance")->capture_default_str();
  bench_cmd->add_option("--betas-file", bench.betas_file, "Explicit inverse-temperature grid");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)")->capture_default_str();
  bench_cmd->add_flag("--timing", bench.timing, "Also write timing.csv with wall-clock seconds");
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory")->required();

  SampleOpts sample;
  auto* sample_cmd = app.add_subcommand("sample", "Ground-state tallies over repeated runs");
  sample_cmd->add_option("--in", sample.in, "Instance JSON")->required();
  sample_cmd->add_option("--runs", sample.runs, "Number of runs")->capture_default_str();
  sample_cmd->add_option("--solver", sample.solver, "pt or pth")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "Seed")->capture_default_str();
  sample_cmd->add_option("--sweeps-max", sample.sweeps_max, "Sweep budget per run")->capture_default_str();
  sample_cmd->add_option("--betas-file", sample.betas_file, "Explicit inverse-temperature grid");
  sample_cmd->add_option("--threads", sample.threads, "Worker threads (0 = all cores)")->capture_default_str();
  sample_cmd->add_option("--out", sample.out, "Tally CSV (default stdout)");
  sample_cmd->add_option("--report", sample.report, "Also write a JSON report");

  unsigned gk = 3, gaux = 1;
  int gmag = 2, gparity = 1;
  std::string gout;
  auto* gadget_cmd = app.add_subcommand("gadget-search", "Brute-force search for a parity gadget");
  gadget_cmd->add_option("--k", gk, "Clause spins")->capture_default_str();
  gadget_cmd->add_option("--aux", gaux, "Auxiliary spins")->capture_default_str();
  gadget_cmd->add_option("--max-mag", gmag, "Largest |h| or |J| tried")->capture_default_str();
  gadget_cmd->add_option("--parity", gparity, "Required clause-spin product, 1 or -1")->capture_default_str();
  gadget_cmd->add_option("--out", gout, "Output file (default stdout)");

  std::string verify_in;
  auto* verify_cmd = app.add_subcommand("verify", "Check instance invariants");
  verify_cmd->add_option("--in", verify_in, "Instance JSON or Ising text")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) cmd_generate(gen);
    if (*compile_cmd) cmd_compile(compile_in, compile_out);
    if (*solve_cmd) cmd_solve(solve);
    if (*bench_cmd) {
      bench.sizes = parse_sizes(sizes_text);
      cmd_bench(bench);
    }
    if (*sample_cmd) cmd_sample(sample);
    if (*gadget_cmd) cmd_gadget_search(gk, gaux, gmag, gparity, gout);
    if (*verify_cmd) return cmd_verify(verify_in);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
