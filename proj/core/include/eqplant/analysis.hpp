#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eqplant/ising.hpp"
#include "eqplant/pt.hpp"

namespace eqplant {

struct RuntimeSummary {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

// Lower-interpolation order statistics: the q-quantile of N sorted values is
// the element at index floor(q * (N - 1)).
double quantile_lower(std::span<const double> sorted, double q);
// Throws std::invalid_argument on empty input.
RuntimeSummary runtime_summary(std::span<const double> costs);

struct ScalingPoint {
  double n = 0.0;
  double median = 0.0;
};

// median ~ exp(log_prefactor + alpha * n), least squares on (n, ln median).
struct ScalingFit {
  double alpha = 0.0;
  double log_prefactor = 0.0;
  double stderr_alpha = 0.0;
  double max_abs_residual = 0.0;  // in ln(median)
  std::vector<ScalingPoint> points;

  double predict(double n) const;
};

// Needs at least 3 points with distinct n; throws std::invalid_argument on a
// nonpositive median.
ScalingFit fit_exponent(std::span<const ScalingPoint> points);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a):
// series for x < a + 1, Lentz continued fraction otherwise.
double regularized_gamma_q(double a, double x);

struct Chi2Result {
  double stat = 0.0;
  std::size_t dof = 0;
  double p = 1.0;
};

// Pearson statistic against the uniform expectation runs / K, upper-tail p.
Chi2Result chi2_uniform_pvalue(std::span<const std::uint64_t> tallies);

struct HammingDistance {
  std::size_t count = 0;
  double normalized = 0.0;
};

// Differences over the first `restrict_to` positions, or all positions when
// absent. Throws std::invalid_argument on length mismatch.
HammingDistance hamming(const SpinConfig& a, const SpinConfig& b,
                        std::optional<std::size_t> restrict_to = std::nullopt);

struct ProfilePoint {
  double residual = 0.0;  // (E - E_gs) / |E_gs|
  double distance = 0.0;  // normalized Hamming distance to the solution
};

// One point per snapshot. Throws DomainError without a ground energy.
std::vector<ProfilePoint> minima_profile(std::span<const MinimaSnapshot> minima,
                                         const SpinConfig& solution,
                                         std::optional<long> ground_energy,
                                         std::optional<std::size_t> restrict_to);

struct SamplingReport {
  std::vector<std::uint64_t> tallies;  // by canonical ground-state index
  std::uint64_t runs = 0;              // runs that reached a ground state
  std::uint64_t misses = 0;            // runs that did not
  Chi2Result chi2;
  std::vector<std::vector<double>> pairwise_hamming;  // logical, normalized
};

// Mean of the strictly upper triangle of a pairwise distance matrix.
double mean_pairwise(const std::vector<std::vector<double>>& matrix);

// CSV tables with fixed headers.
struct ScalingRow {
  std::size_t n = 0;
  RuntimeSummary summary;
};
// n,median,q25,q75,fit; the fit column is empty without a fit.
std::string scaling_csv(std::span<const ScalingRow> rows, const std::optional<ScalingFit>& fit);
// state_index,tally,fraction
std::string sampling_csv(const SamplingReport& report);
// residual,distance
std::string profile_csv(std::span<const ProfilePoint> points);

// Shortest round-trip decimal form, used for every floating value in output
// files.
std::string format_double(double value);

}  // namespace eqplant
