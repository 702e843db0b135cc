#include "eqplant/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "eqplant/errors.hpp"

namespace eqplant {

double quantile_lower(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile_lower: empty input");
  const auto index = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
  return sorted[std::min(index, sorted.size() - 1)];
}

RuntimeSummary runtime_summary(std::span<const double> costs) {
  if (costs.empty()) throw std::invalid_argument("runtime_summary: empty input");
  std::vector<double> sorted(costs.begin(), costs.end());
  std::sort(sorted.begin(), sorted.end());
  return {quantile_lower(sorted, 0.5), quantile_lower(sorted, 0.25), quantile_lower(sorted, 0.75)};
}

double ScalingFit::predict(double n) const { return std::exp(log_prefactor + alpha * n); }

ScalingFit fit_exponent(std::span<const ScalingPoint> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_exponent: need at least 3 points");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    if (!(p.median > 0.0)) throw std::invalid_argument("fit_exponent: medians must be positive");
    mean_x += p.n;
    mean_y += std::log(p.median);
  }
  const auto count = static_cast<double>(points.size());
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.n - mean_x) * (p.n - mean_x);
    sxy += (p.n - mean_x) * (std::log(p.median) - mean_y);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponent: sizes must not all be equal");

  ScalingFit fit;
  fit.alpha = sxy / sxx;
  fit.log_prefactor = mean_y - fit.alpha * mean_x;
  double ssr = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.median) - (fit.log_prefactor + fit.alpha * p.n);
    ssr += r * r;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  fit.stderr_alpha = std::sqrt(ssr / (count - 2.0) / sxx);
  fit.points.assign(points.begin(), points.end());
  return fit;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x))
    throw std::invalid_argument("regularized_gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10'000;
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);

  if (x < a + 1.0) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return std::clamp(1.0 - sum * std::exp(log_prefix), 0.0, 1.0);
  }

  constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::clamp(std::exp(log_prefix) * h, 0.0, 1.0);
}

Chi2Result chi2_uniform_pvalue(std::span<const std::uint64_t> tallies) {
  if (tallies.size() < 2) throw std::invalid_argument("chi2_uniform_pvalue: need at least 2 categories");
  const std::uint64_t runs = std::accumulate(tallies.begin(), tallies.end(), std::uint64_t{0});
  if (runs == 0) throw std::invalid_argument("chi2_uniform_pvalue: no observations");
  const double expected = static_cast<double>(runs) / static_cast<double>(tallies.size());
  Chi2Result r;
  for (const auto t : tallies) {
    const double diff = static_cast<double>(t) - expected;
    r.stat += diff * diff / expected;
  }
  r.dof = tallies.size() - 1;
  r.p = regularized_gamma_q(static_cast<double>(r.dof) / 2.0, r.stat / 2.0);
  return r;
}

HammingDistance hamming(const SpinConfig& a, const SpinConfig& b,
                        std::optional<std::size_t> restrict_to) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming: length mismatch");
  const std::size_t len = restrict_to.value_or(a.size());
  if (len > a.size()) throw std::invalid_argument("hamming: restriction longer than the configs");
  HammingDistance d;
  for (std::size_t i = 0; i < len; ++i) d.count += a[i] != b[i];
  d.normalized = len == 0 ? 0.0 : static_cast<double>(d.count) / static_cast<double>(len);
  return d;
}

std::vector<ProfilePoint> minima_profile(std::span<const MinimaSnapshot> minima,
                                         const SpinConfig& solution,
                                         std::optional<long> ground_energy,
                                         std::optional<std::size_t> restrict_to) {
  if (!ground_energy) throw DomainError("minima_profile: ground energy is unknown");
  if (*ground_energy == 0) throw DomainError("minima_profile: ground energy is zero");
  const double scale = std::abs(static_cast<double>(*ground_energy));
  std::vector<ProfilePoint> out;
  out.reserve(minima.size());
  for (const auto& snap : minima)
    out.push_back({static_cast<double>(snap.energy - *ground_energy) / scale,
                   hamming(snap.config, solution, restrict_to).normalized});
  return out;
}

double mean_pairwise(const std::vector<std::vector<double>>& matrix) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < matrix.size(); ++i)
    for (std::size_t j = i + 1; j < matrix[i].size(); ++j) {
      total += matrix[i][j];
      ++count;
    }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string scaling_csv(std::span<const ScalingRow> rows, const std::optional<ScalingFit>& fit) {
  std::string out = "n,median,q25,q75,fit\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n) + "," + format_double(row.summary.median) + "," +
           format_double(row.summary.q25) + "," + format_double(row.summary.q75) + "," +
           (fit ? format_double(fit->predict(static_cast<double>(row.n))) : "") + "\n";
  }
  return out;
}

std::string sampling_csv(const SamplingReport& report) {
  std::string out = "state_index,tally,fraction\n";
  for (std::size_t i = 0; i < report.tallies.size(); ++i) {
    const double fraction = report.runs == 0 ? 0.0
                                             : static_cast<double>(report.tallies[i]) /
                                                   static_cast<double>(report.runs);
    out += std::to_string(i) + "," + std::to_string(report.tallies[i]) + "," +
           format_double(fraction) + "\n";
  }
  return out;
}

std::string profile_csv(std::span<const ProfilePoint> points) {
  std::string out = "residual,distance\n";
  for (const auto& p : points) out += format_double(p.residual) + "," + format_double(p.distance) + "\n";
  return out;
}

}  // namespace eqplant
