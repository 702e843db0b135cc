#include "eqplant/analysis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "eqplant/errors.hpp"
#include "oracles.hpp"

namespace eqplant {
namespace {

using testing::random_spins;

TEST(Summary, Examples) {
  const std::vector<double> one{1, 2, 3, 4, 5};
  const auto a = runtime_summary(one);
  EXPECT_EQ(a.median, 3);
  EXPECT_EQ(a.q25, 2);
  EXPECT_EQ(a.q75, 4);
  const auto b = runtime_summary(std::vector<double>{10, 10, 10, 10});
  EXPECT_EQ(b.median, 10);
  EXPECT_EQ(b.q25, 10);
  EXPECT_EQ(b.q75, 10);
  EXPECT_THROW(runtime_summary(std::vector<double>{}), std::invalid_argument);
}

TEST(Summary, LowerOrderStatisticOfShuffledInput) {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 40);
    std::vector<double> v(n);
    for (auto& x : v) x = static_cast<double>(uniform_index(rng, 1000));
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const auto s = runtime_summary(v);
    EXPECT_EQ(s.median, sorted[(n - 1) / 2]);
    EXPECT_EQ(s.q25, sorted[(n - 1) / 4]);
    EXPECT_EQ(s.q75, sorted[3 * (n - 1) / 4]);
    EXPECT_LE(s.q25, s.median);
    EXPECT_LE(s.median, s.q75);
  }
}

TEST(Fit, RecoversExactExponential) {
  std::vector<ScalingPoint> pts;
  for (const double n : {16.0, 24.0, 32.0, 40.0, 48.0}) pts.push_back({n, 7.5 * std::exp(0.13 * n)});
  const auto f = fit_exponent(pts);
  EXPECT_NEAR(f.alpha, 0.13, 1e-12);
  EXPECT_NEAR(f.log_prefactor, std::log(7.5), 1e-10);
  EXPECT_NEAR(f.max_abs_residual, 0.0, 1e-10);
  EXPECT_NEAR(f.predict(64), 7.5 * std::exp(0.13 * 64), 1e-6 * std::exp(0.13 * 64));
}

TEST(Fit, ConstantGivesZeroSlope) {
  const std::vector<ScalingPoint> pts{{8, 100}, {16, 100}, {32, 100}};
  EXPECT_NEAR(fit_exponent(pts).alpha, 0.0, 1e-15);
}

TEST(Fit, Errors) {
  EXPECT_THROW(fit_exponent(std::vector<ScalingPoint>{{8, 1}, {16, 2}}), std::invalid_argument);
  EXPECT_THROW(fit_exponent(std::vector<ScalingPoint>{{8, 1}, {16, 0}, {32, 4}}), std::invalid_argument);
  EXPECT_THROW(fit_exponent(std::vector<ScalingPoint>{{8, 1}, {8, 2}, {8, 4}}), std::invalid_argument);
}

TEST(Fit, MatchesClosedFormSlope) {
  // Three equally spaced points: slope = (y3 - y1) / (x3 - x1).
  const std::vector<ScalingPoint> pts{{10, 3}, {20, 50}, {30, 70}};
  EXPECT_NEAR(fit_exponent(pts).alpha, (std::log(70.0) - std::log(3.0)) / 20.0, 1e-14);
}

TEST(Gamma, AgreesWithBoost) {
  for (const double a : {0.5, 1.0, 1.5, 3.5, 10.0, 63.5, 500.0})
    for (const double x : {0.0, 0.01, 0.5, 1.0, 2.0, 5.0, 10.0, 60.0, 100.0, 520.0}) {
      const double ours = regularized_gamma_q(a, x);
      const double ref = boost::math::gamma_q(a, x);
      EXPECT_NEAR(ours, ref, 1e-12 + 1e-10 * ref) << "a=" << a << " x=" << x;
    }
  EXPECT_THROW(regularized_gamma_q(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(regularized_gamma_q(1.0, -1.0), std::invalid_argument);
}

// Upper tail of chi-squared with 1 dof, by Simpson's rule on the density.
double chi2_dof1_tail(double from) {
  const auto pdf = [](double x) { return std::exp(-x / 2) / std::sqrt(2 * M_PI * x); };
  const double to = from + 200.0;
  const int steps = 200000;
  const double h = (to - from) / steps;
  double sum = pdf(from) + pdf(to);
  for (int i = 1; i < steps; ++i) sum += pdf(from + i * h) * (i % 2 ? 4 : 2);
  return sum * h / 3;
}

TEST(Chi2, Examples) {
  const auto even = chi2_uniform_pvalue(std::vector<std::uint64_t>{50, 50});
  EXPECT_EQ(even.stat, 0.0);
  EXPECT_EQ(even.p, 1.0);

  const auto skew = chi2_uniform_pvalue(std::vector<std::uint64_t>{30, 70});
  EXPECT_DOUBLE_EQ(skew.stat, 16.0);
  EXPECT_EQ(skew.dof, 1u);
  EXPECT_NEAR(skew.p, std::erfc(std::sqrt(8.0)), 1e-15);
  EXPECT_NEAR(skew.p, chi2_dof1_tail(16.0), 1e-10);
  EXPECT_NEAR(skew.p, 6.334e-5, 1e-8);

  const auto eight = chi2_uniform_pvalue(std::vector<std::uint64_t>(8, 125));
  EXPECT_EQ(eight.stat, 0.0);
  EXPECT_EQ(eight.dof, 7u);
  EXPECT_EQ(eight.p, 1.0);

  EXPECT_THROW(chi2_uniform_pvalue(std::vector<std::uint64_t>{5}), std::invalid_argument);
  EXPECT_THROW(chi2_uniform_pvalue(std::vector<std::uint64_t>{0, 0}), std::invalid_argument);
}

TEST(Chi2, PValueFallsAsTalliesSkew) {
  double last = 2.0;
  for (std::uint64_t a = 50; a <= 100; ++a) {
    const auto r = chi2_uniform_pvalue(std::vector<std::uint64_t>{a, 100 - a});
    EXPECT_LE(r.p, last);
    EXPECT_GE(r.p, 0.0);
    last = r.p;
  }
}

TEST(Chi2, UniformTalliesGiveUniformPValues) {
  // Multinomial draws from the uniform law over 8 states; under the null the
  // p-values are close to Uniform(0, 1).
  Rng rng(52);
  constexpr int kTrials = 1000;
  std::vector<double> ps;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<std::uint64_t> tallies(8, 0);
    for (int draw = 0; draw < 1000; ++draw) ++tallies[uniform_index(rng, 8)];
    ps.push_back(chi2_uniform_pvalue(tallies).p);
  }
  std::sort(ps.begin(), ps.end());
  double ks = 0.0;
  for (int i = 0; i < kTrials; ++i)
    ks = std::max({ks, std::abs(ps[i] - static_cast<double>(i) / kTrials),
                   std::abs(ps[i] - static_cast<double>(i + 1) / kTrials)});
  EXPECT_LT(ks, 0.1);
}

TEST(Hamming, Examples) {
  const SpinConfig a(std::vector<std::int8_t>{1, 1, -1, -1});
  SpinConfig b = a;
  EXPECT_EQ(hamming(a, b).count, 0u);
  for (std::size_t i = 0; i < 4; ++i) b.flip(i);
  EXPECT_EQ(hamming(a, b).normalized, 1.0);
  EXPECT_EQ(hamming(a, b, 2).count, 2u);
  EXPECT_EQ(hamming(a, b, 2).normalized, 1.0);
  EXPECT_THROW(hamming(a, SpinConfig(3)), std::invalid_argument);
  EXPECT_THROW(hamming(a, b, 5), std::invalid_argument);
}

TEST(Hamming, IsAMetric) {
  Rng rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 64);
    const auto x = random_spins(n, rng);
    const auto y = random_spins(n, rng);
    const auto z = random_spins(n, rng);
    EXPECT_EQ(hamming(x, x).count, 0u);
    EXPECT_EQ(hamming(x, y).count, hamming(y, x).count);
    EXPECT_LE(hamming(x, z).count, hamming(x, y).count + hamming(y, z).count);
    EXPECT_GE(hamming(x, y).normalized, 0.0);
    EXPECT_LE(hamming(x, y).normalized, 1.0);
  }
}

TEST(Hamming, DegeneratePairAgreesWithBruteForce) {
  const auto lib = GadgetLibrary::standard();
  const auto sys = generate_with_nullity(8, 1, 3, 100000);
  const auto gs = brute_force_ground_states(compile(sys, lib));
  ASSERT_EQ(gs.configs.size(), 2u);
  const auto s = analyze(sys).solutions;
  const auto x0 = SpinConfig::from_bits(solution_at(s, 0));
  const auto x1 = SpinConfig::from_bits(solution_at(s, 1));
  const auto d = hamming(x0, x1);
  const auto d_gs = hamming(gs.configs[0], gs.configs[1], 8);
  EXPECT_EQ(d.count, d_gs.count);
  EXPECT_EQ(d.count, s.basis[0].count());
}

TEST(Profile, Examples) {
  const SpinConfig sol(4);
  SpinConfig far = sol;
  far.flip(0);
  far.flip(1);
  const std::vector<MinimaSnapshot> snaps{{10, -16, sol}, {20, -14, far}};
  const auto p = minima_profile(snaps, sol, -16, 4);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].residual, 0.0);
  EXPECT_EQ(p[0].distance, 0.0);
  EXPECT_EQ(p[1].residual, 0.125);
  EXPECT_EQ(p[1].distance, 0.5);
  EXPECT_THROW(minima_profile(snaps, sol, std::nullopt, 4), DomainError);
}

TEST(Csv, Headers) {
  SamplingReport rep;
  rep.tallies = {3, 1};
  rep.runs = 4;
  EXPECT_EQ(sampling_csv(rep), "state_index,tally,fraction\n0,3,0.75\n1,1,0.25\n");
  const std::vector<ProfilePoint> pts{{0.5, 0.25}};
  EXPECT_EQ(profile_csv(pts), "residual,distance\n0.5,0.25\n");
  const std::vector<ScalingPoint> sp{{8, 10}, {16, 100}, {24, 1000}};
  const auto fit = fit_exponent(sp);
  const std::vector<ScalingRow> rows{{8, {10, 5, 20}}};
  EXPECT_EQ(scaling_csv(rows, fit).substr(0, 25), "n,median,q25,q75,fit\n8,10");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(mean_pairwise({{0, 0.5, 0.25}, {0.5, 0, 0.75}, {0.25, 0.75, 0}}), 0.5);
}

}  // namespace
}  // namespace eqplant
