#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frusloop/bench.hpp"

using namespace frusloop;

TEST(Stats, ConstantSamples) {
  const std::vector<double> x(10, 7.0);
  const auto s = lognormal_stats(std::span<const double>(x));
  EXPECT_NEAR(s.mu_hat, std::log(7.0), 1e-15);
  EXPECT_NEAR(s.sigma_hat, 0.0, 1e-12);
  EXPECT_NEAR(s.p95, 7.0, 1e-12);
  EXPECT_EQ(s.median, 7.0);
}

TEST(Stats, TwoPoints) {
  const std::vector<double> x{1.0, std::exp(2.0)};
  const auto s = lognormal_stats(std::span<const double>(x));
  EXPECT_NEAR(s.mu_hat, 1.0, 1e-15);
  EXPECT_NEAR(s.sigma_hat, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.p95, std::exp(1.0 + 2.0 * std::sqrt(2.0)), 1e-12);
}

TEST(Stats, SyntheticRecovery) {
  std::mt19937_64 g(1);
  std::lognormal_distribution<double> d(3.0, 0.5);
  std::vector<double> x(100000);
  for (auto& v : x) v = std::max(1.0, d(g));
  const auto s = lognormal_stats(std::span<const double>(x));
  EXPECT_NEAR(s.mu_hat, 3.0, 0.01);
  EXPECT_NEAR(s.sigma_hat, 0.5, 0.01);
  EXPECT_NEAR(s.p95 / std::exp(4.0), 1.0, 0.02);
  EXPECT_NEAR(s.p95 * s.p5 / (s.geo_mean * s.geo_mean), 1.0, 1e-9);
}

TEST(Stats, Rejects) {
  const std::vector<double> one{3.0};
  EXPECT_THROW(lognormal_stats(std::span<const double>(one)), InvalidParameter);
  const std::vector<double> low{3.0, 0.5};
  EXPECT_THROW(lognormal_stats(std::span<const double>(low)), InvalidParameter);
}

TEST(Stats, CentralValue) {
  HardnessStats s;
  s.geo_mean = 2.0;
  s.median = 3.0;
  s.k = 999;
  EXPECT_EQ(central_value(s), 2.0);
  s.k = 1000;
  EXPECT_EQ(central_value(s), 3.0);
}

TEST(Nsweep, Fits) {
  EXPECT_EQ(default_nsweep(30, 0.05).value, 20u);
  const auto c = default_nsweep(30, 0.018);
  EXPECT_TRUE(c.clamped);
  EXPECT_EQ(c.value, 1u);
  EXPECT_EQ(first_fit_nsweep(50, 0.1).value, 34u);
}

TEST(RhoPeak, Reference) {
  EXPECT_NEAR(rho_peak_reference(30), 0.4675, 5e-4);
  EXPECT_NEAR(rho_peak_reference(1e6), 0.3035, 1e-12);
  EXPECT_NEAR(rho_peak_reference(0), 0.5987, 1e-12);
}

TEST(Fits, SyntheticModels) {
  std::vector<double> n, y, z;
  for (double k = 10; k <= 80; k += 10) {
    n.push_back(k);
    y.push_back(0.02 * k * k);
    z.push_back(5.0 * std::exp(0.3 * k));
  }
  const auto p = fit_power_law(n, y);
  EXPECT_NEAR(p.b, 2.0, 0.01);
  EXPECT_NEAR(p.A, 0.02, 1e-9);
  EXPECT_NEAR(p.rss, 0.0, 1e-20);
  const auto e = fit_exponential(n, z);
  EXPECT_NEAR(e.b, 0.3, 0.01);
  EXPECT_NEAR(e.A, 5.0, 1e-9);
}

TEST(Point, SingleDensityScan) {
  BenchPoint p;
  p.n = 10;
  p.f = 0.1;
  p.samples = 2;
  p.seed = 3;
  const auto scan = density_scan(p, {0.5});
  ASSERT_EQ(scan.points.size(), 1u);
  EXPECT_EQ(scan.peak_rho, 0.5);
}

TEST(Point, DeterministicAcrossThreads) {
  BenchPoint p;
  p.n = 14;
  p.f = 0.15;
  p.rho = 0.5;
  p.samples = 12;
  p.seed = 11;
  const auto a = measure_point(p, 1), b = measure_point(p, 4);
  EXPECT_EQ(a.n_tot, b.n_tot);
  EXPECT_EQ(a.stats.p95, b.stats.p95);
}

TEST(Point, CensoringMonotone) {
  BenchPoint p;
  p.n = 16;
  p.f = 0.22;
  p.rho = 0.5;
  p.samples = 10;
  p.n_sweep = 2;
  p.seed = 5;
  p.max_runs = 3;
  const auto lo = measure_point(p);
  p.max_runs = 30;
  const auto hi = measure_point(p);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_LE(lo.n_tot[k], hi.n_tot[k]);
  EXPECT_LE(lo.stats.p95, hi.stats.p95 + 1e-9);
  for (auto v : lo.n_tot) EXPECT_LE(v, 2u * 3u);
}

TEST(Point, NearTrivialInstances) {
  BenchPoint p;
  p.n = 20;
  p.f = 0.01;
  p.rho = 0.5;
  p.samples = 50;
  p.n_sweep = 10;
  p.seed = 8;
  const auto r = measure_point(p);
  EXPECT_EQ(r.censored, 0u);
  EXPECT_LE(r.stats.p95, 10.0 * 10.0);
}

TEST(Point, ParallelForPropagatesErrors) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t k) {
                 if (k == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
