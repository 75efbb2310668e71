#pragma once

// Hardness measurement: log-normal summary statistics of N_tot, the fitted
// default sweep counts, density scans and size-scaling fits.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "frusloop/core.hpp"
#include "frusloop/error.hpp"
#include "frusloop/generate.hpp"
#include "frusloop/rng.hpp"
#include "frusloop/solve.hpp"

namespace frusloop {

struct HardnessStats {
  std::size_t k = 0;
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double p5 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double geo_mean = 0.0;
  /// Empirical median of the raw samples.
  double median = 0.0;
};

/// mu = mean(ln x), sigma = sample standard deviation of ln x,
/// p5/p95 = exp(mu -/+ 2 sigma), p50 = geo_mean = exp(mu).
inline HardnessStats lognormal_stats(std::span<const double> samples) {
  detail::require(samples.size() >= 2, "log-normal statistics need at least two samples");
  HardnessStats s;
  s.k = samples.size();
  double sum = 0.0;
  for (double x : samples) {
    detail::require(x >= 1.0 && std::isfinite(x), "samples must be finite and >= 1");
    sum += std::log(x);
  }
  s.mu_hat = sum / static_cast<double>(s.k);
  double ss = 0.0;
  for (double x : samples) {
    const double d = std::log(x) - s.mu_hat;
    ss += d * d;
  }
  s.sigma_hat = std::sqrt(ss / static_cast<double>(s.k - 1));
  s.geo_mean = std::exp(s.mu_hat);
  s.p50 = s.geo_mean;
  s.p5 = std::exp(s.mu_hat - 2.0 * s.sigma_hat);
  s.p95 = std::exp(s.mu_hat + 2.0 * s.sigma_hat);

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = s.k / 2;
  s.median = s.k % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  return s;
}

inline HardnessStats lognormal_stats(std::span<const std::uint64_t> samples) {
  std::vector<double> x(samples.begin(), samples.end());
  return lognormal_stats(std::span<const double>(x));
}

struct NsweepFit {
  std::size_t value = 1;
  bool clamped = false;
  double raw = 0.0;
};

namespace detail {

inline NsweepFit round_fit(double raw) {
  NsweepFit r;
  r.raw = raw;
  const double v = std::nearbyint(raw);
  if (!(v >= 1.0)) {
    r.clamped = true;
    r.value = 1;
  } else {
    r.value = static_cast<std::size_t>(v);
  }
  return r;
}

}  // namespace detail

/// (1.29 n^2 - 33.1 n + 1664)(41.4 f^3 - 11.7 f^2 + 1.06 f - 0.018), rounded,
/// clamped to 1 (flagged) where the cubic factor is not positive.
inline NsweepFit default_nsweep(std::size_t n, double f) {
  detail::require(n >= 2, "default_nsweep needs n >= 2");
  const double x = static_cast<double>(n);
  return detail::round_fit((1.29 * x * x - 33.1 * x + 1664.0) *
                           (41.4 * f * f * f - 11.7 * f * f + 1.06 * f - 0.018));
}

/// Earlier fit (0.504 n^2 - 13.3 n + 311)(193 f^3 - 52.7 f^2 + 4.73 f - 0.102).
inline NsweepFit first_fit_nsweep(std::size_t n, double f) {
  detail::require(n >= 2, "first_fit_nsweep needs n >= 2");
  const double x = static_cast<double>(n);
  return detail::round_fit((0.504 * x * x - 13.3 * x + 311.0) *
                           (193.0 * f * f * f - 52.7 * f * f + 4.73 * f - 0.102));
}

/// Hardness-peak density 0.3035 + 0.2952 exp(-0.0196 n).
inline double rho_peak_reference(double n) { return 0.3035 + 0.2952 * std::exp(-0.0196 * n); }

enum class PeakStatistic { p95, median, geo_mean };

inline PeakStatistic parse_statistic(const std::string& s) {
  if (s == "p95") return PeakStatistic::p95;
  if (s == "median") return PeakStatistic::median;
  if (s == "geo_mean") return PeakStatistic::geo_mean;
  throw InvalidParameter("unknown statistic '" + s + "' (p95, median, geo_mean)");
}

inline std::string to_string(PeakStatistic s) {
  switch (s) {
    case PeakStatistic::p95: return "p95";
    case PeakStatistic::median: return "median";
    case PeakStatistic::geo_mean: return "geo_mean";
  }
  return "?";
}

inline double pick(const HardnessStats& s, PeakStatistic which) {
  switch (which) {
    case PeakStatistic::p95: return s.p95;
    case PeakStatistic::median: return s.median;
    case PeakStatistic::geo_mean: return s.geo_mean;
  }
  return s.p95;
}

/// Central value reported for a size: geo_mean for k < 1000, else the
/// empirical median.
inline double central_value(const HardnessStats& s) { return s.k < 1000 ? s.geo_mean : s.median; }

struct BenchPoint {
  std::size_t n = 0;
  std::size_t m = 0;
  double f = 0.0;
  double rho = 0.0;
  GenMode mode = GenMode::random;
  double d = 0.5;
  std::size_t samples = 200;
  /// Sweeps per run; default_nsweep(n, f) when 0.
  std::size_t n_sweep = 0;
  std::size_t max_runs = kDefaultMaxRuns;
  double beta_min = kDefaultBetaMin;
  std::uint64_t seed = 0;
};

struct PointResult {
  BenchPoint point;
  std::size_t n_sweep = 0;
  bool n_sweep_clamped = false;
  std::vector<std::uint64_t> n_tot;
  std::size_t censored = 0;
  HardnessStats stats;
};

inline std::size_t resolved_nsweep(const BenchPoint& p, bool* clamped = nullptr) {
  if (p.n_sweep > 0) return p.n_sweep;
  const auto fit = default_nsweep(p.n, p.f);
  if (clamped) *clamped = fit.clamped;
  return fit.value;
}

/// Runs fn(k) for k in [0, count) on up to `threads` workers; the caller
/// stores results by index, so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count && !failed; k = next++) {
        try {
          fn(k);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline unsigned default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Instance k of a point uses generator seed derive_seed(point.seed, k) and
/// solver seed derive_seed(that, 1). Unsolved instances enter at their
/// censoring value n_sweep * max_runs.
inline PointResult measure_point(const BenchPoint& p, unsigned threads = 1) {
  detail::require(p.samples >= 2, "a bench point needs at least two samples");
  PointResult res;
  res.point = p;
  res.n_sweep = resolved_nsweep(p, &res.n_sweep_clamped);
  res.n_tot.assign(p.samples, 0);
  std::vector<char> solved(p.samples, 0);

  parallel_for(p.samples, threads, [&](std::size_t k) {
    GenParams g;
    g.n = p.n;
    g.m = p.m ? p.m : p.n;
    g.f = p.f;
    g.rho = p.rho;
    g.mode = p.mode;
    g.d = p.d;
    g.seed = derive_seed(p.seed, k);
    const RbmInstance inst = generate(g);
    AnnealSchedule sched;
    sched.beta_min = p.beta_min;
    sched.n_sweep = res.n_sweep;
    sched.max_runs = p.max_runs;
    sched.seed = derive_seed(g.seed, 1);
    const TtsRecord rec = solve_with_restarts(inst, *inst.ground_energy, sched, p.rho);
    res.n_tot[k] = rec.n_tot;
    solved[k] = rec.found ? 1 : 0;
  });
  for (char s : solved) res.censored += s ? 0 : 1;
  res.stats = lognormal_stats(std::span<const std::uint64_t>(res.n_tot));
  return res;
}

struct ScanResult {
  std::vector<PointResult> points;
  PeakStatistic statistic = PeakStatistic::p95;
  double peak_rho = 0.0;
};

/// One point per density; point k uses seed derive_seed(base.seed, k). The
/// peak is the density maximizing the chosen statistic (first on ties).
inline ScanResult density_scan(const BenchPoint& base, const std::vector<double>& densities,
                               PeakStatistic statistic = PeakStatistic::p95, unsigned threads = 1,
                               const std::function<void(const PointResult&)>& on_point = {}) {
  detail::require(!densities.empty(), "density scan needs at least one density");
  ScanResult scan;
  scan.statistic = statistic;
  double best = -1.0;
  for (std::size_t k = 0; k < densities.size(); ++k) {
    BenchPoint p = base;
    p.rho = densities[k];
    p.seed = derive_seed(base.seed, k);
    scan.points.push_back(measure_point(p, threads));
    if (on_point) on_point(scan.points.back());
    const double v = pick(scan.points.back().stats, statistic);
    if (v > best) {
      best = v;
      scan.peak_rho = densities[k];
    }
  }
  return scan;
}

/// Least-squares fit of ln y = ln A + b x; `rss` is the residual sum of
/// squares in log space.
struct LogFit {
  double A = 0.0;
  double b = 0.0;
  double rss = 0.0;
};

inline LogFit fit_log_linear(std::span<const double> x, std::span<const double> y) {
  detail::require_dims(x.size() == y.size(), "fit inputs differ in length");
  detail::require(x.size() >= 3, "fits need at least three points");
  const double k = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    detail::require(y[i] > 0.0, "fit values must be positive");
    const double ly = std::log(y[i]);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
  }
  const double den = k * sxx - sx * sx;
  detail::require(den != 0.0, "fit abscissae are all equal");
  LogFit fit;
  fit.b = (k * sxy - sx * sy) / den;
  const double lnA = (sy - fit.b * sx) / k;
  fit.A = std::exp(lnA);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - lnA - fit.b * x[i];
    fit.rss += r * r;
  }
  return fit;
}

/// y = A n^b.
inline LogFit fit_power_law(std::span<const double> n, std::span<const double> y) {
  std::vector<double> ln(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    detail::require(n[i] > 0.0, "power-law abscissae must be positive");
    ln[i] = std::log(n[i]);
  }
  return fit_log_linear(ln, y);
}

/// y = A e^(b n).
inline LogFit fit_exponential(std::span<const double> n, std::span<const double> y) {
  return fit_log_linear(n, y);
}

struct ScalingResult {
  std::vector<PointResult> points;
  std::vector<double> sizes;
  std::vector<double> central;
  LogFit power;
  LogFit exponential;
};

/// One point per size at rho_peak_reference(n); point k uses seed
/// derive_seed(base.seed, k).
inline ScalingResult scaling_study(const BenchPoint& base, const std::vector<std::size_t>& sizes,
                                   unsigned threads = 1,
                                   const std::function<void(const PointResult&)>& on_point = {}) {
  detail::require(sizes.size() >= 3, "scaling study needs at least three sizes");
  detail::require(std::is_sorted(sizes.begin(), sizes.end()), "sizes must be ascending");
  ScalingResult out;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    BenchPoint p = base;
    p.n = sizes[k];
    p.m = base.m ? base.m : sizes[k];
    p.rho = rho_peak_reference(static_cast<double>(sizes[k]));
    p.seed = derive_seed(base.seed, k);
    out.points.push_back(measure_point(p, threads));
    if (on_point) on_point(out.points.back());
    out.sizes.push_back(static_cast<double>(sizes[k]));
    out.central.push_back(central_value(out.points.back().stats));
  }
  out.power = fit_power_law(out.sizes, out.central);
  out.exponential = fit_exponential(out.sizes, out.central);
  return out;
}

}  // namespace frusloop
