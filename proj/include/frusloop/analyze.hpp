#pragma once

// Closed-form predictors: loop intersections, frustration decay, expected
// number of local minima, gap variance and local-field dispersion.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "frusloop/core.hpp"
#include "frusloop/error.hpp"
#include "frusloop/special.hpp"

namespace frusloop {

struct SeriesValue {
  double value = 0.0;
  /// "exact-series" or "asymptote" (term cap reached).
  std::string method = "exact-series";
  std::size_t terms = 0;
};

inline constexpr std::size_t kSeriesTermCap = 10'000;

/// E(min{k1, k2}) for independent k1 ~ Poisson(lambda/4), k2 ~
/// Poisson(3 lambda/4):
///   lambda/2 - 1/2 e^-lambda sum_k k (3^(-k/2) + 3^(k/2)) I_k(sqrt(3) lambda/2).
/// Terms are summed in log space until they drop below 1e-12 of the sum.
inline SeriesValue expected_min_overlap(double lambda) {
  detail::require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be finite and >= 0");
  SeriesValue out;
  if (lambda == 0.0) return out;
  const double z = std::sqrt(3.0) * lambda / 2.0;
  const double half_ln3 = 0.5 * std::log(3.0);
  double log_sum = special::kNegInf;
  double log_peak = special::kNegInf;
  for (std::size_t k = 1; k <= kSeriesTermCap; ++k) {
    const double kd = static_cast<double>(k);
    // log(3^(k/2) + 3^(-k/2)) = k ln3/2 + log1p(3^-k)
    const double t = std::log(kd) + kd * half_ln3 + std::log1p(std::exp(-2.0 * kd * half_ln3)) +
                     special::log_bessel_i(static_cast<int>(k), z) - lambda;
    log_sum = special::log_add(log_sum, t);
    log_peak = std::max(log_peak, t);
    out.terms = k;
    if (t < log_peak && t < log_sum + std::log(1e-12)) {
      out.value = 0.5 * lambda - 0.5 * std::exp(log_sum);
      return out;
    }
  }
  out.method = "asymptote";
  out.value = lambda / 4.0;
  return out;
}

/// Total expected intersections of N random atoms on an n x m matrix:
/// nm E(min{k1, k2}) at lambda = 4N/(nm).
inline SeriesValue expected_intersections(std::size_t n, std::size_t m, std::size_t N) {
  detail::require(n * m >= 4, "expected_intersections needs nm >= 4");
  const double nm = static_cast<double>(n * m);
  SeriesValue s = expected_min_overlap(4.0 * static_cast<double>(N) / nm);
  s.value *= nm;
  return s;
}

/// E(f) = (1 - N / (2N - E(N_x))) / 2 for alpha = 1 atoms with destructive
/// intersections allowed.
inline double expected_frustration_decay(std::size_t n, std::size_t m, std::size_t N) {
  detail::require(N >= 1, "expected_frustration_decay needs N >= 1");
  const double Nd = static_cast<double>(N);
  const double nx = expected_intersections(n, m, N).value;
  return 0.5 * (1.0 - Nd / (2.0 * Nd - nx));
}

/// k = (3 - alpha)/(alpha + 1).
inline double local_minima_k(double alpha) {
  detail::require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  return (3.0 - alpha) / (alpha + 1.0);
}

/// log p(n1, n2): probability that flipping n1 visible and n2 hidden spins of
/// an n x n matrix with iid entries (-alpha w.p. 1/4, +1 w.p. 3/4) lands on a
/// local minimum, as a product of four erfc powers over 2^(2n).
inline double log_local_min_probability(std::size_t n, std::size_t n1, std::size_t n2, double k) {
  detail::require(n1 <= n && n2 <= n, "flip counts exceed n");
  const double nd = static_cast<double>(n);
  const double scale = k / std::sqrt(6.0 * nd);
  const double x2 = scale * (nd - 2.0 * static_cast<double>(n2));
  const double x1 = scale * (nd - 2.0 * static_cast<double>(n1));
  auto term = [](double power, double x) { return power == 0.0 ? 0.0 : power * special::log_erfc(x); };
  return -2.0 * nd * std::log(2.0) + term(static_cast<double>(n1), x2) +
         term(static_cast<double>(n - n1), -x2) + term(static_cast<double>(n2), x1) +
         term(static_cast<double>(n - n2), -x1);
}

struct LocalMinimaEstimate {
  double value = 0.0;
  /// log of the double sum before p(0,0) is removed.
  double log_sum = 0.0;
  bool overflow = false;
};

/// sum_{n1,n2} p(n1,n2) C(n,n1) C(n,n2) - p(0,0), accumulated in log space.
inline LocalMinimaEstimate expected_local_minima(std::size_t n, double alpha) {
  detail::require(n >= 2, "expected_local_minima needs n >= 2");
  const double k = local_minima_k(alpha);
  const double nd = static_cast<double>(n);
  std::vector<double> logs;
  logs.reserve((n + 1) * (n + 1));
  for (std::size_t a = 0; a <= n; ++a)
    for (std::size_t b = 0; b <= n; ++b)
      logs.push_back(log_local_min_probability(n, a, b, k) +
                     special::log_binomial(nd, static_cast<double>(a)) +
                     special::log_binomial(nd, static_cast<double>(b)));
  LocalMinimaEstimate est;
  est.log_sum = special::logsumexp(logs);
  const double p00 = std::exp(log_local_min_probability(n, 0, 0, k));
  if (est.log_sum > std::log(std::numeric_limits<double>::max())) {
    est.overflow = true;
    est.value = std::numeric_limits<double>::infinity();
    return est;
  }
  est.value = std::max(0.0, std::exp(est.log_sum) - p00);
  return est;
}

/// Number of single-flip local minima among all 2^(n+m) states; `strict`
/// requires every flip to raise the energy by more than `tol`.
inline std::uint64_t local_minima_census(const RbmInstance& inst, bool strict,
                                         double tol = kEnergyTolerance) {
  validate(inst);
  const std::size_t n = inst.n(), m = inst.m();
  detail::require(n + m <= 24, "local-minima census limited to n + m <= 24");
  std::uint64_t count = 0;
  SpinState s = SpinState::all_up(n, m);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n + m)); ++code) {
    for (std::size_t i = 0; i < n; ++i) s.v[i] = (code >> i) & 1 ? -1 : 1;
    for (std::size_t j = 0; j < m; ++j) s.h[j] = (code >> (n + j)) & 1 ? -1 : 1;
    const auto theta = visible_fields(inst, s);
    const auto phi = hidden_fields(inst, s);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const double de = 2.0 * s.v[i] * theta[i];
      ok = strict ? de > tol : de >= -tol;
    }
    for (std::size_t j = 0; j < m && ok; ++j) {
      const double de = 2.0 * s.h[j] * phi[j];
      ok = strict ? de > tol : de >= -tol;
    }
    count += ok;
  }
  return count;
}

/// Var(E(s') - E(s)) = 4 n m d (mu^2 + sigma^2) for iid normal couplings.
inline double gap_variance(std::size_t n, std::size_t m, double d, double mu, double sigma) {
  detail::require(d >= 0.0 && d <= 1.0, "distance must lie in [0, 1]");
  return 4.0 * static_cast<double>(n) * static_cast<double>(m) * d * (mu * mu + sigma * sigma);
}

struct Dispersion {
  double mean = 0.0;
  double variance = 0.0;
  double c_v = 0.0;
  bool c_v_defined = true;
};

/// Local field at a hidden spin of a center-loop structured instance,
///   L = 2(eps - 1) Bin(N, n1/K) + 2 Bin(N, p2) - eps N,
/// with K = ceil(n d) top rows, n1 ~ Bin(K, r) aligned top spins and
/// p2 = (n r - n1)/(n - K) clamped to [0, 1]. The variance uses the law of
/// total variance summed exactly over n1.
inline Dispersion local_field_dispersion(std::size_t n, std::size_t N, double eps, double r,
                                         double d) {
  detail::require(n >= 2 && N >= 1, "local_field_dispersion needs n >= 2, N >= 1");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  detail::require(r >= 0.0 && r <= 1.0, "r must lie in [0, 1]");
  detail::require(d > 0.0 && d < 1.0, "d must lie in (0, 1)");
  const double nd = static_cast<double>(n), Nd = static_cast<double>(N);
  const auto K = static_cast<std::size_t>(std::ceil(nd * d - 1e-9));
  detail::require(K >= 1 && K < n, "block size ceil(n d) must lie in [1, n)");
  const double Kd = static_cast<double>(K);

  double e1 = 0.0, e2 = 0.0, ev = 0.0;
  for (std::size_t a = 0; a <= K; ++a) {
    double lw;
    if (r == 0.0) lw = a == 0 ? 0.0 : special::kNegInf;
    else if (r == 1.0) lw = a == K ? 0.0 : special::kNegInf;
    else
      lw = special::log_binomial(Kd, static_cast<double>(a)) + static_cast<double>(a) * std::log(r) +
           (Kd - static_cast<double>(a)) * std::log1p(-r);
    const double w = std::exp(lw);
    if (w == 0.0) continue;
    const double p1 = static_cast<double>(a) / Kd;
    const double p2 = std::clamp((nd * r - static_cast<double>(a)) / (nd - Kd), 0.0, 1.0);
    const double mean = 2.0 * (eps - 1.0) * Nd * p1 + 2.0 * Nd * p2 - eps * Nd;
    const double var = 4.0 * (1.0 - eps) * (1.0 - eps) * Nd * p1 * (1.0 - p1) +
                       4.0 * Nd * p2 * (1.0 - p2);
    e1 += w * mean;
    e2 += w * mean * mean;
    ev += w * var;
  }
  Dispersion out;
  out.mean = Nd * eps * (2.0 * r - 1.0);
  out.variance = std::max(0.0, e2 - e1 * e1) + ev;
  if (out.mean == 0.0) {
    out.c_v_defined = false;
    out.c_v = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.c_v = std::sqrt(out.variance) / out.mean;
  }
  return out;
}

}  // namespace frusloop
