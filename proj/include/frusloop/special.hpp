#pragma once

// Special functions with a fixed evaluation scheme, so analytical predictors
// give the same bits on every platform.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "frusloop/error.hpp"

namespace frusloop::special {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(x) + exp(y)) without overflow.
inline double log_add(double x, double y) noexcept {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double hi = std::max(x, y), lo = std::min(x, y);
  return hi + std::log1p(std::exp(lo - hi));
}

inline double logsumexp(std::span<const double> xs) noexcept {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  if (std::isinf(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

inline double log_binomial(double n, double k) {
  frusloop::detail::require(k >= 0.0 && k <= n, "log_binomial needs 0 <= k <= n");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

namespace detail {

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_k 2^k x^(2k+1) / (2k+1)!!, all terms
// positive; used for 0 <= x < 2.
inline double erf_series(double x) noexcept {
  const double x2 = x * x;
  double term = x, sum = x;
  for (int k = 1; k < 500; ++k) {
    term *= 2.0 * x2 / (2.0 * k + 1.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
}

// Continued fraction K(x) = x + (1/2)/(x + 1/(x + (3/2)/(x + ...))), so that
// erfc(x) = exp(-x^2) / (sqrt(pi) K(x)). Modified Lentz, x >= 2.
inline double erfc_cf(double x) noexcept {
  constexpr double tiny = 1e-300;
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

}  // namespace detail

inline double erfc(double x) noexcept {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < 2.0) return 1.0 - detail::erf_series(x);
  if (x > 27.3) return 0.0;
  return std::exp(-x * x) / (std::sqrt(std::numbers::pi) * detail::erfc_cf(x));
}

/// log(erfc(x)); finite for every finite x.
inline double log_erfc(double x) noexcept {
  if (std::isnan(x)) return x;
  if (x < 2.0) return std::log(erfc(x));
  return -x * x - 0.5 * std::log(std::numbers::pi) - std::log(detail::erfc_cf(x));
}

/// log I_k(z) for integer k >= 0, z > 0, from the ascending series
/// sum_s (z/2)^(2s+k) / (s! (s+k)!) accumulated in log space.
inline double log_bessel_i(int k, double z) {
  frusloop::detail::require(k >= 0, "Bessel order must be non-negative");
  frusloop::detail::require(z >= 0.0, "Bessel argument must be non-negative");
  if (z == 0.0) return k == 0 ? 0.0 : kNegInf;
  const double lz = std::log(0.5 * z);
  double acc = kNegInf;
  double peak = kNegInf;
  for (int s = 0; s < 100000; ++s) {
    const double t = (2.0 * s + k) * lz - std::lgamma(s + 1.0) - std::lgamma(s + k + 1.0);
    acc = log_add(acc, t);
    peak = std::max(peak, t);
    // terms are unimodal in s; stop once past the peak and negligible
    if (t < peak && t < acc + std::log(1e-17)) break;
  }
  return acc;
}

}  // namespace frusloop::special
