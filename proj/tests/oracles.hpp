#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library code it is meant to check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "frusloop/core.hpp"
#include "frusloop/convert.hpp"

namespace oracle {

using frusloop::Matrix;
using frusloop::RbmInstance;
using frusloop::Spin;
using frusloop::SpinState;

// -sum W v h - sum a v - sum b h, written out term by term.
inline double energy(const RbmInstance& inst, const SpinState& s) {
  double e = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i)
    for (std::size_t j = 0; j < inst.m(); ++j) e -= inst.W(i, j) * s.v[i] * s.h[j];
  for (std::size_t i = 0; i < inst.n(); ++i) e -= inst.a[i] * s.v[i];
  for (std::size_t j = 0; j < inst.m(); ++j) e -= inst.b[j] * s.h[j];
  return e;
}

inline SpinState state_from_code(std::uint64_t code, std::size_t n, std::size_t m) {
  SpinState s{std::vector<Spin>(n), std::vector<Spin>(m)};
  for (std::size_t i = 0; i < n; ++i) s.v[i] = (code >> i) & 1 ? 1 : -1;
  for (std::size_t j = 0; j < m; ++j) s.h[j] = (code >> (n + j)) & 1 ? 1 : -1;
  return s;
}

// Minimum over all 2^(n+m) states.
inline double min_energy(const RbmInstance& inst) {
  const std::size_t n = inst.n(), m = inst.m();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << (n + m)); ++c)
    best = std::min(best, oracle::energy(inst, state_from_code(c, n, m)));
  return best;
}

inline bool lit_true(int lit, std::uint64_t x) {
  const bool val = (x >> (std::abs(lit) - 1)) & 1;
  return lit > 0 ? val : !val;
}

// Best satisfied weight over all assignments, by clause evaluation.
inline double max_satisfied(const frusloop::Max2SatInstance& sat) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << sat.num_vars); ++x) {
    double w = sat.satisfied_offset;
    for (const auto& c : sat.clauses)
      if (lit_true(c.lit1, x) || (c.lit2 != 0 && lit_true(c.lit2, x))) w += c.weight;
    best = std::max(best, w);
  }
  return best;
}

inline double satisfied(const frusloop::Max2SatInstance& sat, std::uint64_t x) {
  double w = sat.satisfied_offset;
  for (const auto& c : sat.clauses)
    if (lit_true(c.lit1, x) || (c.lit2 != 0 && lit_true(c.lit2, x))) w += c.weight;
  return w;
}

// Gauged frustration by definition: negative mass over total mass of
// W_ij s_i s_j in the frame of the given ground state.
inline double frustration(const Matrix& W, const SpinState& g) {
  double neg = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < W.rows(); ++i)
    for (std::size_t j = 0; j < W.cols(); ++j) {
      const double w = W(i, j) * g.v[i] * g.h[j];
      if (w < 0) neg -= w;
      tot += std::abs(w);
    }
  return neg / tot;
}

inline SpinState random_state(std::mt19937_64& g, std::size_t n, std::size_t m) {
  std::bernoulli_distribution coin(0.5);
  SpinState s{std::vector<Spin>(n), std::vector<Spin>(m)};
  for (auto& x : s.v) x = coin(g) ? 1 : -1;
  for (auto& x : s.h) x = coin(g) ? 1 : -1;
  return s;
}

inline RbmInstance random_instance(std::mt19937_64& g, std::size_t n, std::size_t m, bool biased) {
  std::normal_distribution<double> z(0.0, 1.0);
  RbmInstance inst{Matrix(n, m)};
  for (auto& w : inst.W.data()) w = z(g);
  if (biased) {
    for (auto& x : inst.a) x = z(g);
    for (auto& x : inst.b) x = z(g);
  }
  return inst;
}

}  // namespace oracle
