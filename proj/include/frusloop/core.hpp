#pragma once

// Bipartite Ising ("RBM") instances: energy, vertex switching, gauge fixing,
// the switching-subset pseudometric, frustration index, local-minimum test
// and the exhaustive ground-state oracle.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frusloop/error.hpp"
#include "frusloop/matrix.hpp"

namespace frusloop {

using Spin = std::int8_t;

/// Absolute tolerance for energy comparisons on generated instances. All
/// generated weights are integer combinations of 1 and alpha.
inline constexpr double kEnergyTolerance = 1e-9;

struct SpinState {
  std::vector<Spin> v;
  std::vector<Spin> h;

  static SpinState all_up(std::size_t n, std::size_t m) {
    return {std::vector<Spin>(n, 1), std::vector<Spin>(m, 1)};
  }

  std::size_t n() const noexcept { return v.size(); }
  std::size_t m() const noexcept { return h.size(); }

  bool operator==(const SpinState&) const = default;
};

inline bool is_valid_state(const SpinState& s) {
  auto ok = [](Spin x) { return x == 1 || x == -1; };
  return std::all_of(s.v.begin(), s.v.end(), ok) && std::all_of(s.h.begin(), s.h.end(), ok);
}

/// Elementwise product; maps a state of W to the matching state of the
/// instance gauged by `g`.
inline SpinState state_product(const SpinState& s, const SpinState& g) {
  detail::require_dims(s.n() == g.n() && s.m() == g.m(), "spin state sizes differ");
  SpinState r = s;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = static_cast<Spin>(r.v[i] * g.v[i]);
  for (std::size_t j = 0; j < r.h.size(); ++j) r.h[j] = static_cast<Spin>(r.h[j] * g.h[j]);
  return r;
}

inline SpinState global_flip(SpinState s) {
  for (auto& x : s.v) x = static_cast<Spin>(-x);
  for (auto& x : s.h) x = static_cast<Spin>(-x);
  return s;
}

/// Generator provenance carried with an instance.
struct GenMeta {
  std::string algorithm;  // "random-loop", "structured-loop", "uniform-sat", ...
  double f = 0.0;
  double alpha = 0.0;
  double rho = 0.0;
  double d = 0.0;
  std::size_t N = 0;
  std::size_t N1 = 0;
  std::size_t N2 = 0;
  std::size_t N3 = 0;
  std::uint64_t seed = 0;
  bool allow_constructive = true;
  bool allow_destructive = false;
  double jitter = 0.0;
  /// True when frustration_index equals f by construction.
  bool f_certified = false;
};

struct RbmInstance {
  Matrix W;
  std::vector<double> a;
  std::vector<double> b;
  std::optional<SpinState> planted;
  std::optional<double> ground_energy;
  GenMeta meta;

  RbmInstance() = default;
  explicit RbmInstance(Matrix w)
      : W(std::move(w)), a(W.rows(), 0.0), b(W.cols(), 0.0) {}
  RbmInstance(Matrix w, std::vector<double> av, std::vector<double> bv)
      : W(std::move(w)), a(std::move(av)), b(std::move(bv)) {}

  std::size_t n() const noexcept { return W.rows(); }
  std::size_t m() const noexcept { return W.cols(); }

  bool is_biased() const noexcept {
    auto nz = [](double x) { return x != 0.0; };
    return std::any_of(a.begin(), a.end(), nz) || std::any_of(b.begin(), b.end(), nz);
  }
};

inline void validate(const RbmInstance& inst) {
  detail::require_dims(inst.n() >= 1 && inst.m() >= 1, "instance needs n >= 1 and m >= 1");
  detail::require_dims(inst.a.size() == inst.n(), "visible bias length differs from n");
  detail::require_dims(inst.b.size() == inst.m(), "hidden bias length differs from m");
  if (inst.planted) {
    detail::require_dims(inst.planted->n() == inst.n() && inst.planted->m() == inst.m(),
                         "planted state size differs from instance");
    detail::require(is_valid_state(*inst.planted), "planted state has entries other than +-1");
  }
}

namespace detail {

inline void check_state(const RbmInstance& inst, const SpinState& s) {
  require_dims(s.n() == inst.n() && s.m() == inst.m(), "spin state size differs from instance");
}

inline void check_pair(const SpinState& s, const SpinState& s2) {
  require_dims(s.n() == s2.n() && s.m() == s2.m(), "spin states have different sizes");
}

}  // namespace detail

/// E(v, h) = -(sum_ij W_ij v_i h_j + sum_i a_i v_i + sum_j b_j h_j).
inline double energy(const RbmInstance& inst, const SpinState& s) {
  detail::check_state(inst, s);
  double acc = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    double row = 0.0;
    const auto w = inst.W.row(i);
    for (std::size_t j = 0; j < inst.m(); ++j) row += w[j] * s.h[j];
    acc += s.v[i] * (row + inst.a[i]);
  }
  for (std::size_t j = 0; j < inst.m(); ++j) acc += inst.b[j] * s.h[j];
  return -acc;
}

/// Matrix positions (0-based) whose bond sign changes between two states.
struct SwitchingSubset {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::pair<std::size_t, std::size_t>> members;

  std::size_t size() const noexcept { return members.size(); }
  bool empty() const noexcept { return members.empty(); }
};

/// Counts (n', m') of differing visible and hidden spins.
inline std::pair<std::size_t, std::size_t> flip_counts(const SpinState& s, const SpinState& s2) {
  detail::check_pair(s, s2);
  std::size_t np = 0, mp = 0;
  for (std::size_t i = 0; i < s.n(); ++i) np += s.v[i] != s2.v[i];
  for (std::size_t j = 0; j < s.m(); ++j) mp += s.h[j] != s2.h[j];
  return {np, mp};
}

/// |F| = n'm + nm' - 2n'm'.
inline std::size_t switching_size(const SpinState& s, const SpinState& s2) {
  const auto [np, mp] = flip_counts(s, s2);
  return np * s.m() + s.n() * mp - 2 * np * mp;
}

/// F(s, s2) = (I x J^c) u (I^c x J), in row-major order.
inline SwitchingSubset switching_subset(const SpinState& s, const SpinState& s2) {
  detail::check_pair(s, s2);
  SwitchingSubset f{s.n(), s.m(), {}};
  f.members.reserve(switching_size(s, s2));
  for (std::size_t i = 0; i < s.n(); ++i) {
    const bool vi = s.v[i] != s2.v[i];
    for (std::size_t j = 0; j < s.m(); ++j) {
      const bool hj = s.h[j] != s2.h[j];
      if (vi != hj) f.members.emplace_back(i, j);
    }
  }
  return f;
}

/// E(s2) - E(s) = 2 sum_F W_ij v_i h_j, plus ghost-spin bond terms for biases.
inline double energy_gap(const RbmInstance& inst, const SpinState& s, const SpinState& s2) {
  detail::check_state(inst, s);
  detail::check_pair(s, s2);
  double acc = 0.0;
  for (const auto& [i, j] : switching_subset(s, s2).members) acc += inst.W(i, j) * s.v[i] * s.h[j];
  for (std::size_t i = 0; i < inst.n(); ++i)
    if (s.v[i] != s2.v[i]) acc += inst.a[i] * s.v[i];
  for (std::size_t j = 0; j < inst.m(); ++j)
    if (s.h[j] != s2.h[j]) acc += inst.b[j] * s.h[j];
  return 2.0 * acc;
}

/// G_{s,s2}(W): negates W on the switching subset, so that
/// W_ij v2_i h2_j == W'_ij v_i h_j everywhere.
inline Matrix vertex_switch(const Matrix& W, const SpinState& s, const SpinState& s2) {
  detail::check_pair(s, s2);
  detail::require_dims(W.rows() == s.n() && W.cols() == s.m(), "matrix size differs from states");
  Matrix out = W;
  for (std::size_t i = 0; i < W.rows(); ++i) {
    const int pi = s.v[i] * s2.v[i];
    auto row = out.row(i);
    for (std::size_t j = 0; j < W.cols(); ++j) row[j] *= pi * s.h[j] * s2.h[j];
  }
  return out;
}

/// Applies G_{s0,+1}: the returned instance assigns to +1 the energy s0 had.
/// The transformation is an involution, so the same call plants a gauged
/// instance's ground state onto s0 (see plant()).
inline RbmInstance gauge_fix(const RbmInstance& inst, const SpinState& s0) {
  validate(inst);
  detail::check_state(inst, s0);
  RbmInstance out = inst;
  out.W = vertex_switch(inst.W, s0, SpinState::all_up(inst.n(), inst.m()));
  for (std::size_t i = 0; i < inst.n(); ++i) out.a[i] = inst.a[i] * s0.v[i];
  for (std::size_t j = 0; j < inst.m(); ++j) out.b[j] = inst.b[j] * s0.h[j];
  if (inst.planted) out.planted = state_product(*inst.planted, s0);
  return out;
}

inline RbmInstance plant(const RbmInstance& gauged, const SpinState& s0) {
  return gauge_fix(gauged, s0);
}

/// Weight matrix in the frame where the planted state (if any) is all +1.
inline Matrix gauged_weights(const RbmInstance& inst) {
  if (!inst.planted) return inst.W;
  return vertex_switch(inst.W, *inst.planted, SpinState::all_up(inst.n(), inst.m()));
}

/// d(s, s2) = |F(s, s2)| / (nm); a pseudometric identifying global flips.
inline double distance(const SpinState& s, const SpinState& s2) {
  const std::size_t f = switching_size(s, s2);
  return static_cast<double>(f) / static_cast<double>(s.n() * s.m());
}

/// f = (-sum_{W<0} W) / sum |W| of the gauged weight matrix. Instances with a
/// planted state are gauged by it first; otherwise +1 is taken as the ground
/// state. Biased instances are rejected.
inline double frustration_index(const RbmInstance& inst) {
  validate(inst);
  if (inst.is_biased())
    throw InvalidParameter("frustration index is only defined for unbiased instances");
  const Matrix g = gauged_weights(inst);
  double neg = 0.0, total = 0.0;
  for (double w : g.data()) {
    if (w < 0.0) neg -= w;
    total += std::abs(w);
  }
  if (total == 0.0) throw InvalidParameter("frustration index undefined for an all-zero matrix");
  return neg / total;
}

/// Local fields theta = W h + a and phi = W^T v + b.
inline std::vector<double> visible_fields(const RbmInstance& inst, const SpinState& s) {
  std::vector<double> theta(inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) {
    double acc = inst.a[i];
    const auto w = inst.W.row(i);
    for (std::size_t j = 0; j < inst.m(); ++j) acc += w[j] * s.h[j];
    theta[i] = acc;
  }
  return theta;
}

inline std::vector<double> hidden_fields(const RbmInstance& inst, const SpinState& s) {
  std::vector<double> phi(inst.b.begin(), inst.b.end());
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto w = inst.W.row(i);
    for (std::size_t j = 0; j < inst.m(); ++j) phi[j] += w[j] * s.v[i];
  }
  return phi;
}

/// True iff no single spin flip lowers the energy (ties allowed, within
/// `tol`). Flipping v_i changes the energy by 2 v_i theta_i.
inline bool is_local_minimum(const RbmInstance& inst, const SpinState& s,
                             double tol = kEnergyTolerance) {
  detail::check_state(inst, s);
  const auto theta = visible_fields(inst, s);
  for (std::size_t i = 0; i < inst.n(); ++i)
    if (2.0 * s.v[i] * theta[i] < -tol) return false;
  const auto phi = hidden_fields(inst, s);
  for (std::size_t j = 0; j < inst.m(); ++j)
    if (2.0 * s.h[j] * phi[j] < -tol) return false;
  return true;
}

struct GroundState {
  SpinState state;
  double energy = 0.0;
};

inline constexpr std::size_t kMaxBruteForceVisible = 24;

/// Exact minimum by enumerating all 2^n visible configurations (Gray-code
/// order) and choosing each hidden spin optimally: h_j = sign(phi_j), with
/// sign(0) = +1. The reported energy is recomputed from scratch.
inline GroundState brute_force_ground_state(const RbmInstance& inst) {
  validate(inst);
  const std::size_t n = inst.n(), m = inst.m();
  if (n > kMaxBruteForceVisible)
    throw InvalidParameter("brute force limited to n <= " + std::to_string(kMaxBruteForceVisible));

  std::vector<Spin> v(n, -1);
  std::vector<double> phi(inst.b.begin(), inst.b.end());
  double lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin -= inst.a[i];
    const auto w = inst.W.row(i);
    for (std::size_t j = 0; j < m; ++j) phi[j] -= w[j];
  }

  auto conditional_energy = [&] {
    double acc = lin;
    for (double p : phi) acc += std::abs(p);
    return -acc;
  };

  double best = conditional_energy();
  std::vector<Spin> best_v = v;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto i = static_cast<std::size_t>(std::countr_zero(k));
    v[i] = static_cast<Spin>(-v[i]);
    const double dv = 2.0 * v[i];
    lin += dv * inst.a[i];
    const auto w = inst.W.row(i);
    for (std::size_t j = 0; j < m; ++j) phi[j] += dv * w[j];
    const double e = conditional_energy();
    if (e < best) {
      best = e;
      best_v = v;
    }
  }

  GroundState gs;
  gs.state.v = best_v;
  gs.state.h.resize(m);
  const auto phi_best = hidden_fields(inst, SpinState{best_v, std::vector<Spin>(m, 1)});
  for (std::size_t j = 0; j < m; ++j) gs.state.h[j] = phi_best[j] >= 0.0 ? 1 : -1;
  gs.energy = energy(inst, gs.state);
  return gs;
}

}  // namespace frusloop
