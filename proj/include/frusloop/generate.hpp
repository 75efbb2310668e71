#pragma once

// Planted instances built from frustrated loop atoms: random placement,
// block-structured placement, loop decomposition and uniform-weight
// MAX-2-SAT.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frusloop/convert.hpp"
#include "frusloop/core.hpp"
#include "frusloop/error.hpp"
#include "frusloop/rng.hpp"

namespace frusloop {

/// Length-4 frustrated cycle: -alpha at (i1, j1), +1 at (i1, j2), (i2, j1)
/// and (i2, j2).
struct LoopAtom {
  std::size_t i1 = 0, i2 = 0;
  std::size_t j1 = 0, j2 = 0;
  double alpha = 1.0;

  bool operator==(const LoopAtom&) const = default;
};

inline void add_atom(Matrix& W, const LoopAtom& a) {
  W(a.i1, a.j1) -= a.alpha;
  W(a.i1, a.j2) += 1.0;
  W(a.i2, a.j1) += 1.0;
  W(a.i2, a.j2) += 1.0;
}

inline double alpha_from_f(double f) {
  detail::require(f >= 0.0 && f < 0.25, "frustration index must lie in [0, 0.25)");
  return 3.0 * f / (1.0 - f);
}

inline double f_from_alpha(double alpha) {
  detail::require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  return alpha / (3.0 + alpha);
}

/// N = round(rho n), ties to even.
inline std::size_t loop_count(double rho, std::size_t n) {
  detail::require(rho >= 0.0 && std::isfinite(rho), "loop density must be finite and >= 0");
  return static_cast<std::size_t>(std::nearbyint(rho * static_cast<double>(n)));
}

enum class GenMode { random, structured, uniform_sat };

inline std::string to_string(GenMode m) {
  switch (m) {
    case GenMode::random: return "random";
    case GenMode::structured: return "structured";
    case GenMode::uniform_sat: return "uniform-sat";
  }
  return "?";
}

inline GenMode parse_mode(const std::string& s) {
  if (s == "random") return GenMode::random;
  if (s == "structured") return GenMode::structured;
  if (s == "uniform-sat") return GenMode::uniform_sat;
  throw InvalidParameter("unknown generator mode '" + s + "'");
}

struct LoopMix {
  std::size_t N1 = 0;  // left loops
  std::size_t N2 = 0;  // upper loops
  std::size_t N3 = 0;  // center loops

  std::size_t total() const noexcept { return N1 + N2 + N3; }
  bool operator==(const LoopMix&) const = default;
};

struct GenParams {
  std::size_t n = 0;
  std::size_t m = 0;
  double f = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  GenMode mode = GenMode::random;
  double d = 0.5;
  std::optional<LoopMix> loop_mix;
  /// Overrides round(rho n) when set.
  std::optional<std::size_t> loops;
  bool allow_constructive = true;
  /// Drops every sign constraint; the result is no longer certified.
  bool allow_destructive = false;
  /// Relative Gaussian jitter of the edge magnitudes.
  double jitter = 0.0;
  /// State to plant; uniform random when absent.
  std::optional<SpinState> planted;
};

inline std::size_t resolved_loops(const GenParams& p) {
  return p.loops ? *p.loops : loop_count(p.rho, p.n);
}

/// Top-row and left-column block sizes: ceil((n-1) d), ceil((m-1) d).
inline std::pair<std::size_t, std::size_t> block_sizes(std::size_t n, std::size_t m, double d) {
  detail::require(d > 0.0 && d <= 1.0, "block fraction d must lie in (0, 1]");
  detail::require_dims(n >= 2 && m >= 2, "structured instances need n, m >= 2");
  auto ceil_eps = [d](std::size_t k) {
    const double x = static_cast<double>(k - 1) * d;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(x - 1e-9)));
  };
  return {ceil_eps(n), ceil_eps(m)};
}

/// N1 = N2 = floor(N/4), N3 the rest; loop types that cannot fit in the
/// blocks (left loops need m1 >= 2, upper loops n1 >= 2) go to N3.
inline LoopMix default_loop_mix(std::size_t N, std::size_t n1, std::size_t m1) {
  LoopMix mix{N / 4, N / 4, 0};
  if (m1 < 2) mix.N1 = 0;
  if (n1 < 2) mix.N2 = 0;
  mix.N3 = N - mix.N1 - mix.N2;
  return mix;
}

namespace detail {

class Placer {
 public:
  Placer(Matrix& W, const GenParams& p, Rng& rng)
      : W_(W), p_(p), rng_(rng), budget_(100 * W.rows() * W.cols()) {}

  // Draws are i1, i2, j1, j2 from the given ranges (one bounded draw each,
  // the second index of a shared range skips the first). Returns the atom
  // that was added.
  LoopAtom place(std::array<std::size_t, 2> r1, std::array<std::size_t, 2> r2,
                 std::array<std::size_t, 2> c1, std::array<std::size_t, 2> c2, double alpha) {
    for (std::size_t attempt = 0; attempt < budget_; ++attempt) {
      LoopAtom a;
      a.alpha = alpha;
      a.i1 = draw(r1, std::nullopt);
      a.i2 = draw(r2, r1 == r2 ? std::optional(a.i1) : std::nullopt);
      a.j1 = draw(c1, std::nullopt);
      a.j2 = draw(c2, c1 == c2 ? std::optional(a.j1) : std::nullopt);
      if (!admissible(a)) continue;
      if (p_.jitter > 0.0) jitter_add(a);
      else add_atom(W_, a);
      return a;
    }
    throw SaturationError("could not place loop " + std::to_string(placed_ + 1) + " within " +
                          std::to_string(budget_) + " attempts");
  }

  void count() { ++placed_; }

 private:
  std::size_t draw(std::array<std::size_t, 2> range, std::optional<std::size_t> skip) {
    const std::size_t width = range[1] - range[0];
    if (!skip) return range[0] + rng_.below(width);
    std::size_t k = range[0] + rng_.below(width - 1);
    if (k >= *skip) ++k;
    return k;
  }

  bool admissible(const LoopAtom& a) const {
    if (p_.allow_destructive) return true;
    const double neg = W_(a.i1, a.j1);
    const std::array<double, 3> pos{W_(a.i1, a.j2), W_(a.i2, a.j1), W_(a.i2, a.j2)};
    if (!p_.allow_constructive)
      return neg == 0.0 && std::all_of(pos.begin(), pos.end(), [](double x) { return x == 0.0; });
    return neg <= 0.0 && std::all_of(pos.begin(), pos.end(), [](double x) { return x >= 0.0; });
  }

  // Positive edges max(0, 1 + s z); negative magnitude alpha (1 + s z)
  // clamped to [0, smallest positive edge] so the atom keeps a non-negative
  // sum on every switching subset.
  void jitter_add(const LoopAtom& a) {
    const double s = p_.jitter;
    std::array<double, 3> pos{};
    for (auto& x : pos) x = std::max(0.0, 1.0 + s * rng_.normal());
    const double cap = *std::min_element(pos.begin(), pos.end());
    const double neg = std::clamp(a.alpha * (1.0 + s * rng_.normal()), 0.0, cap);
    W_(a.i1, a.j1) -= neg;
    W_(a.i1, a.j2) += pos[0];
    W_(a.i2, a.j1) += pos[1];
    W_(a.i2, a.j2) += pos[2];
  }

  Matrix& W_;
  const GenParams& p_;
  Rng& rng_;
  std::size_t budget_;
  std::size_t placed_ = 0;
};

inline void check_common(const GenParams& p) {
  require_dims(p.n >= 1 && p.m >= 1, "instance needs n >= 1 and m >= 1");
  require(p.jitter >= 0.0 && std::isfinite(p.jitter), "jitter must be finite and >= 0");
  if (p.planted) {
    require_dims(p.planted->n() == p.n && p.planted->m() == p.m, "planted state size differs");
    require(is_valid_state(*p.planted), "planted state has entries other than +-1");
  }
}

// Moves the gauged matrix onto the planted state and fills certificates.
inline RbmInstance finish(Matrix gauged, const GenParams& p, Rng& rng, GenMeta meta) {
  SpinState s0;
  if (p.planted) {
    s0 = *p.planted;
  } else {
    s0.v.resize(p.n);
    s0.h.resize(p.m);
    for (auto& x : s0.v) x = static_cast<Spin>(rng.sign());
    for (auto& x : s0.h) x = static_cast<Spin>(rng.sign());
  }
  RbmInstance g(std::move(gauged));
  g.planted = SpinState::all_up(p.n, p.m);
  RbmInstance inst = plant(g, s0);
  meta.f_certified = p.jitter == 0.0 && !p.allow_destructive;
  inst.meta = std::move(meta);
  if (!p.allow_destructive) inst.ground_energy = energy(inst, *inst.planted);
  return inst;
}

inline GenMeta base_meta(const GenParams& p, const char* algorithm, double alpha, std::size_t N) {
  GenMeta g;
  g.algorithm = algorithm;
  g.alpha = alpha;
  g.f = f_from_alpha(alpha);
  g.rho = p.rho;
  g.d = p.d;
  g.N = N;
  g.seed = p.seed;
  g.allow_constructive = p.allow_constructive;
  g.allow_destructive = p.allow_destructive;
  g.jitter = p.jitter;
  return g;
}

}  // namespace detail

/// Random frustrated-loop instance: N atoms at uniformly random positions,
/// each accepted only if its negative cell is currently <= 0 and its three
/// positive cells >= 0 (all four == 0 without constructive stacking), then
/// planted onto a random state. Certified ground energy -N(3 - alpha).
inline RbmInstance random_loop_instance(const GenParams& p) {
  detail::check_common(p);
  const double alpha = alpha_from_f(p.f);
  const std::size_t N = resolved_loops(p);
  if (N > 0) detail::require_dims(p.n >= 2 && p.m >= 2, "loop atoms need n, m >= 2");
  Rng rng(p.seed);
  Matrix W(p.n, p.m);
  detail::Placer placer(W, p, rng);
  const std::array<std::size_t, 2> rows{0, p.n}, cols{0, p.m};
  for (std::size_t k = 0; k < N; ++k) {
    placer.place(rows, rows, cols, cols, alpha);
    placer.count();
  }
  GenMeta meta = detail::base_meta(p, "random-loop", alpha, N);
  return detail::finish(std::move(W), p, rng, std::move(meta));
}

/// Structured instance on the 2x2 block partition (top rows [0, n1), left
/// columns [0, m1)). Left loops: i1 top, i2 bottom, j1, j2 left. Upper
/// loops: i1, i2 top, j1 left, j2 right. Center loops: i1 top, i2 bottom,
/// j1 left, j2 right. The negative edge always lands in the top-left block.
inline RbmInstance structured_loop_instance(const GenParams& p) {
  detail::check_common(p);
  const double alpha = alpha_from_f(p.f);
  const auto [n1, m1] = block_sizes(p.n, p.m, p.d);
  const std::size_t N = resolved_loops(p);
  // an explicit mix alone (no rho, no loop count) fixes N
  const LoopMix mix = p.loop_mix ? *p.loop_mix : default_loop_mix(N, n1, m1);
  if (!p.loop_mix || p.loops || p.rho > 0.0)
    detail::require(mix.total() == N, "loop mix must sum to the loop count");
  detail::require(mix.N1 == 0 || m1 >= 2, "left loops need at least two left columns");
  detail::require(mix.N2 == 0 || n1 >= 2, "upper loops need at least two top rows");

  Rng rng(p.seed);
  Matrix W(p.n, p.m);
  detail::Placer placer(W, p, rng);
  const std::array<std::size_t, 2> top{0, n1}, bottom{n1, p.n}, left{0, m1}, right{m1, p.m};
  for (std::size_t k = 0; k < mix.N1; ++k, placer.count()) placer.place(top, bottom, left, left, alpha);
  for (std::size_t k = 0; k < mix.N2; ++k, placer.count()) placer.place(top, top, left, right, alpha);
  for (std::size_t k = 0; k < mix.N3; ++k, placer.count()) placer.place(top, bottom, left, right, alpha);

  GenMeta meta = detail::base_meta(p, "structured-loop", alpha, mix.total());
  meta.N1 = mix.N1;
  meta.N2 = mix.N2;
  meta.N3 = mix.N3;
  return detail::finish(std::move(W), p, rng, std::move(meta));
}

/// Non-intersecting random loops with alpha = 1 (uniform |W| = 1).
inline RbmInstance uniform_sat_rbm(const GenParams& p) {
  GenParams q = p;
  q.allow_constructive = false;
  q.allow_destructive = false;
  q.jitter = 0.0;
  detail::check_common(q);
  const std::size_t N = resolved_loops(q);
  if (N > 0) detail::require_dims(q.n >= 2 && q.m >= 2, "loop atoms need n, m >= 2");
  Rng rng(q.seed);
  Matrix W(q.n, q.m);
  detail::Placer placer(W, q, rng);
  const std::array<std::size_t, 2> rows{0, q.n}, cols{0, q.m};
  for (std::size_t k = 0; k < N; ++k, placer.count()) placer.place(rows, rows, cols, cols, 1.0);
  GenMeta meta = detail::base_meta(q, "uniform-sat", 1.0, N);
  meta.allow_constructive = false;
  return detail::finish(std::move(W), q, rng, std::move(meta));
}

/// Uniform-weight MAX-2-SAT: 8N clauses of weight 2; the planted assignment
/// violates exactly one clause per loop.
inline Max2SatInstance uniform_sat_instance(const GenParams& p) {
  return rbm_to_max2sat(uniform_sat_rbm(p));
}

/// Dispatches on p.mode.
inline RbmInstance generate(const GenParams& p) {
  switch (p.mode) {
    case GenMode::random: return random_loop_instance(p);
    case GenMode::structured: return structured_loop_instance(p);
    case GenMode::uniform_sat: return uniform_sat_rbm(p);
  }
  throw InvalidParameter("unknown generator mode");
}

/// Sums of the gauged weights over the blocks B1 (top-left), B2 (top-right),
/// B3 (bottom-left), B4 (bottom-right).
inline std::array<double, 4> block_sums(const RbmInstance& inst, std::size_t n1, std::size_t m1) {
  const Matrix g = gauged_weights(inst);
  std::array<double, 4> s{};
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) s[(i < n1 ? 0 : 2) + (j < m1 ? 0 : 1)] += g(i, j);
  return s;
}

/// The planted state with the top rows and right columns flipped; its
/// switching subset from the planted state is B1 u B4.
inline SpinState metastable_state(const RbmInstance& inst, std::size_t n1, std::size_t m1) {
  detail::require(inst.planted.has_value(), "instance has no planted state");
  SpinState s = *inst.planted;
  for (std::size_t i = 0; i < n1; ++i) s.v[i] = static_cast<Spin>(-s.v[i]);
  for (std::size_t j = m1; j < s.m(); ++j) s.h[j] = static_cast<Spin>(-s.h[j]);
  return s;
}

/// Splits a frustrated cycle r0 c0 r1 c1 ... r_{l-1} c_{l-1} (edges
/// e_{2t} = (r_t, c_t), e_{2t+1} = (r_{t+1}, c_t), indices mod l) whose
/// negative edge is e_neg into l-1 atoms. The first atom carries `alpha`, the
/// others have alpha = 1 and cancel their negative edge against a positive
/// edge of the previous atom.
inline std::vector<LoopAtom> decompose_loop(const std::vector<std::size_t>& rows,
                                            const std::vector<std::size_t>& cols,
                                            std::size_t neg_edge, double alpha = 1.0) {
  const std::size_t l = rows.size();
  detail::require(l >= 2 && cols.size() == l, "cycle needs l >= 2 rows and as many columns");
  detail::require(neg_edge < 2 * l, "negative edge index out of range");
  auto distinct = [](std::vector<std::size_t> x) {
    std::sort(x.begin(), x.end());
    return std::adjacent_find(x.begin(), x.end()) == x.end();
  };
  detail::require(distinct(rows) && distinct(cols), "cycle repeats a vertex");

  // rotate or reverse so that the negative edge is (r0, c_{l-1})
  std::vector<std::size_t> r(l), c(l);
  const std::size_t t = neg_edge / 2;
  for (std::size_t k = 0; k < l; ++k) {
    if (neg_edge % 2 == 1) {
      r[k] = rows[(t + 1 + k) % l];
      c[k] = cols[(t + 1 + k) % l];
    } else {
      r[k] = rows[(t + 2 * l - k) % l];
      c[k] = cols[(t + 2 * l - 1 - k) % l];
    }
  }
  std::vector<LoopAtom> atoms;
  for (std::size_t k = l - 1; k >= 1; --k)
    atoms.push_back({r[0], r[k], c[k], c[k - 1], k == l - 1 ? alpha : 1.0});
  return atoms;
}

}  // namespace frusloop
