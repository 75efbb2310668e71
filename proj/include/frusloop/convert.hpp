#pragma once

// Problem forms and the conversions between them:
//   MAX-2-SAT -> QUBO -> bipartite QUBO -> +-1 spins (RbmInstance)
//   RbmInstance -> MAX-2-SAT (two clauses per bond, ghost spins for biases)

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frusloop/core.hpp"
#include "frusloop/error.hpp"
#include "frusloop/matrix.hpp"

namespace frusloop {

/// A clause with one or two literals. Literals are 1-based signed variable
/// indices, negative meaning negated; lit2 == 0 marks a unit clause.
struct WeightedClause {
  int lit1 = 0;
  int lit2 = 0;
  double weight = 0.0;

  bool is_unit() const noexcept { return lit2 == 0; }
  bool operator==(const WeightedClause&) const = default;
};

struct Max2SatInstance {
  std::size_t num_vars = 0;
  std::vector<WeightedClause> clauses;
  /// Weight of clauses removed during simplification because they are
  /// satisfied by every assignment.
  double satisfied_offset = 0.0;
  /// Number of variables that came from visible spins (variables
  /// 1..n_visible); 0 when the instance has no bipartite origin.
  std::size_t n_visible = 0;
  /// Planted assignment, +1 = true, indexed by variable - 1.
  std::optional<std::vector<Spin>> planted;
  /// Free-form metadata carried as wcnf comment lines.
  std::vector<std::pair<std::string, std::string>> comments;
};

inline void validate(const Max2SatInstance& sat) {
  const auto nv = static_cast<long long>(sat.num_vars);
  for (const auto& c : sat.clauses) {
    detail::require(c.weight >= 0.0 && std::isfinite(c.weight), "clause weight must be finite and >= 0");
    detail::require(c.lit1 != 0, "clause has no first literal");
    detail::require(std::llabs(c.lit1) <= nv && std::llabs(c.lit2) <= nv,
                    "clause literal out of range");
    detail::require(c.is_unit() || std::abs(c.lit1) != std::abs(c.lit2),
                    "clause repeats a variable");
  }
  if (sat.planted) detail::require_dims(sat.planted->size() == sat.num_vars, "planted length differs");
}

inline bool literal_true(int lit, const std::vector<bool>& x) {
  const bool val = x[static_cast<std::size_t>(std::abs(lit) - 1)];
  return lit > 0 ? val : !val;
}

inline bool clause_satisfied(const WeightedClause& c, const std::vector<bool>& x) {
  return literal_true(c.lit1, x) || (!c.is_unit() && literal_true(c.lit2, x));
}

inline double total_weight(const Max2SatInstance& sat) {
  double w = sat.satisfied_offset;
  for (const auto& c : sat.clauses) w += c.weight;
  return w;
}

/// Satisfied clause weight (including the simplification offset).
inline double satisfied_weight(const Max2SatInstance& sat, const std::vector<bool>& x) {
  detail::require_dims(x.size() == sat.num_vars, "assignment length differs from num_vars");
  double w = sat.satisfied_offset;
  for (const auto& c : sat.clauses)
    if (clause_satisfied(c, x)) w += c.weight;
  return w;
}

inline std::vector<bool> to_assignment(const std::vector<Spin>& s) {
  std::vector<bool> x(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) x[k] = s[k] > 0;
  return x;
}

/// Maximize offset + sum_i B_i x_i + sum_{i<j} Q_ij x_i x_j over x in {0,1}^n.
struct QuboInstance {
  std::size_t n = 0;
  std::vector<double> B;
  std::map<std::pair<std::size_t, std::size_t>, double> Q;  // keys (i, j), i < j
  double offset = 0.0;

  explicit QuboInstance(std::size_t size = 0) : n(size), B(size, 0.0) {}

  void add_quadratic(std::size_t i, std::size_t j, double c) {
    detail::require(i != j, "QUBO quadratic term needs distinct variables");
    if (i > j) std::swap(i, j);
    Q[{i, j}] += c;
  }

  double value(const std::vector<bool>& x) const {
    detail::require_dims(x.size() == n, "assignment length differs from QUBO size");
    double acc = offset;
    for (std::size_t i = 0; i < n; ++i)
      if (x[i]) acc += B[i];
    for (const auto& [ij, c] : Q)
      if (x[ij.first] && x[ij.second]) acc += c;
    return acc;
  }
};

/// Sum of clause values, each 1 - prod(1 - L) with L = x or 1 - x.
inline QuboInstance max2sat_to_qubo(const Max2SatInstance& sat) {
  validate(sat);
  QuboInstance q(sat.num_vars);
  q.offset = sat.satisfied_offset;
  // 1 - L = c + d x
  auto complement = [](int lit) { return lit > 0 ? std::pair{1.0, -1.0} : std::pair{0.0, 1.0}; };
  for (const auto& cl : sat.clauses) {
    const double w = cl.weight;
    const auto i = static_cast<std::size_t>(std::abs(cl.lit1) - 1);
    const auto [c1, d1] = complement(cl.lit1);
    if (cl.is_unit()) {
      q.offset += w * (1.0 - c1);
      q.B[i] -= w * d1;
      continue;
    }
    const auto j = static_cast<std::size_t>(std::abs(cl.lit2) - 1);
    const auto [c2, d2] = complement(cl.lit2);
    q.offset += w * (1.0 - c1 * c2);
    q.B[i] -= w * c2 * d1;
    q.B[j] -= w * c1 * d2;
    q.add_quadratic(i, j, -w * d1 * d2);
  }
  return q;
}

/// Maximize offset + a.v + b.h + v^T W h over {0,1} variables.
struct BipartiteQubo {
  Matrix W;
  std::vector<double> a;
  std::vector<double> b;
  double offset = 0.0;
  double penalty = 0.0;

  double value(const std::vector<bool>& v, const std::vector<bool>& h) const {
    detail::require_dims(v.size() == W.rows() && h.size() == W.cols(), "assignment size differs");
    double acc = offset;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i]) continue;
      acc += a[i];
      for (std::size_t j = 0; j < h.size(); ++j)
        if (h[j]) acc += W(i, j);
    }
    for (std::size_t j = 0; j < h.size(); ++j)
      if (h[j]) acc += b[j];
    return acc;
  }
};

/// Copies the QUBO onto K_{n,n}: x_i becomes v_i for linear terms and the
/// pair v_i h_j for quadratic ones, and the penalty -2c sum_i (v_i xor h_i),
/// written -2c (v_i + h_i - 2 v_i h_i), makes every maximizer satisfy v = h.
/// c = sum |B| + sum |Q| (1 if that is zero).
inline BipartiteQubo qubo_to_bipartite(const QuboInstance& q) {
  const std::size_t n = q.n;
  detail::require_dims(q.B.size() == n, "QUBO linear vector length differs from n");
  double c = 0.0;
  for (double x : q.B) c += std::abs(x);
  for (const auto& [ij, x] : q.Q) {
    detail::require(ij.first < ij.second && ij.second < n, "QUBO quadratic key out of range");
    c += std::abs(x);
  }
  if (c == 0.0) c = 1.0;

  BipartiteQubo bq{Matrix(n, n), std::vector<double>(n), std::vector<double>(n, -2.0 * c),
                   q.offset, c};
  for (std::size_t i = 0; i < n; ++i) {
    bq.a[i] = q.B[i] - 2.0 * c;
    bq.W(i, i) = 4.0 * c;
  }
  for (const auto& [ij, x] : q.Q) bq.W(ij.first, ij.second) += x;
  return bq;
}

/// A spin instance plus the constant that links it to the source objective:
/// objective(x) = -energy(inst, s) + offset with s = 2x - 1.
struct IsingForm {
  RbmInstance inst;
  double offset = 0.0;
};

/// Substitutes v = (v' + 1)/2, h = (h' + 1)/2:
///   W' = W/4, a'_i = a_i/2 + sum_j W_ij/4, b'_j = b_j/2 + sum_i W_ij/4,
///   offset' = offset + sum a/2 + sum b/2 + sum W/4.
inline IsingForm binary_to_ising(const BipartiteQubo& bq) {
  const std::size_t n = bq.W.rows(), m = bq.W.cols();
  detail::require_dims(bq.a.size() == n && bq.b.size() == m, "bipartite QUBO bias sizes differ");
  IsingForm out{RbmInstance(Matrix(n, m)), bq.offset};
  auto& r = out.inst;
  for (std::size_t i = 0; i < n; ++i) {
    r.a[i] = 0.5 * bq.a[i];
    out.offset += 0.5 * bq.a[i];
  }
  for (std::size_t j = 0; j < m; ++j) {
    r.b[j] = 0.5 * bq.b[j];
    out.offset += 0.5 * bq.b[j];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double w = bq.W(i, j);
      r.W(i, j) = 0.25 * w;
      r.a[i] += 0.25 * w;
      r.b[j] += 0.25 * w;
      out.offset += 0.25 * w;
    }
  return out;
}

/// Ghost-spin extension: an (n+1) x (m+1) unbiased instance with
/// W_{i,m} = a_i, W_{n,j} = b_j and W_{n,m} = 0. Pinning both ghost spins to
/// +1 reproduces the original energy.
inline RbmInstance absorb_biases(const RbmInstance& inst) {
  validate(inst);
  const std::size_t n = inst.n(), m = inst.m();
  RbmInstance out{Matrix(n + 1, m + 1)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) out.W(i, j) = inst.W(i, j);
    out.W(i, m) = inst.a[i];
  }
  for (std::size_t j = 0; j < m; ++j) out.W(n, j) = inst.b[j];
  if (inst.planted) {
    SpinState p = *inst.planted;
    p.v.push_back(1);
    p.h.push_back(1);
    out.planted = std::move(p);
  }
  out.ground_energy = inst.ground_energy;
  out.meta = inst.meta;
  return out;
}

/// Lowest conceivable energy, every bond and bias satisfied:
/// -(sum |W| + sum |a| + sum |b|).
inline double bond_floor(const RbmInstance& inst) {
  double acc = 0.0;
  for (double w : inst.W.data()) acc += std::abs(w);
  for (double x : inst.a) acc += std::abs(x);
  for (double x : inst.b) acc += std::abs(x);
  return -acc;
}

/// Two clauses of weight 2|W_ij| per bond:
///   W >= 0: (v_i | !h_j), (!v_i | h_j);   W < 0: (v_i | h_j), (!v_i | !h_j).
/// Visible spin i is variable i+1, hidden spin j is variable n+j+1, +1 = true.
/// Biases are handled as bonds to ghost spins pinned true and simplified
/// away: always-true clauses move into satisfied_offset, false ghost
/// literals are dropped, leaving unit clauses.
/// Violated weight of an assignment equals energy(s) - bond_floor(inst).
inline Max2SatInstance rbm_to_max2sat(const RbmInstance& inst) {
  validate(inst);
  const std::size_t n = inst.n(), m = inst.m();
  Max2SatInstance sat;
  sat.num_vars = n + m;
  sat.n_visible = n;
  auto vis = [](std::size_t i) { return static_cast<int>(i + 1); };
  auto hid = [n](std::size_t j) { return static_cast<int>(n + j + 1); };

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double w = inst.W(i, j);
      if (w == 0.0) continue;
      const double cw = 2.0 * std::abs(w);
      if (w > 0.0) {
        sat.clauses.push_back({vis(i), -hid(j), cw});
        sat.clauses.push_back({-vis(i), hid(j), cw});
      } else {
        sat.clauses.push_back({vis(i), hid(j), cw});
        sat.clauses.push_back({-vis(i), -hid(j), cw});
      }
    }

  auto add_bias = [&sat](int var, double x) {
    if (x == 0.0) return;
    const double cw = 2.0 * std::abs(x);
    sat.clauses.push_back({x > 0.0 ? var : -var, 0, cw});
    sat.satisfied_offset += cw;
  };
  for (std::size_t i = 0; i < n; ++i) add_bias(vis(i), inst.a[i]);
  for (std::size_t j = 0; j < m; ++j) add_bias(hid(j), inst.b[j]);

  if (inst.planted) {
    std::vector<Spin> p(inst.planted->v);
    p.insert(p.end(), inst.planted->h.begin(), inst.planted->h.end());
    sat.planted = std::move(p);
  }
  return sat;
}

/// Spin state read off a variable assignment produced for rbm_to_max2sat.
inline SpinState split_assignment(const std::vector<bool>& x, std::size_t n) {
  detail::require_dims(n <= x.size(), "assignment shorter than visible count");
  SpinState s;
  for (std::size_t k = 0; k < x.size(); ++k) (k < n ? s.v : s.h).push_back(x[k] ? 1 : -1);
  return s;
}

/// True when every two-literal clause joins a visible and a hidden variable.
inline bool is_bipartite(const Max2SatInstance& sat) {
  if (sat.n_visible == 0 || sat.n_visible >= sat.num_vars) return false;
  const auto nv = static_cast<int>(sat.n_visible);
  for (const auto& c : sat.clauses) {
    if (c.is_unit()) continue;
    if ((std::abs(c.lit1) <= nv) == (std::abs(c.lit2) <= nv)) return false;
  }
  return true;
}

/// Spin form of a MAX-2-SAT instance: satisfied_weight(x) ==
/// -energy(inst, s) + offset. Bipartite instances map clause by clause onto
/// an n_visible x (num_vars - n_visible) instance (the exact inverse of
/// rbm_to_max2sat); anything else goes through the QUBO chain.
inline IsingForm max2sat_to_rbm(const Max2SatInstance& sat) {
  validate(sat);
  if (!is_bipartite(sat)) return binary_to_ising(qubo_to_bipartite(max2sat_to_qubo(sat)));

  const std::size_t n = sat.n_visible, m = sat.num_vars - n;
  IsingForm out{RbmInstance(Matrix(n, m)), sat.satisfied_offset};
  auto& r = out.inst;
  auto bias = [&](int lit, double coef) {
    const auto k = static_cast<std::size_t>(std::abs(lit) - 1);
    const double s = lit > 0 ? coef : -coef;
    if (k < n) r.a[k] += s;
    else r.b[k - n] += s;
  };
  for (const auto& c : sat.clauses) {
    const double w = c.weight;
    if (c.is_unit()) {
      // (1 + sigma s)/2
      bias(c.lit1, 0.5 * w);
      out.offset += 0.5 * w;
      continue;
    }
    int lv = c.lit1, lh = c.lit2;
    if (std::abs(lv) > static_cast<int>(n)) std::swap(lv, lh);
    // 1 - (1 - sv s)(1 - sh t)/4 = 3/4 + sv s/4 + sh t/4 - sv sh s t/4
    const double sv = lv > 0 ? 1.0 : -1.0, sh = lh > 0 ? 1.0 : -1.0;
    const auto i = static_cast<std::size_t>(std::abs(lv) - 1);
    const auto j = static_cast<std::size_t>(std::abs(lh) - 1) - n;
    r.W(i, j) -= 0.25 * w * sv * sh;
    bias(lv, 0.25 * w);
    bias(lh, 0.25 * w);
    out.offset += 0.75 * w;
  }
  if (sat.planted) {
    std::vector<bool> x = to_assignment(*sat.planted);
    r.planted = split_assignment(x, n);
  }
  return out;
}

/// 2 nnz / (n + m): each nonzero bond yields two clauses.
inline double clause_density(const RbmInstance& inst) {
  std::size_t nnz = 0;
  for (double w : inst.W.data()) nnz += w != 0.0;
  return 2.0 * static_cast<double>(nnz) / static_cast<double>(inst.n() + inst.m());
}

/// 8N / (nm) for N non-intersecting loop atoms.
inline double clause_density_loops(std::size_t n, std::size_t m, std::size_t N) {
  detail::require(n * m > 0, "clause density needs n, m >= 1");
  return 8.0 * static_cast<double>(N) / static_cast<double>(n * m);
}

}  // namespace frusloop
