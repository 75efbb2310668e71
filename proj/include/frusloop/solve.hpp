#pragma once

// Simulated annealing with single-spin Metropolis sweeps, a linear
// inverse-temperature schedule and restarts until a target energy is hit.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "frusloop/core.hpp"
#include "frusloop/error.hpp"
#include "frusloop/rng.hpp"

namespace frusloop {

inline constexpr double kDefaultBetaMin = 0.01;
inline constexpr std::size_t kDefaultMaxRuns = 10'000;

struct AnnealSchedule {
  double beta_min = kDefaultBetaMin;
  /// ln(n) / max(1, rho) when absent.
  std::optional<double> beta_max;
  std::size_t n_sweep = 1;
  std::size_t max_runs = kDefaultMaxRuns;
  std::uint64_t seed = 0;
};

/// ln(n) scaled down by rho in the high-density regime (rho > 1).
inline double default_beta_max(std::size_t n, double rho) {
  detail::require(n >= 2, "beta schedule needs n >= 2");
  return std::log(static_cast<double>(n)) / std::max(1.0, rho);
}

/// beta_c = beta_min + c/(n_sweep - 1) (beta_max - beta_min), c = 0..n_sweep-1.
inline std::vector<double> linear_betas(double beta_min, double beta_max, std::size_t n_sweep) {
  detail::require(n_sweep >= 1, "n_sweep must be >= 1");
  detail::require(beta_min > 0.0 && beta_min <= beta_max, "need 0 < beta_min <= beta_max");
  if (n_sweep == 1) return {beta_min};
  std::vector<double> betas(n_sweep);
  const double step = (beta_max - beta_min) / static_cast<double>(n_sweep - 1);
  for (std::size_t c = 0; c < n_sweep; ++c) betas[c] = beta_min + static_cast<double>(c) * step;
  betas.back() = beta_max;
  return betas;
}

inline std::vector<double> beta_schedule(std::size_t n, double rho, std::size_t n_sweep,
                                         double beta_min = kDefaultBetaMin) {
  return linear_betas(beta_min, default_beta_max(n, rho), n_sweep);
}

struct SweepCounters {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t field_updates = 0;
};

/// Spin configuration with incrementally maintained local fields
/// theta = W h + a, phi = W^T v + b and energy.
class Annealer {
 public:
  explicit Annealer(const RbmInstance& inst)
      : inst_(inst), Wt_(inst.W.transposed()) {
    validate(inst);
  }

  void reset(SpinState s) {
    detail::check_state(inst_, s);
    s_ = std::move(s);
    theta_ = visible_fields(inst_, s_);
    phi_ = hidden_fields(inst_, s_);
    energy_ = frusloop::energy(inst_, s_);
  }

  void randomize(Rng& rng) {
    SpinState s{std::vector<Spin>(inst_.n()), std::vector<Spin>(inst_.m())};
    for (auto& x : s.v) x = static_cast<Spin>(rng.sign());
    for (auto& x : s.h) x = static_cast<Spin>(rng.sign());
    reset(std::move(s));
  }

  double delta_visible(std::size_t i) const noexcept { return 2.0 * s_.v[i] * theta_[i]; }
  double delta_hidden(std::size_t j) const noexcept { return 2.0 * s_.h[j] * phi_[j]; }

  void flip_visible(std::size_t i) noexcept {
    energy_ += delta_visible(i);
    s_.v[i] = static_cast<Spin>(-s_.v[i]);
    const double dv = 2.0 * s_.v[i];
    const auto w = inst_.W.row(i);
    for (std::size_t j = 0; j < phi_.size(); ++j) phi_[j] += dv * w[j];
    counters_.field_updates += phi_.size();
  }

  void flip_hidden(std::size_t j) noexcept {
    energy_ += delta_hidden(j);
    s_.h[j] = static_cast<Spin>(-s_.h[j]);
    const double dh = 2.0 * s_.h[j];
    const auto w = Wt_.row(j);
    for (std::size_t i = 0; i < theta_.size(); ++i) theta_[i] += dh * w[i];
    counters_.field_updates += theta_.size();
  }

  /// One Metropolis proposal; consumes exactly one uniform variate.
  bool propose_visible(std::size_t i, double beta, Rng& rng) noexcept {
    ++counters_.proposals;
    const double de = delta_visible(i);
    const double u = rng.uniform();
    if (de > 0.0 && u >= std::exp(-beta * de)) return false;
    flip_visible(i);
    ++counters_.accepted;
    return true;
  }

  bool propose_hidden(std::size_t j, double beta, Rng& rng) noexcept {
    ++counters_.proposals;
    const double de = delta_hidden(j);
    const double u = rng.uniform();
    if (de > 0.0 && u >= std::exp(-beta * de)) return false;
    flip_hidden(j);
    ++counters_.accepted;
    return true;
  }

  /// Replaces the running energy by an exact recomputation.
  double resync_energy() {
    energy_ = frusloop::energy(inst_, s_);
    return energy_;
  }

  const SpinState& state() const noexcept { return s_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& phi() const noexcept { return phi_; }
  double energy() const noexcept { return energy_; }
  const SweepCounters& counters() const noexcept { return counters_; }

 private:
  const RbmInstance& inst_;
  Matrix Wt_;
  SpinState s_;
  std::vector<double> theta_, phi_;
  double energy_ = 0.0;
  SweepCounters counters_;
};

struct AnnealResult {
  SpinState best_state;
  double best_energy = std::numeric_limits<double>::infinity();
  std::size_t sweeps_used = 0;
  bool reached_target = false;
  SweepCounters counters;
};

/// One annealing run from a random state: per sweep, visible spins 0..n-1
/// then hidden spins 0..m-1. Stops as soon as the energy is within
/// kEnergyTolerance of `target` (checked exactly); a partial sweep counts as
/// a full one and a random start already at the target counts one sweep.
/// The best state is sampled at sweep ends and at the early exit.
inline AnnealResult anneal_run(const RbmInstance& inst, const std::vector<double>& betas,
                               Rng& rng, std::optional<double> target = std::nullopt) {
  detail::require(!betas.empty(), "beta schedule is empty");
  Annealer an(inst);
  an.randomize(rng);
  AnnealResult res;
  const double goal = target ? *target + kEnergyTolerance : -std::numeric_limits<double>::infinity();

  auto hit = [&]() {
    if (an.energy() > goal) return false;
    return an.resync_energy() <= goal;
  };
  auto keep_best = [&]() {
    if (an.energy() < res.best_energy) {
      res.best_energy = an.energy();
      res.best_state = an.state();
    }
  };

  keep_best();
  if (target && hit()) {
    res.sweeps_used = 1;
    res.reached_target = true;
    res.best_energy = an.energy();
    res.best_state = an.state();
    res.counters = an.counters();
    return res;
  }

  const std::size_t n = inst.n(), m = inst.m();
  for (std::size_t c = 0; c < betas.size(); ++c) {
    const double beta = betas[c];
    for (std::size_t i = 0; i < n; ++i) {
      if (an.propose_visible(i, beta, rng) && hit()) {
        res.reached_target = true;
        break;
      }
    }
    if (!res.reached_target)
      for (std::size_t j = 0; j < m; ++j) {
        if (an.propose_hidden(j, beta, rng) && hit()) {
          res.reached_target = true;
          break;
        }
      }
    res.sweeps_used = c + 1;
    if (res.reached_target) {
      res.best_energy = an.energy();
      res.best_state = an.state();
      break;
    }
    keep_best();
  }
  if (!res.reached_target) {
    // report an exactly evaluated energy for the best state
    res.best_energy = energy(inst, res.best_state);
  }
  res.counters = an.counters();
  return res;
}

struct TtsRecord {
  std::uint64_t n_tot = 0;
  std::size_t runs_used = 0;
  bool found = false;
  double best_energy = std::numeric_limits<double>::infinity();
  double wall_seconds = 0.0;
};

/// Schedule for an instance: betas from sched, defaulting beta_max.
inline std::vector<double> schedule_betas(const RbmInstance& inst, const AnnealSchedule& sched,
                                          double rho) {
  const double bmax = sched.beta_max ? *sched.beta_max : default_beta_max(inst.n(), rho);
  return linear_betas(sched.beta_min, bmax, sched.n_sweep);
}

/// Restarts anneal_run (run r seeded with derive_seed(seed, r)) until the
/// target is reached or max_runs runs are spent. n_tot sums sweeps over
/// all runs, so an unsolved instance reports n_sweep * max_runs.
inline TtsRecord solve_with_restarts(const RbmInstance& inst, double target,
                                     const AnnealSchedule& sched, double rho = 0.0) {
  detail::require(sched.max_runs >= 1, "max_runs must be >= 1");
  const auto betas = schedule_betas(inst, sched, rho);
  const auto t0 = std::chrono::steady_clock::now();
  TtsRecord rec;
  for (std::size_t r = 0; r < sched.max_runs; ++r) {
    Rng rng(derive_seed(sched.seed, r));
    const AnnealResult res = anneal_run(inst, betas, rng, target);
    rec.n_tot += res.sweeps_used;
    rec.runs_used = r + 1;
    rec.best_energy = std::min(rec.best_energy, res.best_energy);
    if (res.reached_target) {
      rec.found = true;
      break;
    }
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace frusloop
