#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "frusloop/generate.hpp"
#include "oracles.hpp"

using namespace frusloop;

namespace {

GenParams params(std::size_t n, double f, double rho, std::uint64_t seed,
                 GenMode mode = GenMode::random) {
  GenParams p;
  p.n = n;
  p.m = n;
  p.f = f;
  p.rho = rho;
  p.seed = seed;
  p.mode = mode;
  return p;
}

}  // namespace

TEST(Alpha, Conversions) {
  EXPECT_EQ(alpha_from_f(0.0), 0.0);
  EXPECT_NEAR(alpha_from_f(0.1), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(f_from_alpha(1.0), 0.25);
  EXPECT_THROW(alpha_from_f(0.25), InvalidParameter);
  EXPECT_THROW(alpha_from_f(-0.01), InvalidParameter);
  for (double f : {0.01, 0.07, 0.13, 0.2, 0.249}) EXPECT_NEAR(f_from_alpha(alpha_from_f(f)), f, 1e-15);
}

TEST(Random, SingleLoopAlphaOne) {
  GenParams p = params(2, 0.0, 0.0, 5);
  p.loops = 1;
  p.f = 0.2499999999999999;  // alpha just under 1
  auto inst = generate(p);
  EXPECT_NEAR(*inst.ground_energy, -2.0, 1e-9);
  EXPECT_NEAR(frustration_index(inst), 0.25, 1e-9);
}

TEST(Random, TenLoopsEnergy) {
  GenParams p = params(10, 0.1, 1.0, 11);
  const auto inst = generate(p);
  EXPECT_EQ(inst.meta.N, 10u);
  EXPECT_NEAR(*inst.ground_energy, -80.0 / 3.0, 1e-9);
}

TEST(Random, CertifiedAgainstEnumeration) {
  std::mt19937_64 g(1);
  std::uniform_int_distribution<std::size_t> dim(2, 9);
  const double fs[] = {0.0, 0.05, 0.12, 0.2, 0.24};
  for (int t = 0; t < 150; ++t) {
    GenParams p = params(dim(g), fs[t % 5], 0.2 + 0.4 * (t % 4), 1000 + t);
    p.m = dim(g);
    p.mode = t % 2 ? GenMode::structured : GenMode::random;
    p.d = 0.3 + 0.1 * (t % 6);
    const auto inst = generate(p);
    const double N = static_cast<double>(inst.meta.N);
    const double alpha = alpha_from_f(p.f);
    EXPECT_NEAR(*inst.ground_energy, -N * (3.0 - alpha), 1e-9);
    if (p.n + p.m <= 16) {
      EXPECT_NEAR(oracle::min_energy(inst), *inst.ground_energy, 1e-9);
    }
    EXPECT_NEAR(oracle::energy(inst, *inst.planted), *inst.ground_energy, 1e-9);
    if (N > 0) {
      EXPECT_NEAR(oracle::frustration(inst.W, *inst.planted), p.f, 1e-12);
    }
  }
}

TEST(Random, ExplicitPlantedState) {
  std::mt19937_64 g(2);
  GenParams p = params(6, 0.1, 1.0, 3);
  p.planted = oracle::random_state(g, 6, 6);
  const auto inst = generate(p);
  EXPECT_EQ(inst.planted, p.planted);
  EXPECT_NEAR(oracle::min_energy(inst), oracle::energy(inst, *p.planted), 1e-9);
}

TEST(Random, Deterministic) {
  for (auto mode : {GenMode::random, GenMode::structured, GenMode::uniform_sat}) {
    const GenParams p = params(9, 0.15, mode == GenMode::uniform_sat ? 0.8 : 2.0, 77, mode);
    const auto x = generate(p), y = generate(p);
    EXPECT_EQ(x.W, y.W);
    EXPECT_EQ(x.planted, y.planted);
    GenParams q = p;
    q.seed = 78;
    EXPECT_NE(generate(q).W, x.W);
  }
}

TEST(Random, NoConstructiveKeepsAtomsDisjoint) {
  GenParams p = params(10, 0.1, 1.0, 5);
  p.allow_constructive = false;
  const auto inst = generate(p);
  std::size_t nnz = 0;
  for (double w : inst.W.data()) nnz += w != 0.0;
  EXPECT_EQ(nnz, 4 * inst.meta.N);
}

TEST(Random, Saturation) {
  GenParams p = params(2, 0.1, 0.0, 1);
  p.loops = 2;
  p.allow_constructive = false;
  EXPECT_THROW(generate(p), SaturationError);
}

TEST(Random, InvalidParameters) {
  EXPECT_THROW(generate(params(5, 0.3, 1.0, 1)), InvalidParameter);
  EXPECT_THROW(generate(params(5, 0.1, -1.0, 1)), InvalidParameter);
  EXPECT_THROW(generate(params(1, 0.1, 1.0, 1)), DimensionError);
  GenParams p = params(5, 0.1, 1.0, 1);
  p.jitter = -1.0;
  EXPECT_THROW(generate(p), InvalidParameter);
}

TEST(Random, JitterStillCertified) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenParams p = params(6, 0.15, 1.5, seed);
    p.jitter = 0.3;
    const auto inst = generate(p);
    EXPECT_FALSE(inst.meta.f_certified);
    EXPECT_NEAR(oracle::min_energy(inst), *inst.ground_energy, 1e-9);
  }
}

TEST(Structured, BlockSizes) {
  EXPECT_EQ(block_sizes(11, 11, 0.2), (std::pair<std::size_t, std::size_t>{2, 2}));
  EXPECT_EQ(block_sizes(10, 6, 0.5), (std::pair<std::size_t, std::size_t>{5, 3}));
  EXPECT_EQ(block_sizes(2, 2, 0.1), (std::pair<std::size_t, std::size_t>{1, 1}));
}

TEST(Structured, BlockSumsOneOfEach) {
  GenParams p = params(6, 0.0, 0.0, 4, GenMode::structured);
  p.f = 0.2499999999999999;
  p.loop_mix = LoopMix{1, 1, 1};
  const auto inst = generate(p);
  const auto [n1, m1] = block_sizes(6, 6, 0.5);
  const auto s = block_sums(inst, n1, m1);
  EXPECT_NEAR(s[0], -1.0, 1e-9);
  EXPECT_NEAR(s[1], 3.0, 1e-9);
  EXPECT_NEAR(s[2], 3.0, 1e-9);
  EXPECT_NEAR(s[3], 1.0, 1e-9);
  EXPECT_NEAR(s[0] + s[3], 0.0, 1e-9);
}

TEST(Structured, BlockSumFormulas) {
  std::mt19937_64 g(5);
  std::uniform_int_distribution<std::size_t> cnt(0, 6);
  for (int t = 0; t < 200; ++t) {
    GenParams p = params(10, 0.05 * (t % 5), 0.0, 300 + t, GenMode::structured);
    p.d = 0.3 + 0.1 * (t % 4);
    p.loop_mix = LoopMix{cnt(g), cnt(g), cnt(g)};
    const auto inst = generate(p);
    const double a = alpha_from_f(p.f);
    const double N1 = p.loop_mix->N1, N2 = p.loop_mix->N2, N3 = p.loop_mix->N3;
    const auto [n1, m1] = block_sizes(10, 10, p.d);
    const auto s = block_sums(inst, n1, m1);
    EXPECT_NEAR(s[0], N1 + N2 - a * (N1 + N2 + N3), 1e-9);
    EXPECT_NEAR(s[1], 2 * N2 + N3, 1e-9);
    EXPECT_NEAR(s[2], 2 * N1 + N3, 1e-9);
    EXPECT_NEAR(s[3], N3, 1e-9);
  }
}

TEST(Structured, DegeneracyAndGap) {
  for (double eps : {0.0, 0.01, 0.2}) {
    GenParams p = params(8, 0.0, 2.0, 17, GenMode::structured);
    p.f = f_from_alpha(1.0 - eps);
    if (eps == 0.0) p.f = 0.2499999999999999;
    const auto inst = generate(p);
    const auto [n1, m1] = block_sizes(8, 8, 0.5);
    const auto s = metastable_state(inst, n1, m1);
    const double gap = oracle::energy(inst, s) - *inst.ground_energy;
    const double alpha = alpha_from_f(p.f);
    EXPECT_NEAR(gap, 2.0 * (1.0 - alpha) * static_cast<double>(inst.meta.N), 1e-9);
    // the switching subset is B1 u B4
    const auto f = switching_subset(*inst.planted, s);
    for (const auto& [i, j] : f.members) EXPECT_EQ(i < n1, j < m1);
    EXPECT_EQ(f.size(), n1 * m1 + (8 - n1) * (8 - m1));
  }
}

TEST(Structured, CenterOnlyMetastableIsLocalMinimum) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenParams p = params(10, 0.15, 0.0, seed, GenMode::structured);
    p.loop_mix = LoopMix{0, 0, 12};
    const auto inst = generate(p);
    const auto [n1, m1] = block_sizes(10, 10, p.d);
    const auto s = metastable_state(inst, n1, m1);
    // every single flip, evaluated by direct subtraction
    const double e = oracle::energy(inst, s);
    for (std::size_t k = 0; k < 20; ++k) {
      SpinState t = s;
      auto& x = k < 10 ? t.v[k] : t.h[k - 10];
      x = static_cast<Spin>(-x);
      EXPECT_GE(oracle::energy(inst, t), e - 1e-9);
    }
    EXPECT_TRUE(is_local_minimum(inst, s));
  }
}

TEST(Structured, DefaultMix) {
  EXPECT_EQ(default_loop_mix(10, 3, 3), (LoopMix{2, 2, 6}));
  EXPECT_EQ(default_loop_mix(10, 1, 3), (LoopMix{2, 0, 8}));
  EXPECT_EQ(default_loop_mix(10, 3, 1), (LoopMix{0, 2, 8}));
  GenParams p = params(6, 0.1, 1.0, 1, GenMode::structured);
  p.loop_mix = LoopMix{1, 1, 1};
  EXPECT_THROW(generate(p), InvalidParameter);  // 3 != round(6)
  p.d = 0.1;
  p.rho = 0.0;
  p.loop_mix = LoopMix{0, 1, 0};
  EXPECT_THROW(generate(p), InvalidParameter);  // one top row
}

TEST(Decompose, TwoAndThree) {
  auto atoms = decompose_loop({0, 1}, {0, 1}, 0, 0.5);
  ASSERT_EQ(atoms.size(), 1u);
  Matrix W(2, 2), want(2, 2);
  add_atom(W, atoms[0]);
  want(0, 0) = -0.5;
  want(1, 0) = want(1, 1) = want(0, 1) = 1.0;
  EXPECT_EQ(W, want);

  atoms = decompose_loop({0, 1, 2}, {0, 1, 2}, 0);
  ASSERT_EQ(atoms.size(), 2u);
  Matrix S(3, 3);
  for (const auto& a : atoms) add_atom(S, a);
  const auto count = [&](double x) { return std::count(S.data().begin(), S.data().end(), x); };
  EXPECT_EQ(count(1.0), 5);
  EXPECT_EQ(count(-1.0), 1);
  EXPECT_EQ(count(0.0), 3);
  EXPECT_EQ(S(0, 0), -1.0);
}

TEST(Decompose, RandomCycles) {
  std::mt19937_64 g(6);
  for (int t = 0; t < 500; ++t) {
    const std::size_t l = 2 + t % 5;
    std::vector<std::size_t> rows(8), cols(8);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), g);
    std::shuffle(cols.begin(), cols.end(), g);
    rows.resize(l);
    cols.resize(l);
    const std::size_t neg = g() % (2 * l);
    const double alpha = (g() % 100) / 100.0;
    Matrix want(8, 8);
    for (std::size_t k = 0; k < 2 * l; ++k) {
      const std::size_t r = k % 2 == 0 ? rows[k / 2] : rows[(k / 2 + 1) % l];
      const std::size_t c = cols[k / 2];
      want(r, c) = k == neg ? -alpha : 1.0;
    }
    Matrix got(8, 8);
    for (const auto& a : decompose_loop(rows, cols, neg, alpha)) add_atom(got, a);
    for (std::size_t k = 0; k < 64; ++k) ASSERT_NEAR(got.data()[k], want.data()[k], 1e-15);
  }
}

TEST(UniformSat, ClauseCounts) {
  GenParams p = params(4, 0.0, 0.0, 2, GenMode::uniform_sat);
  p.loops = 1;
  const auto sat = uniform_sat_instance(p);
  EXPECT_EQ(sat.clauses.size(), 8u);
  for (const auto& c : sat.clauses) EXPECT_EQ(c.weight, 2.0);
  p.loops = 0;
  EXPECT_TRUE(uniform_sat_instance(p).clauses.empty());
}

TEST(UniformSat, PlantedViolatesOneClausePerLoop) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenParams p = params(5 + seed % 5, 0.0, 0.8, seed, GenMode::uniform_sat);
    const auto inst = uniform_sat_rbm(p);
    const auto sat = rbm_to_max2sat(inst);
    const double N = static_cast<double>(inst.meta.N);
    std::uint64_t x = 0;
    const std::size_t n = inst.n();
    for (std::size_t k = 0; k < n + inst.m(); ++k) {
      const Spin s = k < n ? inst.planted->v[k] : inst.planted->h[k - n];
      if (s > 0) x |= std::uint64_t{1} << k;
    }
    EXPECT_EQ(sat.clauses.size(), 8 * inst.meta.N);
    EXPECT_NEAR(oracle::satisfied(sat, x), 14.0 * N, 1e-12);
    if (n + inst.m() <= 16) {
      EXPECT_NEAR(oracle::max_satisfied(sat), 14.0 * N, 1e-12);
    }
  }
}
