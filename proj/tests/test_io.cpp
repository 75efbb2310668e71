#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "frusloop/generate.hpp"
#include "frusloop/io.hpp"
#include "oracles.hpp"

using namespace frusloop;

namespace {

std::vector<std::string> clause_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  bool body = false;
  while (std::getline(in, line)) {
    if (line.rfind("p ", 0) == 0) body = true;
    else if (body) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST(Wcnf, SingleClauseLine) {
  Max2SatInstance sat;
  sat.num_vars = 2;
  sat.clauses = {{1, -2, 2.0}};
  const auto text = write_wcnf(sat, 1);
  EXPECT_EQ(clause_lines(text), (std::vector<std::string>{"2 1 -2 0"}));
  EXPECT_NE(text.find("p wcnf 2 1 3\n"), std::string::npos);
}

TEST(Wcnf, RoundTrip) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> w(0.01, 2.0);
  Max2SatInstance sat;
  sat.num_vars = 5;
  sat.n_visible = 2;
  sat.satisfied_offset = 1.25;
  sat.planted = std::vector<Spin>{1, -1, 1, 1, -1};
  sat.comments = {{"algorithm", "random-loop"}, {"note", "two words"}};
  sat.clauses = {{1, -3, w(g)}, {-2, 4, w(g)}, {5, 0, w(g)}, {-1, -5, w(g)}};
  const auto back = read_wcnf(write_wcnf(sat, 1'000'000));
  EXPECT_EQ(back.num_vars, 5u);
  EXPECT_EQ(back.n_visible, 2u);
  EXPECT_EQ(back.satisfied_offset, 1.25);
  EXPECT_EQ(back.planted, sat.planted);
  EXPECT_EQ(back.comments, sat.comments);
  ASSERT_EQ(back.clauses.size(), sat.clauses.size());
  for (std::size_t k = 0; k < sat.clauses.size(); ++k) {
    EXPECT_EQ(back.clauses[k].lit1, sat.clauses[k].lit1);
    EXPECT_EQ(back.clauses[k].lit2, sat.clauses[k].lit2);
    EXPECT_NEAR(back.clauses[k].weight, sat.clauses[k].weight, 1e-6);
  }
}

TEST(Wcnf, TinyWeightRejected) {
  Max2SatInstance sat;
  sat.num_vars = 2;
  sat.clauses = {{1, 2, 1e-9}};
  EXPECT_THROW(write_wcnf(sat, 1'000'000), InvalidParameter);
}

TEST(Wcnf, ZeroWeightSkipped) {
  Max2SatInstance sat;
  sat.num_vars = 2;
  sat.clauses = {{1, 2, 0.0}, {1, -2, 1.0}};
  EXPECT_EQ(clause_lines(write_wcnf(sat, 10)).size(), 1u);
}

TEST(Wcnf, MalformedInput) {
  EXPECT_THROW(read_wcnf("1 1 2 0\n"), FormatError);
  EXPECT_THROW(read_wcnf("p wcnf 2 1 100\n5 1 2\n"), FormatError);
  EXPECT_THROW(read_wcnf("p wcnf 2 1 100\n5 1 2 -1 0\n"), FormatError);
  EXPECT_THROW(read_wcnf("p wcnf 2 1 100\n500 1 2 0\n"), FormatError);
  EXPECT_THROW(read_wcnf("p wcnf 2 2 100\n5 1 2 0\n"), FormatError);
  EXPECT_THROW(read_wcnf("p wcnf 2 1 100\n5 1 3 0\n"), FormatError);
  EXPECT_THROW(read_wcnf("p wcnf 2 1 100\nx 1 2 0\n"), FormatError);
  EXPECT_NO_THROW(read_wcnf("c hello\np wcnf 2 1 100\n5 1 -2 0\n"));
}

TEST(Json, RoundTripIsExact) {
  GenParams p;
  p.n = 7;
  p.m = 5;
  p.f = 0.15;
  p.rho = 0.8;
  p.seed = 42;
  p.jitter = 0.1;
  const auto inst = generate(p);
  const auto text = instance_to_json(inst, nlohmann::json{{"tool", "x"}});
  const auto back = instance_from_json(text);
  EXPECT_EQ(back.W, inst.W);
  EXPECT_EQ(back.a, inst.a);
  EXPECT_EQ(back.b, inst.b);
  EXPECT_EQ(back.planted, inst.planted);
  EXPECT_EQ(back.ground_energy, inst.ground_energy);
  EXPECT_EQ(back.meta.seed, 42u);
  EXPECT_EQ(back.meta.jitter, 0.1);
  EXPECT_FALSE(back.meta.f_certified);
  EXPECT_EQ(instance_to_json(back, nlohmann::json{{"tool", "x"}}), text);
}

TEST(Json, NestedMatrixAccepted) {
  const auto inst = instance_from_json(R"({"n":2,"m":2,"W":[[1,2],[3,4]]})");
  EXPECT_EQ(inst.W, Matrix(2, 2, std::vector<double>{1, 2, 3, 4}));
  EXPECT_FALSE(inst.is_biased());
}

TEST(Json, Malformed) {
  EXPECT_THROW(instance_from_json("{"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"n":2,"m":2,"W":[1,2,3]})"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"n":2,"m":1,"W":[1,2],"a":[0]})"), FormatError);
  EXPECT_THROW(instance_from_json(R"({"n":1,"m":1,"W":[1],"planted":{"v":[2],"h":[1]}})"),
               std::exception);
}

// generate -> wcnf -> back: same clause multiset up to the weight scale, and
// the rebuilt instance reproduces every bond.
TEST(Json, WcnfRoundTripPreservesClauses) {
  GenParams p;
  p.n = 6;
  p.m = 6;
  p.f = 0.1;
  p.rho = 1.0;
  p.seed = 3;
  const auto inst = generate(p);
  const auto sat = instance_to_max2sat(inst);
  const auto back = read_wcnf(write_wcnf(sat, 1'000'000));
  auto key = [](const WeightedClause& c) { return std::pair{c.lit1, c.lit2}; };
  auto a = sat.clauses, b = back.clauses;
  auto by_key = [&](const WeightedClause& x, const WeightedClause& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), by_key);
  std::sort(b.begin(), b.end(), by_key);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(key(a[k]), key(b[k]));
    EXPECT_NEAR(a[k].weight, b[k].weight, 1e-6);
  }
  const auto form = max2sat_to_rbm(back);
  for (std::size_t k = 0; k < inst.W.size(); ++k)
    EXPECT_NEAR(form.inst.W.data()[k], inst.W.data()[k], 1e-6);
  EXPECT_EQ(form.inst.planted, inst.planted);
}

TEST(Json, PlantedSatisfiedWeightComment) {
  GenParams p;
  p.n = 5;
  p.m = 5;
  p.f = 0.2;
  p.rho = 1.0;
  p.seed = 9;
  const auto inst = generate(p);
  const auto sat = instance_to_max2sat(inst);
  std::string value;
  for (const auto& [k, v] : sat.comments)
    if (k == "planted_satisfied_weight") value = v;
  ASSERT_FALSE(value.empty());
  std::uint64_t x = 0;
  for (std::size_t k = 0; k < 10; ++k) {
    const Spin s = k < 5 ? inst.planted->v[k] : inst.planted->h[k - 5];
    if (s > 0) x |= std::uint64_t{1} << k;
  }
  EXPECT_NEAR(std::stod(value), oracle::satisfied(sat, x), 1e-9);
  EXPECT_NEAR(std::stod(value), oracle::max_satisfied(sat), 1e-9);
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_THROW(read_file("/nonexistent/dir/x.json"), IoError);
  EXPECT_THROW(write_file("/nonexistent/dir/x.json", "x"), IoError);
}
