#include <gtest/gtest.h>

#include <random>

#include "domp/error.hpp"
#include "domp/exact.hpp"
#include "domp/ordered_median.hpp"
#include "oracles.hpp"

using namespace domp;

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(100, 5), 75287520u);
  EXPECT_EQ(binomial(7, 0), 1u);
  EXPECT_EQ(binomial(3, 4), 0u);
  EXPECT_EQ(binomial(200, 100), UINT64_MAX);
}

TEST(SolveEnumeration, T1Examples) {
  const auto med = solve_enumeration(oracle::t1_instance({1, 1, 1, 1, 1}, 1));
  EXPECT_EQ(med.centers, (std::vector<std::size_t>{2}));
  EXPECT_DOUBLE_EQ(med.value, 18.0);
  const auto cen = solve_enumeration(oracle::t1_instance({1, 0, 0, 0, 0}, 1));
  EXPECT_EQ(cen.centers, (std::vector<std::size_t>{3}));
  EXPECT_DOUBLE_EQ(cen.value, 7.0);
  const auto all = solve_enumeration(oracle::t1_instance({1, 0.5, 0.5, 0.5, 0}, 5));
  EXPECT_EQ(all.centers, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(all.value, 0.0);
}

TEST(SolveEnumeration, LexicographicTieBreak) {
  // Four corners of a square with p = 2: opposite and adjacent pairs tie.
  const PointSet sq(2, {0, 0, 1, 0, 1, 1, 0, 1});
  const Instance inst(sq.euclidean(), WeightVector({1, 1, 1, 1}), 2, sq);
  const auto sol = solve_enumeration(inst);
  EXPECT_EQ(sol.centers, (std::vector<std::size_t>{0, 1}));
  EXPECT_DOUBLE_EQ(sol.value, 2.0);
}

TEST(SolveEnumeration, SizeGuard) {
  const PointSet pts = oracle::random_planar(40, 1);
  const Instance inst(pts.euclidean(), WeightVector(std::vector<double>(40, 1.0)), 20, pts);
  EXPECT_THROW(solve_enumeration(inst), SizeError);
  EnumerationOptions opt;
  opt.max_subsets = 5;
  EXPECT_THROW(solve_enumeration(oracle::t1_instance({1, 1, 1, 1, 1}, 2), opt), SizeError);
}

TEST(SolveEnumeration, MatchesAssignmentOracle) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 120; ++rep) {
    const std::size_t m = 2 + rep % 5;
    const std::size_t p = 1 + rep % m;
    const PointSet pts = oracle::random_planar(m, 3100 + rep);
    const Instance inst(pts.euclidean(), WeightVector(oracle::random_weights(rng, m)), p, pts);
    const auto sol = solve_enumeration(inst);
    const double ref = oracle::assignment_oracle(inst);
    EXPECT_NEAR(sol.value, ref, 1e-12 * (1 + ref)) << "rep " << rep;
    EXPECT_EQ(sol.centers.size(), p);
    EXPECT_NEAR(sol.value, om_evaluate(sol.distances, inst.weights()), 1e-12);
  }
}

TEST(SolveEnumeration, JobsDoNotChangeResult) {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t m = 9;
    const PointSet pts = oracle::random_planar(m, 3300 + rep);
    // Integer grid distances create many ties.
    std::vector<double> c(pts.coords().begin(), pts.coords().end());
    for (double& x : c) x = std::round(4 * x);
    const PointSet grid(2, c);
    const Instance inst(grid.euclidean(), WeightVector(oracle::random_weights(rng, m)), 3, grid);
    EnumerationOptions one, four;
    four.jobs = 4;
    const auto a = solve_enumeration(inst, one);
    const auto b = solve_enumeration(inst, four);
    EXPECT_EQ(a.centers, b.centers);
    EXPECT_EQ(a.value, b.value);
  }
}

TEST(LpGap, Values) {
  EXPECT_EQ(lp_gap(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(lp_gap(10, 7.5), 0.25);
  EXPECT_EQ(lp_gap(10, 10), 0.0);
  EXPECT_TRUE(values_match(18, 18 + 1e-8));
  EXPECT_FALSE(values_match(18, 17.99));
}

TEST(RecoveryStatus, Examples) {
  const auto med = recovery_status(oracle::t1_instance({1, 1, 1, 1, 1}, 1));
  EXPECT_TRUE(med.recovered);
  EXPECT_NEAR(med.v_lp, 18.0, 1e-7);
  EXPECT_DOUBLE_EQ(med.v_ip, 18.0);

  const auto cen = recovery_status(oracle::t1_instance({1, 0, 0, 0, 0}, 1));
  EXPECT_FALSE(cen.recovered);
  EXPECT_FALSE(cen.vertex_integral);
  EXPECT_GT(cen.gap_lp, 0.0);
  EXPECT_DOUBLE_EQ(cen.v_ip, 7.0);

  const auto all = recovery_status(oracle::t1_instance({1, 0.5, 0.2, 0.2, 0}, 5));
  EXPECT_TRUE(all.recovered);
  EXPECT_EQ(all.gap_lp, 0.0);
  EXPECT_NEAR(all.v_lp, 0.0, 1e-9);
  EXPECT_EQ(all.v_ip, 0.0);
}

TEST(RecoveryStatus, ReportInvariants) {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t m = 4 + rep % 5;
    const std::size_t p = 1 + rep % 3;
    const PointSet pts = oracle::random_planar(m, 3500 + rep);
    const Instance inst(pts.euclidean(), WeightVector(oracle::random_weights(rng, m)), p, pts);
    const auto r = recovery_status(inst);
    EXPECT_LE(r.v_lp, r.v_ip + 1e-7 * (1 + r.v_ip));
    EXPECT_EQ(r.recovered, values_match(r.v_ip, r.v_lp));
    if (r.vertex_integral) EXPECT_TRUE(r.recovered);
    EXPECT_GE(r.gap_lp, 0.0);
    EXPECT_LE(r.gap_lp, 1.0);
    EXPECT_EQ(r.lp.status, LpStatus::Optimal);
  }
}
