#include <gtest/gtest.h>

#include <map>
#include <random>

#include "domp/error.hpp"
#include "domp/exact.hpp"
#include "domp/formulations.hpp"
#include "domp/ordered_median.hpp"
#include "oracles.hpp"

using namespace domp;

namespace {

double term_coef(const LinearRow& row, std::size_t var) {
  double c = 0.0;
  for (const auto& t : row.terms)
    if (t.var == var) c += t.coef;
  return c;
}

bool feasible(const LinearProgram& lp, const std::vector<double>& x, double tol = 1e-9) {
  for (std::size_t j = 0; j < lp.num_variables(); ++j)
    if (x[j] < lp.lower(j) - tol || x[j] > lp.upper(j) + tol) return false;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const double a = lp.row_activity(i, x);
    const auto& r = lp.row(i);
    const double slack = tol * (1.0 + std::abs(r.rhs));
    if (r.rel == Relation::LessEqual && a > r.rhs + slack) return false;
    if (r.rel == Relation::GreaterEqual && a < r.rhs - slack) return false;
    if (r.rel == Relation::Equal && std::abs(a - r.rhs) > slack) return false;
  }
  return true;
}

std::vector<std::size_t> random_centers(std::mt19937_64& rng, std::size_t m, std::size_t p) {
  std::vector<std::size_t> all(m);
  for (std::size_t k = 0; k < m; ++k) all[k] = k;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(p);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

TEST(BuildBep, Dimensions) {
  const Instance inst = oracle::t1_instance({1, 1, 1, 1, 1}, 2);
  const DompModel model = build_bep(inst);
  EXPECT_EQ(model.lp.num_rows(), 56u);
  EXPECT_EQ(model.lp.num_variables(), 40u);
  EXPECT_EQ(model.lp.var_name(model.y(2)), "y_3");
  EXPECT_EQ(model.lp.var_name(model.z(1, 4)), "z_2_5");
  EXPECT_EQ(model.lp.var_name(model.u(0)), "u_1");
  EXPECT_EQ(model.lp.var_name(model.v(3)), "v_4");
  EXPECT_EQ(model.lp.lower(model.u(0)), -kInf);
  EXPECT_EQ(model.lp.upper(model.y(0)), 1.0);
  EXPECT_EQ(model.lp.upper(model.z(0, 0)), 1.0);
  EXPECT_EQ(model.integer_columns().size(), 30u);
  EXPECT_EQ(model.first_closest_row, model.lp.num_rows());
}

TEST(BuildBep, SortingRowCoefficients) {
  const Instance inst = oracle::t1_instance({1, 0.5, 0.5, 0.25, 0}, 2);
  const DompModel model = build_bep(inst);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t r = 0; r < 5; ++r) {
      const LinearRow& row = model.lp.row(model.sorting_row[i * 5 + r]);
      EXPECT_EQ(row.rel, Relation::GreaterEqual);
      EXPECT_EQ(row.rhs, 0.0);
      EXPECT_EQ(term_coef(row, model.u(i)), 1.0);
      EXPECT_EQ(term_coef(row, model.v(r)), 1.0);
      for (std::size_t j = 0; j < 5; ++j)
        EXPECT_EQ(term_coef(row, model.z(i, j)), -inst.weights()[r] * inst.dist()(i, j));
    }
  }
}

TEST(BuildBep, DropZeroWeightRows) {
  const Instance inst = oracle::t1_instance({1, 1, 0, 0, 0}, 2);
  BepOptions opt;
  opt.drop_zero_weight_rows = true;
  const DompModel dropped = build_bep(inst, opt);
  EXPECT_EQ(dropped.lp.num_rows(), 56u - 15u);
  EXPECT_NEAR(solve_lp(dropped.lp).objective, solve_lp(build_bep(inst).lp).objective, 1e-9);
}

TEST(BuildBep, AllCentersHasZeroOptimum) {
  const Instance inst = oracle::t1_instance({1, 1, 1, 1, 1}, 5);
  const DompModel model = build_bep(inst);
  const LpSolution s = solve_lp(model.lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 0.0, 1e-9);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(s.x[model.y(j)], 1.0, 1e-9);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(s.x[model.z(i, i)], 1.0, 1e-9);
}

TEST(BuildOt, CenterObjective) {
  const Instance inst = oracle::t1_instance({1, 0, 0, 0, 0}, 1);
  const DompModel model = build_ot(inst);
  EXPECT_EQ(model.lp.num_rows(), 5u + 25u + 1u + 25u);
  EXPECT_EQ(model.lp.var_name(model.t(1)), "t_2");
  EXPECT_EQ(model.lp.var_name(model.q(0, 1)), "q_1_2");
  // Only delta_1 = 1 is nonzero: objective t_1 + sum_i q_i1.
  for (std::size_t s = 0; s < 5; ++s) {
    EXPECT_EQ(model.lp.cost(model.t(s)), s == 0 ? 1.0 : 0.0);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(model.lp.cost(model.q(i, s)), s == 0 ? 1.0 : 0.0);
  }
  EXPECT_EQ(model.lp.lower(model.t(0)), -kInf);
  EXPECT_EQ(model.lp.lower(model.q(0, 0)), 0.0);
}

TEST(BuildOt, MedianObjective) {
  const Instance inst = oracle::t1_instance({1, 1, 1, 1, 1}, 1);
  const DompModel model = build_ot(inst);
  EXPECT_EQ(model.lp.cost(model.t(4)), 5.0);
  EXPECT_EQ(model.lp.cost(model.q(2, 4)), 1.0);
  EXPECT_EQ(model.lp.cost(model.t(0)), 0.0);
  const LpSolution s = solve_lp(model.lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 18.0, 1e-9);
}

TEST(ClosestAssignment, HandExample) {
  const Instance inst(DistanceMatrix::from_rows({{0, 2, 5}, {2, 0, 4}, {5, 4, 0}}), WeightVector({1, 1, 1}), 1);
  const auto rows = closest_assignment_rows(inst);
  ASSERT_EQ(rows.size(), 9u);
  // Row (i = 1, j = 2): y_1 + z_12 + z_13 <= 1, and z_11 carries Q = 0.
  const LinearRow& r = rows[0 * 3 + 1];
  EXPECT_EQ(r.rel, Relation::LessEqual);
  EXPECT_EQ(r.rhs, 1.0);
  const std::size_t m = 3;
  EXPECT_EQ(term_coef(r, 0), 1.0);
  EXPECT_EQ(term_coef(r, 1), 0.0);
  EXPECT_EQ(term_coef(r, m + 0), 0.0);
  EXPECT_EQ(term_coef(r, m + 1), 1.0);
  EXPECT_EQ(term_coef(r, m + 2), 1.0);
  // Row (1, 1): nothing is closer than the point itself, so P = 0.
  EXPECT_EQ(rows[0].rhs, 0.0);
  EXPECT_TRUE(rows[0].terms.empty());
}

TEST(ClosestAssignment, ClosestAllocationsSatisfyRows) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t m = 5 + rep % 5;
    const std::size_t p = 1 + rep % 3;
    const PointSet pts = oracle::random_planar(m, 500 + rep);
    const Instance inst(pts.euclidean(), WeightVector(oracle::random_weights(rng, m)), p, pts);
    BepOptions opt;
    opt.closest_assignment = true;
    const DompModel model = build_bep(inst, opt);
    EXPECT_EQ(model.lp.num_rows(), model.first_closest_row + m * m);
    const CenterSolution sol = closest_allocation(inst.dist(), random_centers(rng, m, p), inst.weights().values());
    EXPECT_TRUE(feasible(model.lp, embed_integral(inst, sol, model))) << "rep " << rep;
  }
}

TEST(ClosestAssignment, FarAllocationIsCut) {
  // Point 0 allocated to the farther of two open centers.
  const Instance inst(DistanceMatrix::from_rows({{0, 2, 5}, {2, 0, 4}, {5, 4, 0}}), WeightVector({1, 1, 1}), 2);
  const DompModel model = build_bep(inst, {true, true, false});
  std::vector<double> x(model.lp.num_variables(), 0.0);
  x[model.y(1)] = x[model.y(2)] = 1.0;
  x[model.z(0, 2)] = x[model.z(1, 1)] = x[model.z(2, 2)] = 1.0;
  bool violated = false;
  for (std::size_t i = model.first_closest_row; i < model.lp.num_rows(); ++i)
    violated |= model.lp.row_activity(i, x) > model.lp.row(i).rhs + 1e-12;
  EXPECT_TRUE(violated);
}

TEST(EmbedIntegral, T1Examples) {
  const Instance med = oracle::t1_instance({1, 1, 1, 1, 1}, 1);
  const DompModel mm = build_bep(med);
  const auto x = embed_integral(med, closest_allocation(med.dist(), {2}, med.weights().values()), mm);
  EXPECT_NEAR(mm.lp.objective_at(x), 18.0, 1e-9);
  EXPECT_TRUE(fractionality_report(mm, x).integral);

  const Instance cen = oracle::t1_instance({1, 0, 0, 0, 0}, 1);
  const DompModel cm = build_bep(cen);
  const auto xc = embed_integral(cen, closest_allocation(cen.dist(), {3}, cen.weights().values()), cm);
  EXPECT_NEAR(cm.lp.objective_at(xc), 7.0, 1e-9);

  const Instance all = oracle::t1_instance({1, 0.5, 0.5, 0, 0}, 5);
  const DompModel am = build_bep(all);
  const auto xa = embed_integral(all, closest_allocation(all.dist(), {0, 1, 2, 3, 4}, all.weights().values()), am);
  EXPECT_NEAR(am.lp.objective_at(xa), 0.0, 1e-12);
  EXPECT_THROW(embed_integral(med, closest_allocation(med.dist(), {2}, med.weights().values()), build_ot(med)),
               ParameterError);
}

TEST(EmbedIntegral, FeasibleAndMatchesObjective) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t m = 4 + rep % 6;
    const std::size_t p = 1 + rep % 3;
    const PointSet pts = oracle::random_planar(m, 900 + rep);
    const Instance inst(pts.euclidean(), WeightVector(oracle::random_weights(rng, m)), p, pts);
    const DompModel model = build_bep(inst);
    const CenterSolution sol = closest_allocation(inst.dist(), random_centers(rng, m, p), inst.weights().values());
    const auto x = embed_integral(inst, sol, model);
    EXPECT_TRUE(feasible(model.lp, x));
    EXPECT_NEAR(model.lp.objective_at(x), oracle::sorted_dot(sol.distances, std::vector<double>(
                                                                 inst.weights().values().begin(),
                                                                 inst.weights().values().end())),
                1e-9 * (1 + sol.value));
  }
}

TEST(FractionalityReport, FractionalY) {
  const Instance inst(PointSet(1, {0, 1, 5}).euclidean(), WeightVector({1, 1, 1}), 2);
  const DompModel model = build_bep(inst);
  std::vector<double> x(model.lp.num_variables(), 0.0);
  x[model.y(0)] = 0.5;
  x[model.y(1)] = 0.5;
  x[model.y(2)] = 1.0;
  const auto rep = fractionality_report(model, x);
  EXPECT_FALSE(rep.integral);
  EXPECT_EQ(rep.fractional_y, (std::vector<std::size_t>{0, 1}));
  EXPECT_DOUBLE_EQ(rep.max_y_fraction, 0.5);
}

TEST(FractionalityReport, CenterRelaxationIsFractional) {
  const Instance inst = oracle::t1_instance({1, 0, 0, 0, 0}, 1);
  const DompModel model = build_bep(inst);
  const LpSolution s = solve_lp(model.lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_FALSE(fractionality_report(model, s).integral);
}

TEST(Relaxations, BepEqualsOtAndBoundsOptimum) {
  std::mt19937_64 rng(10);
  const std::vector<WeightSpec> families{WeightSpec::median(), WeightSpec::center(), WeightSpec::ksum(2),
                                         WeightSpec::centdian(0.3)};
  for (int rep = 0; rep < 24; ++rep) {
    const std::size_t m = 5 + rep % 4;
    const std::size_t p = 1 + rep % 3;
    const PointSet pts = oracle::random_planar(m, 1300 + rep);
    const Instance inst(pts.euclidean(), make_weights(families[rep % 4], m), p, pts);
    const LpSolution a = solve_lp(build_bep(inst).lp);
    const LpSolution b = solve_lp(build_ot(inst).lp);
    ASSERT_EQ(a.status, LpStatus::Optimal);
    ASSERT_EQ(b.status, LpStatus::Optimal);
    EXPECT_NEAR(a.objective, b.objective, 1e-6 * (1 + std::abs(a.objective)));
    const double opt = solve_enumeration(inst).value;
    EXPECT_LE(a.objective, opt + 1e-7 * (1 + opt));
    EXPECT_TRUE(check_solution(build_bep(inst).lp, a).ok());
  }
}

TEST(BuildBep, DropZeroWeightRowsKeepsValueAndEmbedding) {
  std::mt19937_64 rng(14);
  BepOptions opt;
  opt.drop_zero_weight_rows = true;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t m = 5 + rep % 3;
    const PointSet pts = oracle::random_planar(m, 1700 + rep);
    auto w = oracle::random_weights(rng, m);
    w.back() = 0.0;
    const Instance inst(pts.euclidean(), WeightVector(w), 1 + rep % 2, pts);
    const DompModel dropped = build_bep(inst, opt);
    const LpSolution a = solve_lp(dropped.lp);
    const LpSolution b = solve_lp(build_bep(inst).lp);
    ASSERT_EQ(a.status, LpStatus::Optimal);
    EXPECT_NEAR(a.objective, b.objective, 1e-7 * (1 + b.objective));
    const CenterSolution sol = closest_allocation(inst.dist(), random_centers(rng, m, inst.p()), w);
    EXPECT_TRUE(feasible(dropped.lp, embed_integral(inst, sol, dropped)));
  }
}
