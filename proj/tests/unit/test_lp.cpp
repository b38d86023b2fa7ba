#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "domp/error.hpp"
#include "domp/lp.hpp"
#include "oracles.hpp"

using namespace domp;

TEST(SolveLp, SingleUpperRow) {
  LinearProgram lp;
  const auto x = lp.add_variable("x", -1.0);
  lp.add_row({{x, 1.0}}, Relation::LessEqual, 3.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.x[x], 3.0, 1e-12);
  EXPECT_NEAR(s.objective, -3.0, 1e-12);
  EXPECT_NEAR(s.duals[0], -1.0, 1e-12);
  EXPECT_TRUE(check_solution(lp, s).ok());
}

TEST(SolveLp, EqualityReturnsVertex) {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 1.0);
  const auto y = lp.add_variable("y", 1.0);
  lp.add_row({{x, 1.0}, {y, 1.0}}, Relation::Equal, 1.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
  const bool vertex = (std::abs(s.x[x] - 1) < 1e-12 && std::abs(s.x[y]) < 1e-12) ||
                      (std::abs(s.x[y] - 1) < 1e-12 && std::abs(s.x[x]) < 1e-12);
  EXPECT_TRUE(vertex);
  EXPECT_TRUE(s.integral[x] && s.integral[y]);
}

TEST(SolveLp, Infeasible) {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 0.0);
  lp.add_row({{x, 1.0}}, Relation::LessEqual, -1.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);

  LinearProgram lp2;
  const auto a = lp2.add_variable("a", 1.0, 0.0, 1.0);
  const auto b = lp2.add_variable("b", 1.0, 0.0, 1.0);
  lp2.add_row({{a, 1.0}, {b, 1.0}}, Relation::GreaterEqual, 3.0);
  EXPECT_EQ(solve_lp(lp2).status, LpStatus::Infeasible);
}

TEST(SolveLp, Unbounded) {
  LinearProgram lp;
  const auto x = lp.add_variable("x", -1.0);
  const auto y = lp.add_variable("y", 0.0);
  lp.add_row({{x, 1.0}, {y, -1.0}}, Relation::LessEqual, 1.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Unbounded);

  LinearProgram free_lp;
  free_lp.add_variable("f", 1.0, -kInf, kInf);
  EXPECT_EQ(solve_lp(free_lp).status, LpStatus::Unbounded);
}

TEST(SolveLp, FreeAndShiftedVariables) {
  // min u + 2v s.t. u + v >= 1, u - v <= 3, u free, -2 <= v <= 5.
  LinearProgram lp;
  const auto u = lp.add_variable("u", 1.0, -kInf, kInf);
  const auto v = lp.add_variable("v", 2.0, -2.0, 5.0);
  lp.add_row({{u, 1.0}, {v, 1.0}}, Relation::GreaterEqual, 1.0);
  lp.add_row({{u, 1.0}, {v, -1.0}}, Relation::LessEqual, 3.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  // Optimum at u - v = 3, u + v = 1: u = 2, v = -1, value 0.
  EXPECT_NEAR(s.x[u], 2.0, 1e-10);
  EXPECT_NEAR(s.x[v], -1.0, 1e-10);
  EXPECT_NEAR(s.objective, 0.0, 1e-10);
  EXPECT_TRUE(check_solution(lp, s).ok());
}

TEST(SolveLp, NegativeUpperBoundOnly) {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 1.0, -kInf, -2.0);
  lp.add_row({{x, 1.0}}, Relation::GreaterEqual, -7.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.x[x], -7.0, 1e-12);
}

TEST(SolveLp, DegenerateCyclingExample) {
  // Beale's cycling example; Dantzig pricing alone can cycle here.
  LinearProgram lp;
  const auto x4 = lp.add_variable("x4", -0.75);
  const auto x5 = lp.add_variable("x5", 150.0);
  const auto x6 = lp.add_variable("x6", -0.02);
  const auto x7 = lp.add_variable("x7", 6.0);
  lp.add_row({{x4, 0.25}, {x5, -60.0}, {x6, -0.04}, {x7, 9.0}}, Relation::LessEqual, 0.0);
  lp.add_row({{x4, 0.5}, {x5, -90.0}, {x6, -0.02}, {x7, 3.0}}, Relation::LessEqual, 0.0);
  lp.add_row({{x6, 1.0}}, Relation::LessEqual, 1.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_NEAR(s.objective, -0.05, 1e-10);
  EXPECT_TRUE(check_solution(lp, s).ok());
}

TEST(SolveLp, IterationCapThrows) {
  LinearProgram lp;
  std::vector<LinearTerm> t;
  for (int j = 0; j < 6; ++j) t.push_back({lp.add_variable("x", -1.0 - j), 1.0 + j});
  lp.add_row(t, Relation::LessEqual, 10.0);
  lp.add_row({{0, 1.0}, {5, 1.0}}, Relation::GreaterEqual, 1.0);
  SimplexOptions opt;
  opt.max_iterations = 1;
  EXPECT_THROW(solve_lp(lp, opt), ConvergenceError);
}

TEST(CheckSolution, ReportsConstructedViolations) {
  LinearProgram lp;
  const auto x = lp.add_variable("x", -1.0);
  const auto y = lp.add_variable("y", -1.0);
  lp.add_row({{x, 1.0}, {y, 2.0}}, Relation::LessEqual, 4.0);
  lp.add_row({{x, 3.0}, {y, 1.0}}, Relation::LessEqual, 6.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::Optimal);
  EXPECT_TRUE(check_solution(lp, s).ok());

  auto bumped = s;
  bumped.x[x] += 0.1;
  EXPECT_NEAR(check_solution(lp, bumped).primal_residual, 0.3, 1e-9);

  auto zeroed = s;
  std::fill(zeroed.duals.begin(), zeroed.duals.end(), 0.0);
  EXPECT_NEAR(check_solution(lp, zeroed).duality_gap, std::abs(s.objective), 1e-9);
}

TEST(SolveLp, DeterministicAndVertex) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int rep = 0; rep < 20; ++rep) {
    LinearProgram lp;
    const std::size_t n = 6;
    for (std::size_t j = 0; j < n; ++j) lp.add_variable("x", coef(rng), 0.0, 4.0);
    for (int i = 0; i < 4; ++i) {
      std::vector<LinearTerm> t;
      for (std::size_t j = 0; j < n; ++j) t.push_back({j, static_cast<double>(coef(rng))});
      lp.add_row(t, Relation::LessEqual, 10.0);
    }
    const auto a = solve_lp(lp);
    const auto b = solve_lp(lp);
    ASSERT_EQ(a.status, LpStatus::Optimal);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.basis, b.basis);
    // Structural columns plus one slack per row; at most `rows` are basic.
    std::size_t basic_structural = 0;
    for (bool flag : a.basic) basic_structural += flag;
    EXPECT_LE(basic_structural, lp.num_rows());
    EXPECT_TRUE(check_solution(lp, a).ok());
  }
}

TEST(SolveLp, MatchesRationalVertexEnumeration) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> ubd(1, 8);
  std::uniform_int_distribution<int> relpick(0, 5);
  int solved = 0;
  for (int rep = 0; rep < 200; ++rep) {
    oracle::IntegerLp p;
    const std::size_t n = rep < 100 ? 3 : 2;
    const std::size_t rows = rep < 100 ? 3 + rep % 10 : 10 + rep % 21;
    std::vector<long> x0(n);
    for (std::size_t j = 0; j < n; ++j) {
      p.c.push_back(coef(rng));
      p.ub.push_back(ubd(rng));
      x0[j] = std::uniform_int_distribution<long>(0, p.ub[j])(rng);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<long> a(n);
      long ax = 0;
      for (std::size_t j = 0; j < n; ++j) ax += (a[j] = coef(rng)) * x0[j];
      const int r = relpick(rng);
      p.a.push_back(a);
      if (r == 0) {
        p.rel.push_back(Relation::Equal);
        p.b.push_back(ax);
      } else if (r <= 2) {
        p.rel.push_back(Relation::GreaterEqual);
        p.b.push_back(ax - std::uniform_int_distribution<long>(0, 4)(rng));
      } else {
        p.rel.push_back(Relation::LessEqual);
        p.b.push_back(ax + std::uniform_int_distribution<long>(0, 4)(rng));
      }
    }
    const auto ref = oracle::vertex_enumeration(p);
    const LinearProgram lp = p.to_lp();
    const auto s = solve_lp(lp);
    ASSERT_TRUE(ref.has_value()) << "constructed LP must be feasible";
    ASSERT_EQ(s.status, LpStatus::Optimal) << "rep " << rep;
    EXPECT_NEAR(s.objective, static_cast<double>(*ref), 1e-8) << "rep " << rep;
    const auto k = check_solution(lp, s);
    EXPECT_TRUE(k.ok()) << "rep " << rep << " primal " << k.primal_residual << " dual " << k.dual_residual
                        << " cs " << k.complementarity << " gap " << k.duality_gap;
    ++solved;
  }
  EXPECT_EQ(solved, 200);
}

TEST(SolveLp, InfeasibleAgreesWithEnumeration) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coef(-4, 4);
  int infeasible = 0;
  for (int rep = 0; rep < 100; ++rep) {
    oracle::IntegerLp p;
    const std::size_t n = 2;
    for (std::size_t j = 0; j < n; ++j) {
      p.c.push_back(coef(rng));
      p.ub.push_back(3);
    }
    for (int i = 0; i < 5; ++i) {
      p.a.push_back({coef(rng), coef(rng)});
      p.rel.push_back(i % 2 ? Relation::LessEqual : Relation::GreaterEqual);
      p.b.push_back(coef(rng) * 2);
    }
    const auto ref = oracle::vertex_enumeration(p);
    const auto s = solve_lp(p.to_lp());
    EXPECT_EQ(ref.has_value(), s.status == LpStatus::Optimal) << "rep " << rep;
    if (ref && s.status == LpStatus::Optimal) EXPECT_NEAR(s.objective, static_cast<double>(*ref), 1e-8);
    infeasible += !ref.has_value();
  }
  EXPECT_GT(infeasible, 0);
}

TEST(WriteLpText, ListsRowsAndBounds) {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 2.0, 0.0, 1.0);
  const auto y = lp.add_variable("y", -1.0, -kInf, kInf);
  lp.add_row({{x, 1.0}, {y, -1.0}}, Relation::GreaterEqual, 0.5, "r1");
  std::ostringstream os;
  write_lp_text(os, lp, "demo");
  const std::string text = os.str();
  EXPECT_NE(text.find("demo"), std::string::npos);
  EXPECT_NE(text.find("r1"), std::string::npos);
  EXPECT_NE(text.find(">="), std::string::npos);
  EXPECT_NE(text.find("-inf <= y <= inf"), std::string::npos);
  EXPECT_NE(text.find("0 <= x <= 1"), std::string::npos);
}
