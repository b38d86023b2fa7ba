#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "domp/bench_io.hpp"
#include "domp/error.hpp"
#include "oracles.hpp"

using namespace domp;

namespace {

EdgeGraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_pmed(in, "test");
}

/// Line number reported by the parse error, or -1 when parsing succeeds.
long error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return static_cast<long>(e.line());
  }
  return -1;
}

std::vector<ExperimentInstance> small_batch(std::size_t count) {
  std::vector<ExperimentInstance> out;
  for (std::size_t k = 0; k < count; ++k) {
    BallParams bp;
    bp.m = 8;
    bp.clusters = 2;
    bp.radius = 0.5;
    bp.separation = 6.0;
    bp.seed = 100 + k;
    const GeneratedInstance g = generate_ball(bp);
    out.push_back({"ball" + std::to_string(k), g.dist, g.points, "ball", 12.0, 8});
  }
  return out;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.weights = {WeightSpec::median(), WeightSpec::center()};
  cfg.p_values = {2, 3};
  cfg.bootstrap = 100;
  cfg.seed = 3;
  cfg.timings = false;
  return cfg;
}

}  // namespace

TEST(ParsePmed, Examples) {
  const EdgeGraph g = parse("3 2 1\n1 2 5\n2 3 7\n");
  EXPECT_EQ(g.n, 3u);
  EXPECT_EQ(g.p, 1u);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0].a, 0u);
  EXPECT_EQ(g.edges[0].b, 1u);
  EXPECT_EQ(g.edges[0].cost, 5.0);
  EXPECT_EQ(floyd_warshall(g)(0, 2), 12.0);
  EXPECT_EQ(parse("3 2 1 1 2 5 2 3 7").edges.size(), 2u);
}

TEST(ParsePmed, Errors) {
  EXPECT_EQ(error_line("3 2 1\n1 2 5\n0 2 5\n"), 3);
  EXPECT_GE(error_line("3 2 1\n1 2 5\n"), 2);
  EXPECT_EQ(error_line("3 2 1\n1 2 5\n2 4 1\n"), 3);
  EXPECT_EQ(error_line("3 1 1\n1 2 -5\n"), 2);
  EXPECT_EQ(error_line("3 1 1\n1 2 x\n"), 2);
  EXPECT_EQ(error_line("3 1 1\n1 2 5\n9 9 9\n"), 3);
  EXPECT_NE(error_line(""), -1);
  EXPECT_THROW(parse_pmed_file("/nonexistent/pmed.txt"), Error);
}

TEST(ParsePmed, DuplicateKeepsMinimum) {
  const EdgeGraph g = parse("3 3 1\n1 2 5\n2 3 7\n2 1 4\n");
  EXPECT_EQ(g.declared_edges, 3u);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(floyd_warshall(g)(0, 1), 4.0);
  const EdgeGraph h = parse("3 3 1\n1 2 5\n2 3 7\n2 1 9\n");
  EXPECT_EQ(floyd_warshall(h)(0, 1), 5.0);
}

TEST(FloydWarshall, Examples) {
  const DistanceMatrix tri = floyd_warshall(parse("3 3 1\n1 2 1\n2 3 1\n1 3 5\n"));
  EXPECT_EQ(tri(0, 2), 2.0);
  EXPECT_EQ(tri(2, 0), 2.0);
  EXPECT_EQ(floyd_warshall(parse("2 1 1\n1 2 5\n")), DistanceMatrix::from_rows({{0, 5}, {5, 0}}));
  EXPECT_THROW(floyd_warshall(parse("4 2 1\n1 2 1\n3 4 1\n")), StructuralError);
}

TEST(Pmed1, FixtureIngestion) {
  const EdgeGraph g = parse_pmed_file(std::string(DOMP_FIXTURES) + "/pmed1.txt");
  EXPECT_EQ(g.n, 100u);
  EXPECT_EQ(g.p, 5u);
  EXPECT_EQ(g.declared_edges, 200u);
  const DistanceMatrix d = floyd_warshall(g);
  EXPECT_TRUE(validate_metric(d).ok());
  const ExperimentInstance sub = pmed_instance("pmed1", g, 20);
  EXPECT_EQ(sub.dist.size(), 20u);
  EXPECT_EQ(sub.m_full, 100u);
  EXPECT_EQ(sub.family, "pmed");
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j) EXPECT_EQ(sub.dist(i, j), d(i, j));
}

TEST(GenerateBall, SeparatedClusters) {
  BallParams bp;
  bp.m = 12;
  bp.clusters = 3;
  bp.radius = 0.1;
  bp.separation = 10.0;
  bp.seed = 7;
  const GeneratedInstance g = generate_ball(bp);
  ASSERT_EQ(g.points.size(), 12u);
  double within = 0.0, between = INFINITY;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i + 1; j < 12; ++j) {
      if (g.cluster[i] == g.cluster[j]) within = std::max(within, g.dist(i, j));
      else between = std::min(between, g.dist(i, j));
    }
  EXPECT_LT(within, between);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(std::count(g.cluster.begin(), g.cluster.end(), c), 4);
  EXPECT_EQ(generate_ball(bp).dist, g.dist);
}

TEST(GenerateBall, SeparationPropertyAndDegenerateCase) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    BallParams bp;
    bp.m = 7 + seed % 9;
    bp.clusters = 2 + seed % 3;
    bp.radius = 0.3 + 0.1 * (seed % 4);
    bp.separation = 4.0 * bp.radius * (1.05 + 0.1 * (seed % 3));
    bp.dim = 1 + seed % 3;
    bp.seed = seed;
    const GeneratedInstance g = generate_ball(bp);
    EXPECT_TRUE(validate_metric(g.dist).ok());
    double within = 0.0, between = INFINITY;
    for (std::size_t i = 0; i < bp.m; ++i)
      for (std::size_t j = i + 1; j < bp.m; ++j) {
        if (g.cluster[i] == g.cluster[j]) within = std::max(within, g.dist(i, j));
        else between = std::min(between, g.dist(i, j));
      }
    EXPECT_LT(within, between) << "seed " << seed;
  }
  BallParams blob;
  blob.separation = 0.0;
  EXPECT_EQ(generate_ball(blob).points.size(), 12u);
  BallParams bad;
  bad.separation = -1.0;
  EXPECT_THROW(generate_ball(bad), ParameterError);
}

TEST(GenerateUniform, Examples) {
  const GeneratedInstance two = generate_uniform(2, 2, 1);
  EXPECT_GT(two.dist(0, 1), 0.0);
  EXPECT_NE(generate_uniform(6, 2, 1).dist, generate_uniform(6, 2, 2).dist);
  EXPECT_EQ(generate_uniform(6, 2, 1).dist, generate_uniform(6, 2, 1).dist);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GeneratedInstance g = generate_uniform(2 + seed % 19, 2, seed);
    EXPECT_TRUE(is_free_of_equidistance(g.dist)) << "seed " << seed;
    for (double c : g.points.coords()) {
      EXPECT_GE(c, 0.0);
      EXPECT_LT(c, 1.0);
    }
  }
  EXPECT_THROW(generate_uniform(1, 2, 1), ParameterError);
}

TEST(FormatNumber, NineSignificantDigits) {
  EXPECT_EQ(format_number(18.0), "18");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1234567890.0), "1.23456789e+09");
}

TEST(RunExperiment, RowCountOrderAndOutcomes) {
  const auto res = run_experiment(small_batch(5), small_config());
  ASSERT_EQ(res.rows.size(), 20u);
  EXPECT_EQ(res.rows[0].id, "ball0");
  EXPECT_EQ(res.rows[0].family, "median");
  EXPECT_EQ(res.rows[0].p, 2u);
  EXPECT_EQ(res.rows[1].p, 3u);
  EXPECT_EQ(res.rows[2].family, "center");
  EXPECT_EQ(res.rows[4].id, "ball1");
  for (const auto& r : res.rows) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_GE(r.gap_lp, 0.0);
    EXPECT_LE(r.gap_lp, 1.0);
    EXPECT_EQ(r.gap_lp_root, r.gap_lp);
    EXPECT_EQ(r.recovered, r.gap_lp <= 1e-7);
    EXPECT_EQ(r.cpu_enum, 0.0);
    EXPECT_EQ(r.m, 8u);
    if (r.family == "median" && r.p == 2) EXPECT_TRUE(r.recovered) << r.id;
    if (r.family == "center" && r.free_of_equidistance) EXPECT_FALSE(r.recovered) << r.id;
  }
  ASSERT_EQ(res.profiles.size(), 2u);
  EXPECT_EQ(res.profiles[0].family, "median");
  EXPECT_EQ(res.profiles[0].thresholds.size(), 17u);
  EXPECT_EQ(res.profiles[0].fraction.back(), 1.0);
}

TEST(RunExperiment, ByteIdenticalOutput) {
  auto cfg = small_config();
  const auto a = run_experiment(small_batch(3), cfg);
  cfg.jobs = 3;
  const auto b = run_experiment(small_batch(3), cfg);
  std::ostringstream ca, cb, ja, jb;
  write_experiment_csv(ca, a.rows);
  write_experiment_csv(cb, b.rows);
  write_experiment_json(ja, a.rows);
  write_experiment_json(jb, b.rows);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(ja.str(), jb.str());
  const std::string header = ca.str().substr(0, ca.str().find('\n'));
  std::string expected;
  for (const auto& c : experiment_columns()) expected += (expected.empty() ? "" : ",") + c;
  EXPECT_EQ(header, expected);
  EXPECT_EQ(experiment_columns().size(), 21u);
}

TEST(RunExperiment, FailuresStayInRow) {
  auto batch = small_batch(2);
  // The second instance is too large for the enumeration guard at p = 3.
  const GeneratedInstance big = generate_uniform(400, 2, 4);
  batch[1] = {"big", big.dist, big.points, "uniform", 0.0, 400};
  auto cfg = small_config();
  cfg.weights = {WeightSpec::median()};
  cfg.p_values = {3};
  cfg.recovery.enumeration.max_subsets = 1000;
  const auto res = run_experiment(batch, cfg);
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_TRUE(res.rows[0].error.empty());
  EXPECT_FALSE(res.rows[1].error.empty());
  EXPECT_TRUE(std::isnan(res.rows[1].v_ip));
  std::ostringstream csv;
  write_experiment_csv(csv, res.rows);
  EXPECT_NE(csv.str().find("big,400,3,median"), std::string::npos);
}

TEST(WriteProfile, Format) {
  ProfileSeries s{"median", {0.1, 1.0}, {0.5, 1.0}};
  std::ostringstream out;
  write_profile(out, s);
  EXPECT_EQ(out.str(), "threshold_seconds,fraction_solved\n0.1,0.5\n1,1\n");
}
