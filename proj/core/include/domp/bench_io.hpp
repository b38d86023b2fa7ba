#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "domp/clusterability.hpp"
#include "domp/exact.hpp"
#include "domp/instance.hpp"

namespace domp {

/// Undirected weighted graph as read from a pmed file (0-based vertices).
struct EdgeGraph {
  struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    double cost = 0.0;
  };
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t declared_edges = 0;
  std::vector<Edge> edges;  // duplicates merged, minimum cost kept
};

/// Header `n edges p`, then `i j cost` triples with 1-based vertices and
/// positive integer costs; whitespace-separated, newline-agnostic.
EdgeGraph parse_pmed(std::istream& in, const std::string& source = "<stream>");
EdgeGraph parse_pmed_file(const std::string& path);

/// All-pairs shortest paths. Throws StructuralError on a disconnected graph.
DistanceMatrix floyd_warshall(const EdgeGraph& g);

struct BallParams {
  std::size_t m = 12;
  std::size_t clusters = 3;
  double radius = 1.0;
  double separation = 8.0;  // minimum distance between cluster centers
  std::size_t dim = 2;
  std::uint64_t seed = 1;
};

struct GeneratedInstance {
  PointSet points;
  DistanceMatrix dist;
  std::vector<std::size_t> cluster;  // per point; all zero for uniform draws
};

/// Points uniform in balls of the given radius around centers placed by
/// rejection sampling in a box of side 2 * separation * clusters^(1/dim).
/// Throws ParameterError when the centers cannot be placed.
GeneratedInstance generate_ball(const BallParams& params);

/// Points uniform in the unit cube.
GeneratedInstance generate_uniform(std::size_t m, std::size_t dim, std::uint64_t seed);

/// One instance of an experiment batch.
struct ExperimentInstance {
  std::string id;
  DistanceMatrix dist;
  std::optional<PointSet> points;
  std::string family;  // "ball", "uniform", "pmed", "file"
  double param = 0.0;  // separation / radius for ball instances
  std::size_t m_full = 0;
};

/// Prefix sub-instance on the first `m_prime` vertices.
ExperimentInstance pmed_instance(const std::string& id, const EdgeGraph& g, std::size_t m_prime);

struct ExperimentConfig {
  std::vector<WeightSpec> weights;
  std::vector<std::size_t> p_values;
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 1;
  bool timings = true;
  unsigned jobs = 1;
  SampleMode sample_mode = SampleMode::Auto;
  std::size_t mds_threshold = 60;
  RecoveryOptions recovery;
};

struct ExperimentRow {
  std::string id;
  std::size_t m = 0;
  std::size_t p = 0;
  std::string family;   // weight family
  std::string param;    // resolved k or gamma, empty otherwise
  std::string instance_family;
  double v_ip = 0.0;
  double v_lp = 0.0;
  double gap_lp = 0.0;
  double gap_lp_root = 0.0;
  bool recovered = false;
  bool vertex_integral = false;
  double cpu_enum = 0.0;
  double cpu_lp = 0.0;
  double dip = 0.0;
  double dip_pvalue = 0.0;
  std::string label_dip;
  std::string label_pvalue;
  bool free_of_equidistance = false;
  std::size_t m_full = 0;
  std::string error;  // empty on success
};

/// Fraction of runs finished within each time threshold.
struct ProfileSeries {
  std::string family;
  std::vector<double> thresholds;
  std::vector<double> fraction;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<ProfileSeries> profiles;
};

/// One row per (instance, weights, p) in that nesting order. A failing row
/// records its error and the batch continues.
ExperimentResult run_experiment(const std::vector<ExperimentInstance>& instances,
                                const ExperimentConfig& config);

/// Column names in output order.
const std::vector<std::string>& experiment_columns();

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_experiment_json(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_profile(std::ostream& out, const ProfileSeries& series);

/// %.9g formatting used by every report.
std::string format_number(double v);

}  // namespace domp
