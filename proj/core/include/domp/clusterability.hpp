#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "domp/instance.hpp"

namespace domp {

struct DipResult {
  double dip = 0.0;  // in [1/(2n), 0.25]
  std::size_t n = 0;
  double modal_low = 0.0;
  double modal_high = 0.0;
};

/// Hartigan's dip: sup distance between the empirical CDF and the closest
/// unimodal CDF, via the convex minorant / concave majorant iteration.
/// Throws SizeError for fewer than two values, ParameterError for NaN/inf.
DipResult dip_statistic(std::span<const double> sample);

/// Monte Carlo p-value against the standard uniform null:
/// (1 + #{b : dip(U_b) >= dip(sample)}) / (B + 1). Replicate b draws from a
/// generator seeded by (seed, b), so the result does not depend on `jobs`.
double dip_pvalue(std::span<const double> sample, std::size_t replicates, std::uint64_t seed,
                  unsigned jobs = 1);

struct MdsResult {
  std::vector<double> coords;
  double eigenvalue = 0.0;  // leading eigenvalue before clamping
  std::size_t iterations = 0;
  bool clamped = false;     // eigenvalue was negative and replaced by 0
};

/// Classical one-dimensional MDS by power iteration on -1/2 J D^2 J.
/// Throws ConvergenceError after 10^4 iterations without convergence.
MdsResult mds_1d(const DistanceMatrix& dist);

enum class SampleMode { Auto, Distances, Mds };

SampleMode parse_sample_mode(const std::string& text);
std::string to_string(SampleMode mode);

/// Distances mode: upper-triangle entries. Mds mode: projected coordinates.
/// Auto picks distances up to `mds_threshold` points and MDS above.
std::vector<double> clusterability_sample(const DistanceMatrix& dist, SampleMode mode,
                                          std::size_t mds_threshold = 60);

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double prob);

enum class ClusterLabel { High, Low, Middle };
enum class LabelBasis { DipStatistic, DipPvalue };

std::string to_string(ClusterLabel label);
std::string to_string(LabelBasis basis);

struct DipEntry {
  std::string id;
  double dip = 0.0;
  double pvalue = 0.0;
};

/// Labels each entry against the 5% and 95% quantiles of the collection.
/// Dip basis: dip >= q95 is High, dip <= q05 is Low. P-value basis: p <= q05
/// is High, p >= q95 is Low. An entry meeting both tests is Middle.
std::vector<ClusterLabel> classify_collection(std::span<const DipEntry> entries, LabelBasis basis);

}  // namespace domp
