#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "domp/instance.hpp"
#include "domp/lp.hpp"
#include "domp/ordered_median.hpp"

namespace domp {

/// Dual values (alpha, omega) with a binary sorting permutation. beta is
/// implied: beta_ij = (alpha_i - w[pos(i)] d_ij)_+.
struct DualCertificate {
  std::vector<double> alpha;
  double omega = 0.0;
  SortPermutation sigma;

  double beta(const Instance& inst, std::size_t i, std::size_t j) const;
};

/// sum_i (alpha_i - w[pos(i)] d_ij)_+ with pos = sigma^-1.
double ordered_contribution(std::span<const double> alpha, const SortPermutation& sigma,
                            const DistanceMatrix& dist, const WeightVector& w, std::size_t j);

/// Worst slack per condition; nonnegative means satisfied. Conditions with
/// no instances report +inf.
struct CertificateVerdict {
  bool holds = false;
  bool strict = false;
  double equal_contribution = 0.0;  // -max |C(j) - C(j')| over centers
  double noncenter_bound = 0.0;     // min over non-centers i, centers j of C(j) - C(i)
  double assigned_cover = 0.0;      // min over i in G_j of alpha_i - w d_ij
  double unassigned_cap = 0.0;      // min over i outside G_j of w d_ij - alpha_i

  std::string describe() const;
};

/// Default strictness margin 1e-6 (1 + max d).
double certificate_margin(const Instance& inst);

/// Checks the four certificate conditions for `sol`. Equalities and the
/// non-strict inequalities are judged with tolerance 1e-9 (1 + w_1 max d);
/// `strict` additionally needs the three inequality blocks to clear `margin`.
CertificateVerdict verify_certificate(const Instance& inst, const CenterSolution& sol,
                                      const DualCertificate& cert, double margin);

struct CertificateSearch {
  bool feasible = false;
  std::optional<DualCertificate> certificate;
  CertificateVerdict verdict;
  LpStatus lp_status = LpStatus::Infeasible;
};

/// Looks for alpha, omega satisfying the conditions with sigma sorting
/// sol.distances. With `margin > 0` the inequality blocks are enforced with
/// that margin.
CertificateSearch search_certificate(const Instance& inst, const CenterSolution& sol,
                                     double margin = 0.0);

/// Single-center test: with sigma sorting the distances to j,
/// sum_t w[pos(t)] d_tj <= sum_t w[pos(t)] d_ti for every i.
bool check_single_center(const Instance& inst, std::size_t j);

enum class PredictionKind { NeverRecovers, MedianSingleRecovers, Unknown };

std::string to_string(PredictionKind kind);

struct Prediction {
  PredictionKind kind = PredictionKind::Unknown;
  /// Every item that fired, ascending (1..6).
  std::vector<int> items;
  std::string reason;
  bool free_of_equidistance = false;
  bool valid_metric = false;
  /// Empty for matrix-only instances.
  std::optional<bool> three_collinear;

  bool fired(int item) const;
};

/// Applies the six non-recovery / recovery items to the instance. Items
/// other than the single-median one need a free-of-equidistance metric with
/// p < m; the collinearity items need coordinates and m >= 3.
Prediction predict_non_recovery(const Instance& inst);

/// Componentwise sum; throws ParameterError on a length mismatch.
WeightVector conic_combine(const WeightVector& a, const WeightVector& b);

}  // namespace domp
