#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "domp/instance.hpp"

namespace domp {

/// Descending sort order of a vector; ties keep ascending index order.
class SortPermutation {
 public:
  SortPermutation() = default;

  static SortPermutation of(std::span<const double> d);

  std::size_t size() const noexcept { return order_.size(); }
  /// Index of the element at sorted position r (0-based).
  std::size_t at(std::size_t r) const noexcept { return order_[r]; }
  /// Sorted position of element i (0-based).
  std::size_t position_of(std::size_t i) const noexcept { return position_[i]; }
  const std::vector<std::size_t>& order() const noexcept { return order_; }

 private:
  std::vector<std::size_t> order_;
  std::vector<std::size_t> position_;
};

/// sum_r w_r d_(r) with d sorted non-increasingly.
double om_evaluate(std::span<const double> d, std::span<const double> w);
double om_evaluate(std::span<const double> d, const WeightVector& w);

/// sum_r delta_r * theta_r(d), theta_r the sum of the r largest entries.
double om_telescoped(std::span<const double> d, const WeightVector& w);

/// Maximum of sum_r w_r d_{pi(r)} over all permutations pi. Throws SizeError
/// for more than 8 entries.
double om_max_perm_bruteforce(std::span<const double> d, std::span<const double> w);

/// Nearest-center allocation (lowest center index on ties) and its value.
CenterSolution closest_allocation(const DistanceMatrix& dist, std::vector<std::size_t> centers,
                                  std::span<const double> w);

/// OM(c + d) - OM(c) - OM(d) for the two 0/1 vectors that share ones on
/// positions [0, s) and differ by a one at s versus s + 1. Equals
/// w[s + 1] - w[s]; positive values witness non-convexity. Any real w.
double subadditivity_gap(std::span<const double> w, std::size_t s);

}  // namespace domp
