#include "domp/ordered_median.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "domp/error.hpp"

namespace domp {

SortPermutation SortPermutation::of(std::span<const double> d) {
  SortPermutation s;
  s.order_.resize(d.size());
  std::iota(s.order_.begin(), s.order_.end(), std::size_t{0});
  std::stable_sort(s.order_.begin(), s.order_.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  s.position_.resize(d.size());
  for (std::size_t r = 0; r < d.size(); ++r) s.position_[s.order_[r]] = r;
  return s;
}

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ParameterError("length mismatch: " + std::to_string(a) + " distances, " +
                         std::to_string(b) + " weights");
  }
}

}  // namespace

double om_evaluate(std::span<const double> d, std::span<const double> w) {
  check_lengths(d.size(), w.size());
  std::vector<double> sorted(d.begin(), d.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double total = 0.0;
  for (std::size_t r = 0; r < sorted.size(); ++r) total += w[r] * sorted[r];
  return total;
}

double om_evaluate(std::span<const double> d, const WeightVector& w) {
  return om_evaluate(d, w.values());
}

double om_telescoped(std::span<const double> d, const WeightVector& w) {
  check_lengths(d.size(), w.size());
  std::vector<double> sorted(d.begin(), d.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::vector<double> delta = w.deltas();
  double theta = 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    theta += sorted[r];
    total += delta[r] * theta;
  }
  return total;
}

double om_max_perm_bruteforce(std::span<const double> d, std::span<const double> w) {
  check_lengths(d.size(), w.size());
  if (d.size() > 8) {
    throw SizeError("permutation brute force is limited to 8 entries (got " +
                    std::to_string(d.size()) + ")");
  }
  std::vector<std::size_t> perm(d.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = 0.0;
  bool first = true;
  do {
    double v = 0.0;
    for (std::size_t r = 0; r < perm.size(); ++r) v += w[r] * d[perm[r]];
    if (first || v > best) best = v;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

CenterSolution closest_allocation(const DistanceMatrix& dist, std::vector<std::size_t> centers,
                                  std::span<const double> w) {
  if (centers.empty()) throw ParameterError("center set must be nonempty");
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  const std::size_t m = dist.size();
  for (std::size_t j : centers)
    if (j >= m) throw ParameterError("center index " + std::to_string(j) + " out of range");

  CenterSolution sol;
  sol.centers = std::move(centers);
  sol.assignment.resize(m);
  sol.distances.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t best = sol.centers.front();
    for (std::size_t j : sol.centers)
      if (dist(i, j) < dist(i, best)) best = j;
    sol.assignment[i] = best;
    sol.distances[i] = dist(i, best);
  }
  sol.value = om_evaluate(sol.distances, w);
  return sol;
}

double subadditivity_gap(std::span<const double> w, std::size_t s) {
  const std::size_t m = w.size();
  if (s + 1 >= m) {
    throw ParameterError("position " + std::to_string(s) + " needs a successor in a vector of length " +
                         std::to_string(m));
  }
  std::vector<double> c(m, 0.0);
  std::vector<double> d(m, 0.0);
  for (std::size_t r = 0; r < s; ++r) c[r] = d[r] = 1.0;
  c[s] = 1.0;
  d[s + 1] = 1.0;
  std::vector<double> sum(m);
  for (std::size_t r = 0; r < m; ++r) sum[r] = c[r] + d[r];
  return om_evaluate(sum, w) - om_evaluate(c, w) - om_evaluate(d, w);
}

}  // namespace domp
