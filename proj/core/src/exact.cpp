#include "domp/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "domp/error.hpp"
#include "domp/ordered_median.hpp"

namespace domp {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // r * num / i is exact at every step; guard the multiplication.
    if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    r = r * num / i;
  }
  return r;
}

namespace {

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> centers;
};

bool better(double v, const std::vector<std::size_t>& c, const Best& b) {
  if (v < b.value) return true;
  return v == b.value && (b.centers.empty() || c < b.centers);
}

// Enumerates subsets whose smallest element is `first`, in lexicographic order.
Best search_first(const Instance& inst, std::size_t first) {
  const std::size_t m = inst.size();
  const std::size_t p = inst.p();
  const DistanceMatrix& d = inst.dist();
  auto w = inst.weights().values();
  Best best;
  if (first + p > m) return best;

  std::vector<std::size_t> comb(p);
  for (std::size_t k = 0; k < p; ++k) comb[k] = first + k;
  std::vector<double> dist(m);
  std::vector<double> sorted(m);
  for (;;) {
    for (std::size_t i = 0; i < m; ++i) {
      double v = d(i, comb[0]);
      for (std::size_t k = 1; k < p; ++k) v = std::min(v, d(i, comb[k]));
      dist[i] = v;
    }
    sorted = dist;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double value = 0.0;
    for (std::size_t r = 0; r < m; ++r) value += w[r] * sorted[r];
    if (better(value, comb, best)) {
      best.value = value;
      best.centers = comb;
    }
    // Advance positions 1..p-1; position 0 stays at `first`.
    std::size_t k = p - 1;
    while (k >= 1 && comb[k] == m - p + k) --k;
    if (k == 0) break;
    ++comb[k];
    for (std::size_t l = k + 1; l < p; ++l) comb[l] = comb[l - 1] + 1;
  }
  return best;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CenterSolution solve_enumeration(const Instance& inst, const EnumerationOptions& options) {
  const std::size_t m = inst.size();
  const std::size_t p = inst.p();
  const std::uint64_t count = binomial(m, p);
  if (count > options.max_subsets) {
    throw SizeError("enumeration would visit C(" + std::to_string(m) + "," + std::to_string(p) + ") = " +
                    std::to_string(count) + " subsets, above the limit of " +
                    std::to_string(options.max_subsets) + "; use a smaller instance");
  }

  std::vector<Best> partial(m - p + 1);
  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    for (std::size_t f = 0; f < partial.size(); ++f) partial[f] = search_first(inst, f);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t f = t; f < partial.size(); f += jobs) partial[f] = search_first(inst, f);
      });
    }
    for (auto& th : pool) th.join();
  }

  Best best;
  for (const Best& b : partial)
    if (!b.centers.empty() && better(b.value, b.centers, best)) best = b;
  if (best.centers.empty()) throw InternalError("enumeration found no feasible center set");
  return closest_allocation(inst.dist(), best.centers, inst.weights().values());
}

double lp_gap(double v_ip, double v_lp) {
  if (v_ip == 0.0) return 0.0;
  return std::clamp((v_ip - v_lp) / v_ip, 0.0, 1.0);
}

bool values_match(double v_ip, double v_lp) {
  return std::abs(v_ip - v_lp) <= 1e-7 * (1.0 + std::abs(v_ip));
}

RecoveryReport recovery_status(const Instance& inst, const RecoveryOptions& options) {
  RecoveryReport rep;
  auto t0 = std::chrono::steady_clock::now();
  rep.best_solution = solve_enumeration(inst, options.enumeration);
  rep.v_ip = rep.best_solution.value;
  rep.seconds_enumeration = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const DompModel model = build_bep(inst, options.bep);
  rep.lp = solve_lp(model.lp, options.simplex);
  rep.seconds_lp = seconds_since(t0);
  rep.lp_iterations = rep.lp.iterations;
  if (rep.lp.status != LpStatus::Optimal) {
    throw InternalError("relaxation reported " + to_string(rep.lp.status) + " on a feasible instance");
  }
  rep.v_lp = rep.lp.objective;
  if (rep.v_lp > rep.v_ip + 1e-7 * (1.0 + std::abs(rep.v_ip))) {
    throw InternalError("relaxation value " + std::to_string(rep.v_lp) + " exceeds the integral optimum " +
                        std::to_string(rep.v_ip));
  }
  rep.recovered = values_match(rep.v_ip, rep.v_lp);
  rep.gap_lp = rep.recovered ? 0.0 : lp_gap(rep.v_ip, rep.v_lp);
  rep.vertex_integral = fractionality_report(model, rep.lp).integral;
  return rep;
}

}  // namespace domp
