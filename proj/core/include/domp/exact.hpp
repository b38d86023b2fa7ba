#pragma once

#include <cstddef>
#include <cstdint>

#include "domp/formulations.hpp"
#include "domp/instance.hpp"
#include "domp/lp.hpp"

namespace domp {

struct EnumerationOptions {
  std::uint64_t max_subsets = 10'000'000;
  /// Worker threads; subsets are split by their smallest center.
  unsigned jobs = 1;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Exact optimum over all p-subsets with closest allocation. Among equal
/// values the lexicographically smallest center set wins. Throws SizeError
/// when C(m, p) exceeds the guard.
CenterSolution solve_enumeration(const Instance& inst, const EnumerationOptions& options = {});

struct RecoveryOptions {
  BepOptions bep;
  SimplexOptions simplex;
  EnumerationOptions enumeration;
};

struct RecoveryReport {
  double v_ip = 0.0;
  double v_lp = 0.0;
  CenterSolution best_solution;
  double gap_lp = 0.0;
  bool recovered = false;
  bool vertex_integral = false;
  double seconds_enumeration = 0.0;
  double seconds_lp = 0.0;
  std::size_t lp_iterations = 0;
  LpSolution lp;
};

/// (v_ip - v_lp) / v_ip clamped to [0, 1]; 0 when both are 0.
double lp_gap(double v_ip, double v_lp);

/// |v_ip - v_lp| <= 1e-7 (1 + |v_ip|).
bool values_match(double v_ip, double v_lp);

/// Solves the instance by enumeration and its BEP relaxation and compares.
/// Throws InternalError if the relaxation exceeds the integral optimum.
RecoveryReport recovery_status(const Instance& inst, const RecoveryOptions& options = {});

}  // namespace domp
