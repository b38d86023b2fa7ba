#pragma once

#include <cstddef>
#include <vector>

#include "domp/instance.hpp"
#include "domp/lp.hpp"

namespace domp {

enum class Formulation { BEP, OT };

/// An LP over (y, z, ...) with fixed column and row layouts.
///
/// Columns: y_j = j, z_ij = m + i*m + j, then either u_i, v_r (BEP) or
/// t_s, q_is (OT). Rows: m assignment rows, m*m linking rows z_ij <= y_j,
/// one cardinality row, then the sorting rows.
struct DompModel {
  Formulation kind = Formulation::BEP;
  std::size_t m = 0;
  std::size_t p = 0;
  LinearProgram lp;
  /// Row index of the sorting row for (i, r), or -1 when it was dropped.
  std::vector<std::size_t> sorting_row;
  std::size_t first_closest_row = 0;  // == num_rows when none attached

  std::size_t y(std::size_t j) const noexcept { return j; }
  std::size_t z(std::size_t i, std::size_t j) const noexcept { return m + i * m + j; }
  std::size_t u(std::size_t i) const noexcept { return m + m * m + i; }
  std::size_t v(std::size_t r) const noexcept { return m + m * m + m + r; }
  std::size_t t(std::size_t s) const noexcept { return m + m * m + s; }
  std::size_t q(std::size_t i, std::size_t s) const noexcept { return m + m * m + m + i * m + s; }

  std::size_t assignment_row(std::size_t i) const noexcept { return i; }
  std::size_t link_row(std::size_t i, std::size_t j) const noexcept { return m + i * m + j; }
  std::size_t cardinality_row() const noexcept { return m + m * m; }

  /// Columns that are binary in the integer model (y and z).
  std::vector<std::size_t> integer_columns() const;
};

struct BepOptions {
  /// Integrality is never passed to the LP solver; the flag only records
  /// which model the caller means.
  bool relaxed = true;
  bool closest_assignment = false;
  /// Omit sorting rows whose weight is zero (they only force u_i + v_r >= 0).
  bool drop_zero_weight_rows = false;
};

DompModel build_bep(const Instance& inst, const BepOptions& options = {});
DompModel build_ot(const Instance& inst, bool closest_assignment = false);

/// One row per (i, j) over y and z using the column layout of DompModel.
std::vector<LinearRow> closest_assignment_rows(const Instance& inst);

/// Full BEP vector for an integral solution; u and v are chosen so each
/// point's sorted-position row is tight. Throws InternalError if the result
/// is infeasible or its objective differs from sol.value.
std::vector<double> embed_integral(const Instance& inst, const CenterSolution& sol,
                                   const DompModel& model);

struct FractionalityReport {
  double max_y_fraction = 0.0;
  double max_z_fraction = 0.0;
  std::vector<std::size_t> fractional_y;
  bool integral = true;
};

FractionalityReport fractionality_report(const DompModel& model, const std::vector<double>& x);
FractionalityReport fractionality_report(const DompModel& model, const LpSolution& sol);

}  // namespace domp
