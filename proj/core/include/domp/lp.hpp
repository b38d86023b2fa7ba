#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace domp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LinearTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

struct LinearRow {
  std::vector<LinearTerm> terms;
  Relation rel = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

/// Minimization LP with per-variable bounds. Rows are stored sparse; repeated
/// variables inside one row are summed.
class LinearProgram {
 public:
  std::size_t add_variable(std::string name, double cost = 0.0, double lower = 0.0,
                           double upper = kInf);
  std::size_t add_row(LinearRow row);
  std::size_t add_row(std::vector<LinearTerm> terms, Relation rel, double rhs,
                      std::string name = {});

  std::size_t num_variables() const noexcept { return cost_.size(); }
  std::size_t num_rows() const noexcept { return rows_.size(); }

  double cost(std::size_t j) const { return cost_[j]; }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }
  const std::string& var_name(std::size_t j) const { return names_[j]; }
  const LinearRow& row(std::size_t i) const { return rows_[i]; }
  const std::vector<LinearRow>& rows() const noexcept { return rows_; }

  void set_cost(std::size_t j, double c);
  void set_bounds(std::size_t j, double lower, double upper);

  /// Sum of a row's terms evaluated at x.
  double row_activity(std::size_t i, const std::vector<double>& x) const;
  double objective_at(const std::vector<double>& x) const;

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<LinearRow> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// One per row; under minimization <= rows carry duals <= 0, >= rows >= 0.
  std::vector<double> duals;
  /// c - A^T y per variable.
  std::vector<double> reduced_costs;
  /// Basic internal columns, ascending.
  std::vector<std::size_t> basis;
  /// Per variable: some internal column of the variable is basic.
  std::vector<bool> basic;
  /// Per variable: |x - round(x)| <= 1e-6.
  std::vector<bool> integral;
  std::size_t iterations = 0;
  bool used_bland = false;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  std::size_t max_iterations = 1'000'000;
  std::size_t refactor_interval = 50;
  /// Degenerate pivots tolerated before switching to Bland's rule; 0 means
  /// 5 * (rows + columns).
  std::size_t bland_after = 0;
};

/// Dense bounded two-phase primal simplex. Infeasible and unbounded problems
/// are reported through the status; exceeding the iteration budget throws
/// ConvergenceError.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Largest violation of each optimality block, all absolute.
struct KktReport {
  double primal_residual = 0.0;    // rows and bounds
  double dual_residual = 0.0;      // row dual signs and reduced-cost signs
  double complementarity = 0.0;    // max |y_i * slack_i| and |d_j * (x_j - bound)|
  double duality_gap = 0.0;        // |c.x - dual objective|

  bool ok(double tol = 1e-7) const noexcept {
    return primal_residual <= tol && dual_residual <= tol && complementarity <= tol &&
           duality_gap <= tol;
  }
};

/// Verifies a solution using its x and duals; reduced costs are recomputed
/// from the duals.
KktReport check_solution(const LinearProgram& lp, const LpSolution& sol);

/// Plain-text dump: objective, one line per row, then the bounds block.
void write_lp_text(std::ostream& out, const LinearProgram& lp, const std::string& title = {});

}  // namespace domp
