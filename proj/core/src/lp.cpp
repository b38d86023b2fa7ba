#include "domp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "domp/error.hpp"

namespace domp {

std::size_t LinearProgram::add_variable(std::string name, double cost, double lower, double upper) {
  if (!std::isfinite(cost)) throw ParameterError("variable cost must be finite");
  if (std::isnan(lower) || std::isnan(upper) || lower == kInf || upper == -kInf) {
    throw ParameterError("invalid bounds for variable '" + name + "'");
  }
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  names_.push_back(std::move(name));
  return cost_.size() - 1;
}

std::size_t LinearProgram::add_row(LinearRow row) {
  for (const auto& t : row.terms) {
    if (t.var >= cost_.size()) throw StructuralError("row '" + row.name + "' references unknown variable");
    if (!std::isfinite(t.coef)) throw ParameterError("row '" + row.name + "' has a non-finite coefficient");
  }
  if (!std::isfinite(row.rhs)) throw ParameterError("row '" + row.name + "' has a non-finite rhs");
  rows_.push_back(std::move(row));
  return rows_.size() - 1;
}

std::size_t LinearProgram::add_row(std::vector<LinearTerm> terms, Relation rel, double rhs,
                                   std::string name) {
  return add_row(LinearRow{std::move(terms), rel, rhs, std::move(name)});
}

void LinearProgram::set_cost(std::size_t j, double c) { cost_.at(j) = c; }

void LinearProgram::set_bounds(std::size_t j, double lower, double upper) {
  lower_.at(j) = lower;
  upper_.at(j) = upper;
}

double LinearProgram::row_activity(std::size_t i, const std::vector<double>& x) const {
  double s = 0.0;
  for (const auto& t : rows_[i].terms) s += t.coef * x[t.var];
  return s;
}

double LinearProgram::objective_at(const std::vector<double>& x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) s += cost_[j] * x[j];
  return s;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Internal column k stands for offset + sign * x'_k of its original variable.
struct ColumnMap {
  std::size_t var = kNone;
  double sign = 1.0;
  double offset = 0.0;
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) { build(); }

  LpSolution run();

 private:
  enum class Outcome { Optimal, Unbounded };

  void build();
  Outcome iterate(bool phase_two);
  void pivot(std::size_t r, std::size_t k);
  bool refactor();
  void compute_reduced_costs();
  void drive_out_artificials();
  LpSolution assemble(LpStatus status);

  double& t(std::size_t r, std::size_t k) { return T_[r * n_ + k]; }

  const LinearProgram& lp_;
  SimplexOptions opt_;

  std::size_t m_ = 0;  // rows
  std::size_t n_ = 0;  // internal columns
  std::size_t n_struct_ = 0;
  std::vector<ColumnMap> cols_;
  std::vector<double> A_;  // row-flipped equality form, m_ x n_
  std::vector<double> b_;
  std::vector<double> ub_;
  std::vector<double> cost_;
  std::vector<double> phase_cost_;
  std::vector<char> artificial_;
  std::vector<std::size_t> idcol_;
  std::vector<double> row_sign_;
  bool trivially_infeasible_ = false;

  std::vector<double> T_;
  std::vector<double> beta_;
  std::vector<double> d_;
  std::vector<std::size_t> basic_;
  std::vector<std::size_t> where_;
  std::vector<char> at_upper_;

  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  std::size_t degenerate_ = 0;
  std::size_t bland_after_ = 0;
  bool bland_ = false;
  std::vector<std::size_t> nz_;
};

void Simplex::build() {
  m_ = lp_.num_rows();
  const std::size_t nv = lp_.num_variables();

  for (std::size_t j = 0; j < nv; ++j) {
    const double l = lp_.lower(j);
    const double u = lp_.upper(j);
    if (l > u) trivially_infeasible_ = true;
    if (l != -kInf) {
      cols_.push_back({j, 1.0, l});
      ub_.push_back(u == kInf ? kInf : std::max(u - l, 0.0));
    } else if (u != kInf) {
      cols_.push_back({j, -1.0, u});
      ub_.push_back(kInf);
    } else {
      cols_.push_back({j, 1.0, 0.0});
      ub_.push_back(kInf);
      cols_.push_back({j, -1.0, 0.0});
      ub_.push_back(kInf);
    }
  }
  n_struct_ = cols_.size();

  std::vector<std::vector<std::size_t>> cols_of(nv);
  for (std::size_t k = 0; k < n_struct_; ++k) cols_of[cols_[k].var].push_back(k);

  // Slack and artificial needs per row.
  std::vector<double> rhs(m_);
  std::vector<double> slack_coef(m_, 0.0);
  std::vector<char> needs_art(m_, 0);
  row_sign_.assign(m_, 1.0);
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m_; ++i) {
    const LinearRow& row = lp_.row(i);
    double r = row.rhs;
    for (const auto& term : row.terms) r -= term.coef * cols_[cols_of[term.var].front()].offset;
    const bool flip = r < 0.0 || (row.rel == Relation::GreaterEqual && r <= 0.0);
    row_sign_[i] = flip ? -1.0 : 1.0;
    rhs[i] = row_sign_[i] * r;
    if (row.rel != Relation::Equal) {
      slack_coef[i] = row_sign_[i] * (row.rel == Relation::LessEqual ? 1.0 : -1.0);
      ++n_slack;
    }
    needs_art[i] = slack_coef[i] != 1.0;
    if (needs_art[i]) ++n_art;
  }

  n_ = n_struct_ + n_slack + n_art;
  A_.assign(m_ * n_, 0.0);
  b_ = rhs;
  idcol_.assign(m_, kNone);
  artificial_.assign(n_, 0);
  ub_.resize(n_, kInf);
  cols_.resize(n_);

  std::size_t next_slack = n_struct_;
  std::size_t next_art = n_struct_ + n_slack;
  for (std::size_t i = 0; i < m_; ++i) {
    const LinearRow& row = lp_.row(i);
    for (const auto& term : row.terms) {
      for (std::size_t k : cols_of[term.var]) A_[i * n_ + k] += row_sign_[i] * term.coef * cols_[k].sign;
    }
    if (slack_coef[i] != 0.0) {
      A_[i * n_ + next_slack] = slack_coef[i];
      if (slack_coef[i] == 1.0) idcol_[i] = next_slack;
      ++next_slack;
    }
    if (needs_art[i]) {
      A_[i * n_ + next_art] = 1.0;
      artificial_[next_art] = 1;
      idcol_[i] = next_art;
      ++next_art;
    }
  }

  cost_.assign(n_, 0.0);
  for (std::size_t k = 0; k < n_struct_; ++k) cost_[k] = lp_.cost(cols_[k].var) * cols_[k].sign;

  bland_after_ = opt_.bland_after != 0 ? opt_.bland_after : 5 * (m_ + n_);
}

void Simplex::compute_reduced_costs() {
  d_ = phase_cost_;
  for (std::size_t r = 0; r < m_; ++r) {
    const double cb = phase_cost_[basic_[r]];
    if (cb == 0.0) continue;
    const double* row = &T_[r * n_];
    for (std::size_t k = 0; k < n_; ++k)
      if (row[k] != 0.0) d_[k] -= cb * row[k];
  }
  for (std::size_t r = 0; r < m_; ++r) d_[basic_[r]] = 0.0;
}

void Simplex::pivot(std::size_t r, std::size_t k) {
  double* prow = &T_[r * n_];
  const double inv = 1.0 / prow[k];
  nz_.clear();
  for (std::size_t c = 0; c < n_; ++c) {
    if (prow[c] == 0.0) continue;
    prow[c] *= inv;
    if (std::abs(prow[c]) < 1e-14) {
      prow[c] = 0.0;
      continue;
    }
    nz_.push_back(c);
  }
  prow[k] = 1.0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* row = &T_[i * n_];
    const double f = row[k];
    if (f == 0.0) continue;
    for (std::size_t c : nz_) row[c] -= f * prow[c];
    row[k] = 0.0;
  }
  const double f = d_[k];
  if (f != 0.0) {
    for (std::size_t c : nz_) d_[c] -= f * prow[c];
    d_[k] = 0.0;
  }
}

bool Simplex::refactor() {
  // Rebuild B^-1 [A | b - A_U u_U] from the original data by Gauss-Jordan on
  // the basic columns; identity columns first to avoid fill.
  const std::size_t w = n_ + 1;
  std::vector<double> M(m_ * w, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    std::copy(&A_[i * n_], &A_[i * n_] + n_, &M[i * w]);
    double r = b_[i];
    for (std::size_t k = 0; k < n_; ++k)
      if (at_upper_[k] && A_[i * n_ + k] != 0.0) r -= A_[i * n_ + k] * ub_[k];
    M[i * w + n_] = r;
  }

  std::vector<std::size_t> order(basic_.begin(), basic_.end());
  std::stable_partition(order.begin(), order.end(), [&](std::size_t v) { return v >= n_struct_; });

  std::vector<char> assigned(m_, 0);
  std::vector<std::size_t> new_basic(m_, kNone);
  std::vector<std::size_t> nz;
  for (std::size_t v : order) {
    std::size_t best = kNone;
    double best_abs = 1e-11;
    for (std::size_t i = 0; i < m_; ++i) {
      if (assigned[i]) continue;
      const double a = std::abs(M[i * w + v]);
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best == kNone) return false;
    assigned[best] = 1;
    new_basic[best] = v;
    double* prow = &M[best * w];
    const double inv = 1.0 / prow[v];
    nz.clear();
    for (std::size_t c = 0; c < w; ++c) {
      if (prow[c] == 0.0) continue;
      prow[c] *= inv;
      if (std::abs(prow[c]) < 1e-14 && c != n_) {
        prow[c] = 0.0;
        continue;
      }
      nz.push_back(c);
    }
    prow[v] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == best) continue;
      double* row = &M[i * w];
      const double f = row[v];
      if (f == 0.0) continue;
      for (std::size_t c : nz) row[c] -= f * prow[c];
      row[v] = 0.0;
    }
  }

  for (std::size_t i = 0; i < m_; ++i) {
    std::copy(&M[i * w], &M[i * w] + n_, &T_[i * n_]);
    beta_[i] = M[i * w + n_];
  }
  basic_ = new_basic;
  std::fill(where_.begin(), where_.end(), kNone);
  for (std::size_t r = 0; r < m_; ++r) where_[basic_[r]] = r;
  compute_reduced_costs();
  since_refactor_ = 0;
  return true;
}

Simplex::Outcome Simplex::iterate(bool phase_two) {
  const double tol_d = opt_.optimality_tolerance;
  for (;;) {
    if (since_refactor_ >= opt_.refactor_interval) {
      if (!refactor()) since_refactor_ = 0;
    }

    std::size_t enter = kNone;
    double best = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (where_[k] != kNone) continue;
      if (phase_two && artificial_[k]) continue;
      if (ub_[k] == 0.0) continue;
      const double dk = d_[k];
      const bool eligible = at_upper_[k] ? dk > tol_d : dk < -tol_d;
      if (!eligible) continue;
      if (bland_) {
        enter = k;
        break;
      }
      if (std::abs(dk) > best) {
        best = std::abs(dk);
        enter = k;
      }
    }
    if (enter == kNone) {
      if (since_refactor_ > 0 && refactor()) continue;
      return Outcome::Optimal;
    }

    if (iterations_ >= opt_.max_iterations) {
      throw ConvergenceError("simplex exceeded " + std::to_string(opt_.max_iterations) +
                             " iterations (" + std::to_string(m_) + " rows, " + std::to_string(n_) +
                             " columns)");
    }
    ++iterations_;

    const double dir = at_upper_[enter] ? -1.0 : 1.0;
    double theta = ub_[enter];
    std::size_t leave = kNone;
    double leave_alpha = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      const double alpha = dir * T_[r * n_ + enter];
      if (std::abs(alpha) <= opt_.pivot_tolerance) continue;
      double lim;
      if (alpha > 0.0) {
        lim = std::max(beta_[r], 0.0) / alpha;
      } else {
        const double u = ub_[basic_[r]];
        if (u == kInf) continue;
        lim = std::max(u - beta_[r], 0.0) / -alpha;
      }
      if (lim < theta - 1e-12) {
        theta = lim;
        leave = r;
        leave_alpha = alpha;
      } else if (leave != kNone && lim <= theta + 1e-12) {
        const bool better = bland_ ? basic_[r] < basic_[leave] : std::abs(alpha) > std::abs(leave_alpha);
        if (better) {
          theta = std::min(theta, lim);
          leave = r;
          leave_alpha = alpha;
        }
      }
    }
    if (theta == kInf) return Outcome::Unbounded;

    if (theta > 0.0) {
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = T_[r * n_ + enter];
        if (a != 0.0) beta_[r] -= dir * theta * a;
      }
    }
    if (leave == kNone) {
      at_upper_[enter] = !at_upper_[enter];
    } else {
      const double entering_value = at_upper_[enter] ? ub_[enter] - theta : theta;
      const std::size_t out = basic_[leave];
      at_upper_[out] = leave_alpha < 0.0;
      at_upper_[enter] = 0;
      pivot(leave, enter);
      beta_[leave] = entering_value;
      basic_[leave] = enter;
      where_[out] = kNone;
      where_[enter] = leave;
      ++since_refactor_;
    }
    if (theta <= 1e-12 && !bland_ && ++degenerate_ > bland_after_) bland_ = true;
  }
}

void Simplex::drive_out_artificials() {
  for (std::size_t r = 0; r < m_; ++r) {
    if (!artificial_[basic_[r]]) continue;
    std::size_t best = kNone;
    double best_abs = 1e-7;
    for (std::size_t k = 0; k < n_; ++k) {
      if (artificial_[k] || where_[k] != kNone) continue;
      const double a = std::abs(T_[r * n_ + k]);
      if (a > best_abs) {
        best_abs = a;
        best = k;
      }
    }
    if (best == kNone) continue;  // redundant row; artificial stays basic at zero
    const double value = at_upper_[best] ? ub_[best] : 0.0;
    const std::size_t out = basic_[r];
    at_upper_[out] = 0;
    at_upper_[best] = 0;
    pivot(r, best);
    beta_[r] = value;
    basic_[r] = best;
    where_[out] = kNone;
    where_[best] = r;
    ++since_refactor_;
  }
}

LpSolution Simplex::run() {
  if (trivially_infeasible_) return assemble(LpStatus::Infeasible);

  T_ = A_;
  beta_ = b_;
  basic_ = idcol_;
  where_.assign(n_, kNone);
  for (std::size_t r = 0; r < m_; ++r) where_[basic_[r]] = r;
  at_upper_.assign(n_, 0);

  const bool has_art = std::any_of(artificial_.begin(), artificial_.end(), [](char a) { return a != 0; });
  if (has_art) {
    phase_cost_.assign(n_, 0.0);
    for (std::size_t k = 0; k < n_; ++k)
      if (artificial_[k]) phase_cost_[k] = 1.0;
    compute_reduced_costs();
    iterate(false);
    double infeas = 0.0;
    double bmax = 0.0;
    for (double v : b_) bmax = std::max(bmax, std::abs(v));
    for (std::size_t r = 0; r < m_; ++r)
      if (artificial_[basic_[r]]) infeas += std::max(beta_[r], 0.0);
    if (infeas > 1e-8 * (1.0 + bmax)) return assemble(LpStatus::Infeasible);
    drive_out_artificials();
    for (std::size_t k = 0; k < n_; ++k)
      if (artificial_[k]) ub_[k] = 0.0;
  }

  phase_cost_ = cost_;
  if (!refactor()) compute_reduced_costs();
  const Outcome out = iterate(true);
  return assemble(out == Outcome::Optimal ? LpStatus::Optimal : LpStatus::Unbounded);
}

LpSolution Simplex::assemble(LpStatus status) {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.used_bland = bland_;
  const std::size_t nv = lp_.num_variables();
  sol.x.assign(nv, 0.0);
  sol.basic.assign(nv, false);
  if (status == LpStatus::Infeasible && T_.empty()) {
    sol.integral.assign(nv, false);
    return sol;
  }

  std::vector<double> xs(n_, 0.0);
  for (std::size_t k = 0; k < n_; ++k) xs[k] = at_upper_[k] ? ub_[k] : 0.0;
  for (std::size_t r = 0; r < m_; ++r) xs[basic_[r]] = beta_[r];
  std::vector<char> seen(nv, 0);
  for (std::size_t k = 0; k < n_struct_; ++k) {
    const ColumnMap& c = cols_[k];
    if (!seen[c.var]) {
      sol.x[c.var] = c.offset;
      seen[c.var] = 1;
    }
    sol.x[c.var] += c.sign * xs[k];
    if (where_[k] != kNone) sol.basic[c.var] = true;
  }
  for (std::size_t r = 0; r < m_; ++r) sol.basis.push_back(basic_[r]);
  std::sort(sol.basis.begin(), sol.basis.end());

  sol.integral.resize(nv);
  for (std::size_t j = 0; j < nv; ++j)
    sol.integral[j] = std::abs(sol.x[j] - std::round(sol.x[j])) <= 1e-6;

  sol.objective = status == LpStatus::Unbounded ? -kInf : lp_.objective_at(sol.x);

  if (status == LpStatus::Optimal) {
    sol.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t k = idcol_[i];
      sol.duals[i] = row_sign_[i] * (phase_cost_[k] - d_[k]);
    }
    sol.reduced_costs.resize(nv);
    for (std::size_t j = 0; j < nv; ++j) sol.reduced_costs[j] = lp_.cost(j);
    for (std::size_t i = 0; i < m_; ++i)
      for (const auto& term : lp_.row(i).terms) sol.reduced_costs[term.var] -= term.coef * sol.duals[i];
  }
  return sol;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  Simplex s(lp, options);
  return s.run();
}

KktReport check_solution(const LinearProgram& lp, const LpSolution& sol) {
  KktReport rep;
  const std::size_t nv = lp.num_variables();
  const std::size_t nr = lp.num_rows();
  const std::vector<double>& x = sol.x;
  std::vector<double> y = sol.duals;
  y.resize(nr, 0.0);

  for (std::size_t i = 0; i < nr; ++i) {
    const LinearRow& row = lp.row(i);
    const double act = lp.row_activity(i, x);
    const double slack = row.rhs - act;
    double viol = 0.0;
    double dual_viol = 0.0;
    switch (row.rel) {
      case Relation::LessEqual:
        viol = std::max(0.0, -slack);
        dual_viol = std::max(0.0, y[i]);
        break;
      case Relation::GreaterEqual:
        viol = std::max(0.0, slack);
        dual_viol = std::max(0.0, -y[i]);
        break;
      case Relation::Equal:
        viol = std::abs(slack);
        break;
    }
    rep.primal_residual = std::max(rep.primal_residual, viol);
    rep.dual_residual = std::max(rep.dual_residual, dual_viol);
    if (row.rel != Relation::Equal)
      rep.complementarity = std::max(rep.complementarity, std::abs(y[i] * slack));
  }

  std::vector<double> d(nv);
  for (std::size_t j = 0; j < nv; ++j) d[j] = lp.cost(j);
  for (std::size_t i = 0; i < nr; ++i)
    for (const auto& term : lp.row(i).terms) d[term.var] -= term.coef * y[i];

  double dual_obj = 0.0;
  for (std::size_t i = 0; i < nr; ++i) dual_obj += y[i] * lp.row(i).rhs;
  for (std::size_t j = 0; j < nv; ++j) {
    const double l = lp.lower(j);
    const double u = lp.upper(j);
    rep.primal_residual = std::max({rep.primal_residual, l - x[j], x[j] - u, 0.0});
    const double dp = std::max(d[j], 0.0);
    const double dm = std::max(-d[j], 0.0);
    if (l == -kInf) rep.dual_residual = std::max(rep.dual_residual, dp);
    else {
      rep.complementarity = std::max(rep.complementarity, dp * std::abs(x[j] - l));
      dual_obj += dp * l;
    }
    if (u == kInf) rep.dual_residual = std::max(rep.dual_residual, dm);
    else {
      rep.complementarity = std::max(rep.complementarity, dm * std::abs(u - x[j]));
      dual_obj -= dm * u;
    }
  }
  rep.duality_gap = std::abs(lp.objective_at(x) - dual_obj);
  return rep;
}

namespace {

void write_bound(std::ostream& out, double v) {
  if (v == kInf) out << "inf";
  else if (v == -kInf) out << "-inf";
  else out << v;
}

}  // namespace

void write_lp_text(std::ostream& out, const LinearProgram& lp, const std::string& title) {
  const auto old_prec = out.precision(17);
  if (!title.empty()) out << "# " << title << '\n';
  out << "minimize\n  obj:";
  for (std::size_t j = 0; j < lp.num_variables(); ++j)
    if (lp.cost(j) != 0.0) out << ' ' << (lp.cost(j) < 0 ? "- " : "+ ") << std::abs(lp.cost(j)) << ' ' << lp.var_name(j);
  out << "\nsubject to\n";
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const LinearRow& row = lp.row(i);
    out << "  " << (row.name.empty() ? "r" + std::to_string(i) : row.name) << ':';
    for (const auto& t : row.terms)
      out << ' ' << (t.coef < 0 ? "- " : "+ ") << std::abs(t.coef) << ' ' << lp.var_name(t.var);
    out << (row.rel == Relation::LessEqual ? " <= " : row.rel == Relation::Equal ? " = " : " >= ")
        << row.rhs << '\n';
  }
  out << "bounds\n";
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    out << "  ";
    write_bound(out, lp.lower(j));
    out << " <= " << lp.var_name(j) << " <= ";
    write_bound(out, lp.upper(j));
    out << '\n';
  }
  out << "end\n";
  out.precision(old_prec);
}

}  // namespace domp
