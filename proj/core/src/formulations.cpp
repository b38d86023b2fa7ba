#include "domp/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "domp/error.hpp"
#include "domp/ordered_median.hpp"

namespace domp {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::string idx(std::size_t a) { return std::to_string(a + 1); }

// y, z columns and the assignment, linking and cardinality rows.
void add_assignment_core(DompModel& model) {
  const std::size_t m = model.m;
  LinearProgram& lp = model.lp;
  for (std::size_t j = 0; j < m; ++j) lp.add_variable("y_" + idx(j), 0.0, 0.0, 1.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) lp.add_variable("z_" + idx(i) + "_" + idx(j), 0.0, 0.0, 1.0);

  for (std::size_t i = 0; i < m; ++i) {
    std::vector<LinearTerm> terms;
    for (std::size_t j = 0; j < m; ++j) terms.push_back({model.z(i, j), 1.0});
    lp.add_row(std::move(terms), Relation::Equal, 1.0, "assign_" + idx(i));
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      lp.add_row({{model.z(i, j), 1.0}, {model.y(j), -1.0}}, Relation::LessEqual, 0.0,
                 "link_" + idx(i) + "_" + idx(j));
  std::vector<LinearTerm> card;
  for (std::size_t j = 0; j < m; ++j) card.push_back({model.y(j), 1.0});
  lp.add_row(std::move(card), Relation::Equal, static_cast<double>(model.p), "card");
}

void attach_closest(DompModel& model, const Instance& inst) {
  model.first_closest_row = model.lp.num_rows();
  for (auto& row : closest_assignment_rows(inst)) model.lp.add_row(std::move(row));
}

}  // namespace

std::vector<std::size_t> DompModel::integer_columns() const {
  std::vector<std::size_t> out(m + m * m);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = k;
  return out;
}

DompModel build_bep(const Instance& inst, const BepOptions& options) {
  DompModel model;
  model.kind = Formulation::BEP;
  model.m = inst.size();
  model.p = inst.p();
  const std::size_t m = model.m;
  const DistanceMatrix& d = inst.dist();
  const WeightVector& w = inst.weights();

  add_assignment_core(model);
  LinearProgram& lp = model.lp;
  for (std::size_t i = 0; i < m; ++i) lp.add_variable("u_" + idx(i), 1.0, -kInf, kInf);
  for (std::size_t r = 0; r < m; ++r) lp.add_variable("v_" + idx(r), 1.0, -kInf, kInf);

  model.sorting_row.assign(m * m, kNone);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t r = 0; r < m; ++r) {
      if (options.drop_zero_weight_rows && w[r] == 0.0) continue;
      std::vector<LinearTerm> terms{{model.u(i), 1.0}, {model.v(r), 1.0}};
      for (std::size_t j = 0; j < m; ++j) {
        const double coef = -w[r] * d(i, j);
        if (coef != 0.0) terms.push_back({model.z(i, j), coef});
      }
      model.sorting_row[i * m + r] =
          lp.add_row(std::move(terms), Relation::GreaterEqual, 0.0, "sort_" + idx(i) + "_" + idx(r));
    }
  }
  if (options.drop_zero_weight_rows && w[m - 1] == 0.0) {
    // Shifting u up and v down by a common constant keeps the objective, so
    // some optimum has min u = 0 and v = 0 on the zero-weight positions.
    for (std::size_t i = 0; i < m; ++i) lp.set_bounds(model.u(i), 0.0, kInf);
    for (std::size_t r = 0; r < m; ++r)
      if (w[r] == 0.0) lp.set_bounds(model.v(r), 0.0, 0.0);
  }
  model.first_closest_row = lp.num_rows();
  if (options.closest_assignment) attach_closest(model, inst);
  return model;
}

DompModel build_ot(const Instance& inst, bool closest_assignment) {
  DompModel model;
  model.kind = Formulation::OT;
  model.m = inst.size();
  model.p = inst.p();
  const std::size_t m = model.m;
  const DistanceMatrix& d = inst.dist();
  const std::vector<double> delta = inst.weights().deltas();

  add_assignment_core(model);
  LinearProgram& lp = model.lp;
  for (std::size_t s = 0; s < m; ++s)
    lp.add_variable("t_" + idx(s), delta[s] * static_cast<double>(s + 1), -kInf, kInf);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t s = 0; s < m; ++s) lp.add_variable("q_" + idx(i) + "_" + idx(s), delta[s], 0.0, kInf);

  model.sorting_row.assign(m * m, kNone);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t s = 0; s < m; ++s) {
      std::vector<LinearTerm> terms{{model.q(i, s), 1.0}, {model.t(s), 1.0}};
      for (std::size_t j = 0; j < m; ++j)
        if (d(i, j) != 0.0) terms.push_back({model.z(i, j), -d(i, j)});
      model.sorting_row[i * m + s] =
          lp.add_row(std::move(terms), Relation::GreaterEqual, 0.0, "ksum_" + idx(i) + "_" + idx(s));
    }
  }
  model.first_closest_row = lp.num_rows();
  if (closest_assignment) attach_closest(model, inst);
  return model;
}

std::vector<LinearRow> closest_assignment_rows(const Instance& inst) {
  const std::size_t m = inst.size();
  const double p = static_cast<double>(inst.p());
  const DistanceMatrix& d = inst.dist();

  std::vector<std::size_t> theta(m * m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < m; ++l)
        if (d(i, l) < d(i, j)) ++theta[i * m + j];

  std::vector<LinearRow> rows;
  rows.reserve(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double th = static_cast<double>(theta[i * m + j]);
      const double P = std::min(p, th);
      LinearRow row;
      row.rel = Relation::LessEqual;
      row.rhs = P;
      row.name = "closest_" + idx(i) + "_" + idx(j);
      for (std::size_t jp = 0; jp < m; ++jp) {
        const std::size_t zcol = m + i * m + jp;
        if (d(i, jp) < d(i, j)) {
          const double thp = static_cast<double>(theta[i * m + jp]);
          if (th - thp <= p) {
            const double Q = thp + std::min(0.0, p - th);
            if (Q != 0.0) row.terms.push_back({zcol, Q});
          }
          row.terms.push_back({jp, 1.0});
        } else if (P != 0.0) {
          row.terms.push_back({zcol, P});
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<double> embed_integral(const Instance& inst, const CenterSolution& sol,
                                   const DompModel& model) {
  if (model.kind != Formulation::BEP) throw ParameterError("embed_integral needs a BEP model");
  const std::size_t m = model.m;
  if (sol.assignment.size() != m || sol.distances.size() != m)
    throw ParameterError("solution size does not match the model");
  const WeightVector& w = inst.weights();

  std::vector<double> x(model.lp.num_variables(), 0.0);
  for (std::size_t j : sol.centers) x[model.y(j)] = 1.0;
  for (std::size_t i = 0; i < m; ++i) x[model.z(i, sol.assignment[i])] = 1.0;

  const SortPermutation sigma = SortPermutation::of(sol.distances);
  std::vector<double> v(m, 0.0);
  for (std::size_t r = 0; r + 1 < m; ++r)
    v[r + 1] = v[r] + (w[r + 1] - w[r]) * sol.distances[sigma.at(r + 1)];
  // Normalized so v vanishes on the last position and u stays nonnegative.
  const double shift = v[m - 1];
  for (double& x_r : v) x_r -= shift;
  for (std::size_t r = 0; r < m; ++r) x[model.v(r)] = v[r];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = sigma.position_of(i);
    x[model.u(i)] = w[a] * sol.distances[i] - v[a];
  }

  const double scale = 1.0 + inst.dist().max_entry() * (w.size() ? w[0] : 0.0);
  for (std::size_t k = 0; k < model.lp.num_rows(); ++k) {
    const LinearRow& row = model.lp.row(k);
    const double act = model.lp.row_activity(k, x);
    double viol = 0.0;
    if (row.rel == Relation::LessEqual) viol = act - row.rhs;
    else if (row.rel == Relation::GreaterEqual) viol = row.rhs - act;
    else viol = std::abs(act - row.rhs);
    if (viol > 1e-9 * scale) {
      throw InternalError("integral embedding violates row '" + row.name + "' by " + std::to_string(viol));
    }
  }
  const double obj = model.lp.objective_at(x);
  if (std::abs(obj - sol.value) > 1e-9 * (1.0 + std::abs(sol.value))) {
    throw InternalError("integral embedding objective " + std::to_string(obj) +
                        " differs from the solution value " + std::to_string(sol.value));
  }
  return x;
}

FractionalityReport fractionality_report(const DompModel& model, const std::vector<double>& x) {
  FractionalityReport rep;
  const std::size_t m = model.m;
  for (std::size_t j = 0; j < m; ++j) {
    const double f = std::abs(x[model.y(j)] - std::round(x[model.y(j)]));
    rep.max_y_fraction = std::max(rep.max_y_fraction, f);
    if (f > 1e-6) rep.fractional_y.push_back(j);
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      rep.max_z_fraction = std::max(rep.max_z_fraction, std::abs(x[model.z(i, j)] - std::round(x[model.z(i, j)])));
  rep.integral = rep.max_y_fraction <= 1e-6 && rep.max_z_fraction <= 1e-6;
  return rep;
}

FractionalityReport fractionality_report(const DompModel& model, const LpSolution& sol) {
  return fractionality_report(model, sol.x);
}

}  // namespace domp
