#include "domp/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "domp/error.hpp"

namespace domp {

namespace {

constexpr double kNoCase = std::numeric_limits<double>::infinity();

double tolerance(const Instance& inst) {
  const double w1 = inst.weights().size() ? inst.weights()[0] : 0.0;
  return 1e-9 * (1.0 + w1 * inst.dist().max_entry());
}

}  // namespace

double DualCertificate::beta(const Instance& inst, std::size_t i, std::size_t j) const {
  return std::max(0.0, alpha[i] - inst.weights()[sigma.position_of(i)] * inst.dist()(i, j));
}

double ordered_contribution(std::span<const double> alpha, const SortPermutation& sigma,
                            const DistanceMatrix& dist, const WeightVector& w, std::size_t j) {
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    total += std::max(0.0, alpha[i] - w[sigma.position_of(i)] * dist(i, j));
  return total;
}

std::string CertificateVerdict::describe() const {
  std::ostringstream os;
  auto put = [&](const char* label, double v) {
    os << label << ": ";
    if (v == kNoCase) os << "n/a";
    else os << v;
    os << '\n';
  };
  os << "holds: " << (holds ? "yes" : "no") << ", strict: " << (strict ? "yes" : "no") << '\n';
  put("equal contribution at centers", equal_contribution);
  put("non-center contribution bound", noncenter_bound);
  put("assigned points covered", assigned_cover);
  put("unassigned points capped", unassigned_cap);
  return os.str();
}

double certificate_margin(const Instance& inst) { return 1e-6 * (1.0 + inst.dist().max_entry()); }

CertificateVerdict verify_certificate(const Instance& inst, const CenterSolution& sol,
                                      const DualCertificate& cert, double margin) {
  const std::size_t m = inst.size();
  const DistanceMatrix& d = inst.dist();
  const WeightVector& w = inst.weights();
  CertificateVerdict v;
  v.equal_contribution = kNoCase;
  v.noncenter_bound = kNoCase;
  v.assigned_cover = kNoCase;
  v.unassigned_cap = kNoCase;

  std::vector<double> c(m);
  for (std::size_t j = 0; j < m; ++j) c[j] = ordered_contribution(cert.alpha, cert.sigma, d, w, j);

  double cmin = kNoCase;
  double cmax = -kNoCase;
  for (std::size_t j : sol.centers) {
    cmin = std::min(cmin, c[j]);
    cmax = std::max(cmax, c[j]);
  }
  v.equal_contribution = -(cmax - cmin);
  for (std::size_t i = 0; i < m; ++i)
    if (!sol.is_center(i)) v.noncenter_bound = std::min(v.noncenter_bound, cmin - c[i]);
  for (std::size_t j : sol.centers) {
    for (std::size_t i = 0; i < m; ++i) {
      const double lw = w[cert.sigma.position_of(i)] * d(i, j);
      if (sol.assignment[i] == j) v.assigned_cover = std::min(v.assigned_cover, cert.alpha[i] - lw);
      else v.unassigned_cap = std::min(v.unassigned_cap, lw - cert.alpha[i]);
    }
  }

  const double tol = tolerance(inst);
  v.holds = v.equal_contribution >= -tol && v.noncenter_bound >= -tol && v.assigned_cover >= -tol &&
            v.unassigned_cap >= -tol;
  v.strict = v.holds && margin > 0.0 && v.noncenter_bound >= margin - tol &&
             v.assigned_cover >= margin - tol && v.unassigned_cap >= margin - tol;
  return v;
}

CertificateSearch search_certificate(const Instance& inst, const CenterSolution& sol, double margin) {
  const std::size_t m = inst.size();
  const DistanceMatrix& d = inst.dist();
  const WeightVector& w = inst.weights();
  const SortPermutation sigma = SortPermutation::of(sol.distances);
  auto lw = [&](std::size_t i, std::size_t j) { return w[sigma.position_of(i)] * d(i, j); };

  LinearProgram lp;
  std::vector<std::size_t> alpha(m);
  for (std::size_t i = 0; i < m; ++i) alpha[i] = lp.add_variable("alpha_" + std::to_string(i + 1), 0.0, -kInf, kInf);
  const std::size_t omega = lp.add_variable("omega", 0.0, -kInf, kInf);

  for (std::size_t j : sol.centers) {
    for (std::size_t i = 0; i < m; ++i) {
      if (sol.assignment[i] == j)
        lp.add_row({{alpha[i], 1.0}}, Relation::GreaterEqual, lw(i, j) + margin);
      else
        lp.add_row({{alpha[i], 1.0}}, Relation::LessEqual, lw(i, j) - margin);
    }
  }
  // Every center receives exactly omega; assigned parts are positive and the
  // others vanish under the two blocks above.
  for (std::size_t j : sol.centers) {
    std::vector<LinearTerm> terms{{omega, -1.0}};
    double rhs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (sol.assignment[i] != j) continue;
      terms.push_back({alpha[i], 1.0});
      rhs += lw(i, j);
    }
    lp.add_row(std::move(terms), Relation::Equal, rhs);
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (sol.is_center(i)) continue;
    std::vector<LinearTerm> sum{{omega, -1.0}};
    for (std::size_t t = 0; t < m; ++t) {
      const std::size_t s = lp.add_variable("s_" + std::to_string(t + 1) + "_" + std::to_string(i + 1));
      lp.add_row({{s, 1.0}, {alpha[t], -1.0}}, Relation::GreaterEqual, -lw(t, i));
      sum.push_back({s, 1.0});
    }
    lp.add_row(std::move(sum), Relation::LessEqual, -margin);
  }

  CertificateSearch out;
  const LpSolution sol_lp = solve_lp(lp);
  out.lp_status = sol_lp.status;
  if (sol_lp.status != LpStatus::Optimal) return out;

  DualCertificate cert;
  cert.alpha.resize(m);
  for (std::size_t i = 0; i < m; ++i) cert.alpha[i] = sol_lp.x[alpha[i]];
  cert.omega = sol_lp.x[omega];
  cert.sigma = sigma;
  out.verdict = verify_certificate(inst, sol, cert, margin);
  out.feasible = out.verdict.holds;
  out.certificate = std::move(cert);
  return out;
}

bool check_single_center(const Instance& inst, std::size_t j) {
  const std::size_t m = inst.size();
  const DistanceMatrix& d = inst.dist();
  const WeightVector& w = inst.weights();
  if (j >= m) throw ParameterError("center index out of range");
  const SortPermutation sigma = SortPermutation::of(d.row(j));
  auto score = [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t t = 0; t < m; ++t) s += w[sigma.position_of(t)] * d(t, i);
    return s;
  };
  const double own = score(j);
  const double slack = 1e-12 * (1.0 + std::abs(own));
  for (std::size_t i = 0; i < m; ++i)
    if (own > score(i) + slack) return false;
  return true;
}

std::string to_string(PredictionKind kind) {
  switch (kind) {
    case PredictionKind::NeverRecovers: return "never-recovers";
    case PredictionKind::MedianSingleRecovers: return "median-single-recovers";
    case PredictionKind::Unknown: return "unknown";
  }
  return "unknown";
}

bool Prediction::fired(int item) const { return std::find(items.begin(), items.end(), item) != items.end(); }

Prediction predict_non_recovery(const Instance& inst) {
  Prediction pred;
  const std::size_t m = inst.size();
  const WeightVector& w = inst.weights();
  pred.free_of_equidistance = is_free_of_equidistance(inst.dist());
  pred.valid_metric = validate_metric(inst.dist()).ok();
  if (inst.points()) pred.three_collinear = inst.points()->has_three_collinear();

  const WeightClass cls = classify_weights(w);
  double tail = 0.0;
  for (std::size_t r = 1; r < m; ++r) tail += w[r];
  const double head = w[0];

  std::ostringstream why;
  const bool general = pred.free_of_equidistance && pred.valid_metric && inst.p() < m && head > 0.0;
  if (!pred.free_of_equidistance) why << "distances are not free of equidistance; ";
  if (!pred.valid_metric) why << "distances are not a metric; ";
  if (inst.p() >= m) why << "every point is a center; ";
  const bool no_collinear = pred.three_collinear.has_value() && !*pred.three_collinear;
  if (!pred.three_collinear) why << "collinearity unknown (no coordinates); ";
  else if (*pred.three_collinear) why << "three collinear points present; ";

  auto fire = [&](int item, const std::string& text) {
    pred.items.push_back(item);
    why << "item " << item << ": " << text << "; ";
  };

  if (general && tail < head) {
    std::ostringstream t;
    t << "tail weight sum " << tail << " < " << head;
    fire(1, t.str());
  }
  const bool equal_tail = std::abs(tail - head) <= 1e-12 * (1.0 + head);
  if (general && m >= 3 && equal_tail && no_collinear) fire(2, "tail weight sum equals the first weight, no three points collinear");
  const bool median_single = cls.family == WeightFamily::Median && cls.scale > 0.0 && inst.p() == 1;
  if (median_single) why << "item 3: median weights with one center recover; ";
  if (general && m >= 3 && cls.family == WeightFamily::KSum && cls.k == 2 && no_collinear)
    fire(4, "2-sum weights, no three points collinear");
  if (general && cls.family == WeightFamily::Center) fire(5, "center weights");
  if (general && cls.family == WeightFamily::Centdian) {
    const double g = cls.gamma * static_cast<double>(m - 1);
    if (g < 1.0) {
      std::ostringstream t;
      t << "centdian gamma (m-1) = " << g << " < 1";
      fire(6, t.str());
    }
  }

  if (!pred.items.empty()) pred.kind = PredictionKind::NeverRecovers;
  else if (median_single) pred.kind = PredictionKind::MedianSingleRecovers;
  else pred.kind = PredictionKind::Unknown;
  pred.reason = why.str();
  if (pred.reason.size() >= 2) pred.reason.resize(pred.reason.size() - 2);
  if (pred.kind == PredictionKind::Unknown && pred.reason.empty()) pred.reason = "no item applies";
  return pred;
}

WeightVector conic_combine(const WeightVector& a, const WeightVector& b) {
  if (a.size() != b.size()) {
    throw ParameterError("cannot combine weight vectors of lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  std::vector<double> out(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) out[r] = a[r] + b[r];
  return WeightVector(std::move(out));
}

}  // namespace domp
