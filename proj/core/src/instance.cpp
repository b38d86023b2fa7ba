#include "domp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "domp/error.hpp"
#include "domp/ordered_median.hpp"

namespace domp {

DistanceMatrix::DistanceMatrix(std::size_t m) : m_(m), d_(m * m, 0.0) {}

DistanceMatrix::DistanceMatrix(std::size_t m, std::vector<double> values)
    : m_(m), d_(std::move(values)) {
  if (d_.size() != m_ * m_) {
    throw StructuralError("distance matrix needs " + std::to_string(m_ * m_) + " entries, got " +
                          std::to_string(d_.size()));
  }
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t m = rows.size();
  std::vector<double> flat;
  flat.reserve(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) {
      throw StructuralError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " entries; matrix is not square");
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return DistanceMatrix(m, std::move(flat));
}

double DistanceMatrix::max_entry() const noexcept {
  double best = 0.0;
  for (double v : d_) best = std::max(best, v);
  return best;
}

DistanceMatrix DistanceMatrix::submatrix(std::span<const std::size_t> indices) const {
  const std::size_t k = indices.size();
  std::vector<double> out(k * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) out[a * k + b] = (*this)(indices[a], indices[b]);
  return DistanceMatrix(k, std::move(out));
}

std::vector<double> DistanceMatrix::upper_triangle() const {
  std::vector<double> out;
  out.reserve(m_ * (m_ - (m_ > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = i + 1; j < m_; ++j) out.push_back((*this)(i, j));
  return out;
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw StructuralError("point dimension must be positive");
  if (coords_.size() % dim_ != 0) {
    throw StructuralError("coordinate count is not a multiple of the dimension");
  }
}

DistanceMatrix PointSet::euclidean() const {
  const std::size_t m = size();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        const double diff = coords_[i * dim_ + k] - coords_[j * dim_ + k];
        s += diff * diff;
      }
      d[i * m + j] = d[j * m + i] = std::sqrt(s);
    }
  }
  return DistanceMatrix(m, std::move(d));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  std::vector<double> out;
  out.reserve(indices.size() * dim_);
  for (std::size_t i : indices) {
    auto p = point(i);
    out.insert(out.end(), p.begin(), p.end());
  }
  return PointSet(dim_, std::move(out));
}

bool PointSet::has_three_collinear() const {
  using boost::multiprecision::cpp_int;
  const std::size_t m = size();
  if (m < 3) return false;

  // Every finite double is M * 2^e with integer M; rescaling all coordinates
  // by a common power of two keeps collinearity and makes them integers.
  int min_exp = std::numeric_limits<int>::max();
  for (double c : coords_) {
    if (!std::isfinite(c)) throw ParameterError("non-finite coordinate");
    if (c == 0.0) continue;
    int e = 0;
    std::frexp(c, &e);
    min_exp = std::min(min_exp, e - std::numeric_limits<double>::digits);
  }
  std::vector<cpp_int> ints(coords_.size());
  if (min_exp != std::numeric_limits<int>::max()) {
    for (std::size_t k = 0; k < coords_.size(); ++k) {
      const double c = coords_[k];
      if (c == 0.0) continue;
      int e = 0;
      const double frac = std::frexp(c, &e);
      const auto mant = static_cast<long long>(std::ldexp(frac, std::numeric_limits<double>::digits));
      cpp_int v = mant;
      v <<= (e - std::numeric_limits<double>::digits - min_exp);
      ints[k] = v;
    }
  }

  auto at = [&](std::size_t i, std::size_t k) -> const cpp_int& { return ints[i * dim_ + k]; };
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        bool collinear = true;
        for (std::size_t k = 0; k < dim_ && collinear; ++k) {
          for (std::size_t l = k + 1; l < dim_ && collinear; ++l) {
            const cpp_int lhs = (at(b, k) - at(a, k)) * (at(c, l) - at(a, l));
            const cpp_int rhs = (at(b, l) - at(a, l)) * (at(c, k) - at(a, k));
            if (lhs != rhs) collinear = false;
          }
        }
        if (collinear) return true;
      }
    }
  }
  return false;
}

std::string ValidationReport::describe() const {
  std::ostringstream os;
  if (ok()) return "valid metric";
  if (diagonal) os << "nonzero diagonal at " << diagonal->i << " (" << diagonal->magnitude << "); ";
  if (negative)
    os << "negative entry at (" << negative->i << "," << negative->j << ") (" << negative->magnitude
       << "); ";
  if (symmetry)
    os << "asymmetry at (" << symmetry->i << "," << symmetry->j << ") (" << symmetry->magnitude
       << "); ";
  if (triangle)
    os << "triangle violation " << triangle->i << "->" << triangle->via << "->" << triangle->j
       << " (" << triangle->magnitude << ")";
  return os.str();
}

namespace {

void keep_worst(std::optional<MetricViolation>& slot, MetricViolation v) {
  if (!slot || v.magnitude > slot->magnitude) slot = v;
}

}  // namespace

ValidationReport validate_metric(const DistanceMatrix& dist, double triangle_tol) {
  ValidationReport report;
  const std::size_t m = dist.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (dist(i, i) != 0.0) keep_worst(report.diagonal, {i, i, i, std::abs(dist(i, i))});
    for (std::size_t j = 0; j < m; ++j) {
      if (dist(i, j) < 0.0) keep_worst(report.negative, {i, j, j, -dist(i, j)});
      if (j > i && dist(i, j) != dist(j, i))
        keep_worst(report.symmetry, {i, j, j, std::abs(dist(i, j) - dist(j, i))});
    }
  }
  const double slack = triangle_tol * (1.0 + dist.max_entry());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (k == i || k == j) continue;
        const double excess = dist(i, j) - dist(i, k) - dist(k, j);
        if (excess > slack) keep_worst(report.triangle, {i, j, k, excess});
      }
    }
  }
  return report;
}

bool is_free_of_equidistance(const DistanceMatrix& dist, double tolerance) {
  std::vector<double> entries = dist.upper_triangle();
  std::sort(entries.begin(), entries.end());
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (tolerance > 0.0 ? entries[k] - entries[k - 1] <= tolerance : entries[k] == entries[k - 1])
      return false;
  }
  return true;
}

WeightVector::WeightVector(std::vector<double> values) : w_(std::move(values)) {
  for (std::size_t r = 0; r < w_.size(); ++r) {
    if (!std::isfinite(w_[r])) throw ParameterError("weights must be finite");
    if (w_[r] < 0.0) {
      throw ParameterError("weights must be nonnegative (lambda_" + std::to_string(r + 1) + " < 0)");
    }
    if (r + 1 < w_.size() && w_[r] < w_[r + 1]) {
      throw ParameterError("weights must be non-increasing (lambda_" + std::to_string(r + 1) +
                           " < lambda_" + std::to_string(r + 2) + ")");
    }
  }
}

std::vector<double> WeightVector::deltas() const {
  std::vector<double> delta(w_.size());
  for (std::size_t r = 0; r < w_.size(); ++r)
    delta[r] = r + 1 < w_.size() ? w_[r] - w_[r + 1] : w_[r];
  return delta;
}

std::string to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::Median: return "median";
    case WeightFamily::Center: return "center";
    case WeightFamily::KSum: return "ksum";
    case WeightFamily::Centdian: return "centdian";
    case WeightFamily::General: return "general";
  }
  return "general";
}

std::size_t WeightSpec::resolve_k(std::size_t m) const {
  if (k_fraction) {
    const double f = *k_fraction;
    if (!(f > 0.0) || f > 1.0) throw ParameterError("k fraction must lie in (0, 1]");
    return static_cast<std::size_t>(std::ceil(f * static_cast<double>(m) - 1e-12));
  }
  return k;
}

namespace {

std::string short_number(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

}  // namespace

std::string WeightSpec::label() const {
  switch (family) {
    case WeightFamily::Median: return "median";
    case WeightFamily::Center: return "center";
    case WeightFamily::KSum:
      return k_fraction ? "ksum:" + short_number(*k_fraction) + "m" : "ksum:" + std::to_string(k);
    case WeightFamily::Centdian: return "centdian:" + short_number(gamma);
    case WeightFamily::General: return "explicit";
  }
  return "explicit";
}

namespace {

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParameterError("cannot parse " + what + " from '" + s + "'");
  }
  if (used != s.size()) throw ParameterError("trailing characters in " + what + " '" + s + "'");
  return v;
}

}  // namespace

WeightSpec parse_weight_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "median" && arg.empty()) return WeightSpec::median();
  if (head == "center" && arg.empty()) return WeightSpec::center();
  if (head == "ksum") {
    if (arg.empty()) throw ParameterError("ksum needs a parameter: ksum:K or ksum:Fm");
    if (arg.back() == 'm') return WeightSpec::ksum_fraction(parse_double(arg.substr(0, arg.size() - 1), "k fraction"));
    const double k = parse_double(arg, "k");
    if (k < 1 || k != std::floor(k)) throw ParameterError("k must be a positive integer");
    return WeightSpec::ksum(static_cast<std::size_t>(k));
  }
  if (head == "centdian") {
    if (arg.empty()) throw ParameterError("centdian needs a parameter: centdian:G");
    return WeightSpec::centdian(parse_double(arg, "gamma"));
  }
  if (head == "file") {
    std::ifstream in(arg);
    if (!in) throw ParameterError("cannot open weight file '" + arg + "'");
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw ParameterError("weight file '" + arg + "' contains a non-number");
    return WeightSpec::explicit_values(std::move(values));
  }
  throw ParameterError("unknown weight spec '" + text +
                       "' (expected median, center, ksum:K, centdian:G or file:PATH)");
}

WeightVector make_weights(const WeightSpec& spec, std::size_t m) {
  if (m == 0) throw ParameterError("weight vector length must be positive");
  std::vector<double> w(m, 0.0);
  switch (spec.family) {
    case WeightFamily::Median:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case WeightFamily::Center:
      w[0] = 1.0;
      break;
    case WeightFamily::KSum: {
      const std::size_t k = spec.resolve_k(m);
      if (k < 1 || k > m) {
        throw ParameterError("k-sum needs 1 <= k <= m (k=" + std::to_string(k) +
                             ", m=" + std::to_string(m) + ")");
      }
      std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k), 1.0);
      break;
    }
    case WeightFamily::Centdian:
      if (!(spec.gamma >= 0.0 && spec.gamma <= 1.0))
        throw ParameterError("centdian needs 0 <= gamma <= 1");
      std::fill(w.begin(), w.end(), spec.gamma);
      w[0] = 1.0;
      break;
    case WeightFamily::General:
      if (spec.values.size() != m) {
        throw ParameterError("explicit weights have length " + std::to_string(spec.values.size()) +
                             ", expected " + std::to_string(m));
      }
      w = spec.values;
      break;
  }
  return WeightVector(std::move(w));
}

WeightClass classify_weights(const WeightVector& weights) {
  auto w = weights.values();
  const std::size_t m = w.size();
  WeightClass out;
  out.scale = m > 0 ? w[0] : 0.0;
  if (m == 0 || w[0] == 0.0) {
    out.family = WeightFamily::Median;
    return out;
  }
  const double top = w[0];
  if (std::all_of(w.begin(), w.end(), [&](double v) { return v == top; })) {
    out.family = WeightFamily::Median;
    return out;
  }
  if (std::all_of(w.begin() + 1, w.end(), [](double v) { return v == 0.0; })) {
    out.family = WeightFamily::Center;
    return out;
  }
  // k-sum: a block equal to lambda_1 followed by zeros.
  std::size_t k = 0;
  while (k < m && w[k] == top) ++k;
  if (std::all_of(w.begin() + static_cast<std::ptrdiff_t>(k), w.end(), [](double v) { return v == 0.0; })) {
    out.family = WeightFamily::KSum;
    out.k = k;
    return out;
  }
  if (m >= 2 && std::all_of(w.begin() + 1, w.end(), [&](double v) { return v == w[1]; })) {
    out.family = WeightFamily::Centdian;
    out.gamma = w[1] / top;
    return out;
  }
  out.family = WeightFamily::General;
  return out;
}

Instance::Instance(DistanceMatrix dist, WeightVector weights, std::size_t p,
                   std::optional<PointSet> points)
    : dist_(std::move(dist)), weights_(std::move(weights)), p_(p), points_(std::move(points)) {
  if (dist_.size() == 0) throw ParameterError("instance needs at least one point");
  if (weights_.size() != dist_.size()) {
    throw ParameterError("weight vector has length " + std::to_string(weights_.size()) +
                         " but the instance has " + std::to_string(dist_.size()) + " points");
  }
  if (p_ < 1 || p_ > dist_.size()) {
    throw ParameterError("p must satisfy 1 <= p <= m (p=" + std::to_string(p_) +
                         ", m=" + std::to_string(dist_.size()) + ")");
  }
  if (points_ && points_->size() != dist_.size())
    throw StructuralError("point set size does not match the distance matrix");
}

Instance Instance::with_weights(WeightVector weights) const {
  return Instance(dist_, std::move(weights), p_, points_);
}

Instance Instance::with_p(std::size_t p) const { return Instance(dist_, weights_, p, points_); }

std::vector<std::size_t> CenterSolution::members(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == j) out.push_back(i);
  return out;
}

bool CenterSolution::is_center(std::size_t j) const {
  return std::binary_search(centers.begin(), centers.end(), j);
}

Instance restrict_instance(const Instance& inst, const CenterSolution& sol, std::size_t j) {
  if (!sol.is_center(j)) {
    throw ParameterError("point " + std::to_string(j) + " is not a center of the solution");
  }
  const std::vector<std::size_t> gamma = sol.members(j);
  const SortPermutation sigma = SortPermutation::of(sol.distances);

  std::vector<std::size_t> positions;
  positions.reserve(gamma.size());
  for (std::size_t i : gamma) positions.push_back(sigma.position_of(i));
  std::sort(positions.begin(), positions.end());
  std::vector<double> sub_weights;
  sub_weights.reserve(positions.size());
  for (std::size_t r : positions) sub_weights.push_back(inst.weights()[r]);

  std::optional<PointSet> sub_points;
  if (inst.points()) sub_points = inst.points()->subset(gamma);
  return Instance(inst.dist().submatrix(gamma), WeightVector(std::move(sub_weights)), 1,
                  std::move(sub_points));
}

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

class TokenReader {
 public:
  TokenReader(std::istream& in, std::string source, std::size_t first_line)
      : in_(in), source_(std::move(source)), line_(first_line) {}

  double next_double(const char* what) {
    while (pos_ >= tokens_.size()) {
      std::string line;
      if (!std::getline(in_, line)) {
        throw ParseError(source_, line_, std::string("unexpected end of file while reading ") + what);
      }
      ++line_;
      tokens_ = split_tokens(line);
      pos_ = 0;
    }
    const std::string& tok = tokens_[pos_++];
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ParseError(source_, line_, "not a number: '" + tok + "'");
    return v;
  }

  void expect_end() {
    if (pos_ < tokens_.size()) throw ParseError(source_, line_, "unexpected trailing token");
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!split_tokens(line).empty()) throw ParseError(source_, line_, "unexpected trailing data");
    }
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

std::size_t as_count(double v, const std::string& source, std::size_t line, const char* what) {
  if (v < 0 || v != std::floor(v)) {
    throw ParseError(source, line, std::string(what) + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

InstanceFile read_instance(std::istream& in, const std::string& source) {
  std::string header;
  std::size_t line_no = 0;
  std::vector<std::string> tokens;
  while (tokens.empty()) {
    if (!std::getline(in, header)) throw ParseError(source, line_no, "empty instance file");
    ++line_no;
    tokens = split_tokens(header);
  }
  std::vector<double> head;
  for (const auto& t : tokens) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw ParseError(source, line_no, "not a number: '" + t + "'");
    head.push_back(v);
  }

  InstanceFile file;
  TokenReader reader(in, source, line_no);
  if (head.size() == 2) {
    const std::size_t m = as_count(head[0], source, line_no, "m");
    file.p = as_count(head[1], source, line_no, "p");
    if (m == 0) throw ParseError(source, line_no, "m must be positive");
    std::vector<double> w(m);
    for (auto& v : w) v = reader.next_double("weights");
    std::vector<double> d(m * m);
    for (auto& v : d) v = reader.next_double("distance matrix");
    reader.expect_end();
    file.weights = std::move(w);
    file.dist = DistanceMatrix(m, std::move(d));
  } else if (head.size() == 3) {
    const std::size_t m = as_count(head[0], source, line_no, "m");
    const std::size_t n = as_count(head[1], source, line_no, "n");
    file.p = as_count(head[2], source, line_no, "p");
    if (m == 0 || n == 0) throw ParseError(source, line_no, "m and n must be positive");
    std::vector<double> c(m * n);
    for (auto& v : c) v = reader.next_double("coordinates");
    reader.expect_end();
    PointSet pts(n, std::move(c));
    file.dist = pts.euclidean();
    file.points = std::move(pts);
  } else {
    throw ParseError(source, line_no, "header must be `m p` or `m n p`");
  }
  return file;
}

InstanceFile read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return read_instance(in, path);
}

void write_instance_matrix(std::ostream& out, const Instance& inst) {
  const std::size_t m = inst.size();
  out << m << ' ' << inst.p() << '\n';
  out << std::setprecision(17);
  for (std::size_t r = 0; r < m; ++r) out << (r ? " " : "") << inst.weights()[r];
  out << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out << (j ? " " : "") << inst.dist()(i, j);
    out << '\n';
  }
}

void write_instance_points(std::ostream& out, const PointSet& points, std::size_t p) {
  out << points.size() << ' ' << points.dim() << ' ' << p << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto pt = points.point(i);
    for (std::size_t k = 0; k < pt.size(); ++k) out << (k ? " " : "") << pt[k];
    out << '\n';
  }
}

}  // namespace domp
