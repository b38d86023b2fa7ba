#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace domp {

/// Square matrix of pairwise distances, stored row-major.
///
/// Construction only checks the shape. Metric properties (zero diagonal,
/// symmetry, triangle inequality) are checked by validate_metric so that
/// malformed matrices can still be inspected and reported on.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t m);
  DistanceMatrix(std::size_t m, std::vector<double> values);

  /// Builds from nested rows; throws StructuralError when not square.
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * m_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {d_.data() + i * m_, m_};
  }
  std::span<const double> values() const noexcept { return d_; }

  double max_entry() const noexcept;

  /// Principal submatrix on the given indices, in the given order.
  DistanceMatrix submatrix(std::span<const std::size_t> indices) const;

  /// Entries strictly above the diagonal, row by row.
  std::vector<double> upper_triangle() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<double> d_;
};

/// m points in n-dimensional space, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<double> coords);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<const double> coords() const noexcept { return coords_; }

  DistanceMatrix euclidean() const;
  PointSet subset(std::span<const std::size_t> indices) const;

  /// True when some three distinct points are collinear, decided in exact
  /// rational arithmetic on the stored binary coordinates.
  bool has_three_collinear() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

struct MetricViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t via = 0;  // intermediate point for triangle witnesses
  double magnitude = 0.0;
};

/// One witness per violated invariant class; every field empty means the
/// matrix is a valid metric.
struct ValidationReport {
  std::optional<MetricViolation> diagonal;
  std::optional<MetricViolation> negative;
  std::optional<MetricViolation> symmetry;
  std::optional<MetricViolation> triangle;  // worst d(i,j) - d(i,via) - d(via,j)

  bool ok() const noexcept { return !diagonal && !negative && !symmetry && !triangle; }
  std::string describe() const;
};

/// Triangle slack is tolerated up to `triangle_tol * (1 + max entry)`, which
/// absorbs rounding in Euclidean matrices. Symmetry and diagonal are exact.
ValidationReport validate_metric(const DistanceMatrix& dist, double triangle_tol = 1e-12);

/// True when all strict-upper-triangle entries are pairwise distinct.
/// With `tolerance > 0`, entries closer than `tolerance` count as equal.
bool is_free_of_equidistance(const DistanceMatrix& dist, double tolerance = 0.0);

/// Non-increasing, nonnegative sorting weights.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> values);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t r) const noexcept { return w_[r]; }
  std::span<const double> values() const noexcept { return w_; }

  /// Telescoped differences: delta[r] = w[r] - w[r+1], delta[m-1] = w[m-1].
  std::vector<double> deltas() const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> w_;
};

enum class WeightFamily { Median, Center, KSum, Centdian, General };

std::string to_string(WeightFamily family);

/// Parameters for make_weights. For KSum either `k` or `k_fraction` is used;
/// a fraction f resolves to k = ceil(f * m).
struct WeightSpec {
  WeightFamily family = WeightFamily::Median;
  std::size_t k = 0;
  std::optional<double> k_fraction;
  double gamma = 0.0;
  std::vector<double> values;  // General (explicit) only

  static WeightSpec median() { return make(WeightFamily::Median); }
  static WeightSpec center() { return make(WeightFamily::Center); }
  static WeightSpec ksum(std::size_t k) {
    WeightSpec s = make(WeightFamily::KSum);
    s.k = k;
    return s;
  }
  static WeightSpec ksum_fraction(double f) {
    WeightSpec s = make(WeightFamily::KSum);
    s.k_fraction = f;
    return s;
  }
  static WeightSpec centdian(double gamma) {
    WeightSpec s = make(WeightFamily::Centdian);
    s.gamma = gamma;
    return s;
  }
  static WeightSpec explicit_values(std::vector<double> v) {
    WeightSpec s = make(WeightFamily::General);
    s.values = std::move(v);
    return s;
  }

  /// Resolved k for a given problem size (KSum only).
  std::size_t resolve_k(std::size_t m) const;

  /// Short label such as "ksum:3" or "centdian:0.5".
  std::string label() const;

 private:
  static WeightSpec make(WeightFamily f) {
    WeightSpec s;
    s.family = f;
    return s;
  }
};

/// Parses `median | center | ksum:K | ksum:Fm | centdian:G | file:PATH`.
/// Throws ParameterError on malformed input.
WeightSpec parse_weight_spec(const std::string& text);

WeightVector make_weights(const WeightSpec& spec, std::size_t m);

struct WeightClass {
  WeightFamily family = WeightFamily::General;
  double scale = 0.0;  // lambda_1
  std::size_t k = 0;   // KSum
  double gamma = 0.0;  // Centdian
};

/// Detects the family up to positive scaling. All-zero weights are a median
/// of scale 0.
WeightClass classify_weights(const WeightVector& weights);

/// The full ordered median input: distances, weights, number of centers.
class Instance {
 public:
  Instance(DistanceMatrix dist, WeightVector weights, std::size_t p,
           std::optional<PointSet> points = std::nullopt);

  std::size_t size() const noexcept { return dist_.size(); }
  std::size_t p() const noexcept { return p_; }
  const DistanceMatrix& dist() const noexcept { return dist_; }
  const WeightVector& weights() const noexcept { return weights_; }
  const std::optional<PointSet>& points() const noexcept { return points_; }

  Instance with_weights(WeightVector weights) const;
  Instance with_p(std::size_t p) const;

 private:
  DistanceMatrix dist_;
  WeightVector weights_;
  std::size_t p_;
  std::optional<PointSet> points_;
};

/// Centers, nearest-center allocation and the resulting ordered median value.
struct CenterSolution {
  std::vector<std::size_t> centers;     // ascending
  std::vector<std::size_t> assignment;  // point -> center
  std::vector<double> distances;        // point -> distance to its center
  double value = 0.0;

  /// Points allocated to center j, ascending.
  std::vector<std::size_t> members(std::size_t j) const;
  bool is_center(std::size_t j) const;
};

/// Sub-instance on the points allocated to center j, with p = 1 and the
/// weights at the sorted positions those points occupy.
Instance restrict_instance(const Instance& inst, const CenterSolution& sol, std::size_t j);

/// Contents of an instance file. Matrix files carry weights; coordinate
/// files do not.
struct InstanceFile {
  DistanceMatrix dist;
  std::optional<PointSet> points;
  std::optional<std::vector<double>> weights;
  std::size_t p = 1;
};

InstanceFile read_instance(std::istream& in, const std::string& source = "<stream>");
InstanceFile read_instance_file(const std::string& path);

/// Matrix format: `m p`, weights line, m distance rows.
void write_instance_matrix(std::ostream& out, const Instance& inst);
/// Coordinate format: `m n p`, m coordinate rows (round-trip precision).
void write_instance_points(std::ostream& out, const PointSet& points, std::size_t p);

}  // namespace domp
