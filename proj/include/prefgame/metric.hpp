#ifndef PREFGAME_METRIC_HPP
#define PREFGAME_METRIC_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace prefgame {

/// Absolute tolerance used for every equality test on costs and distances.
inline constexpr double kTolerance = 1e-9;

/// Distances at or below this value count as coincident points.
inline constexpr double kZeroDistance = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

using Coords = std::vector<double>;

/// A point of the universe: a label index for label-based metrics, or a
/// coordinate vector for vector-based metrics.
using Point = std::variant<std::size_t, Coords>;

enum class MetricKind { uniform, table, hamming, squared_euclidean };

std::string to_string(MetricKind kind);

struct MetricDescriptor {
  MetricKind kind = MetricKind::uniform;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> matrix;
  std::size_t dim = 0;
  std::optional<double> rho;
};

/// A symmetric nonnegative dissimilarity with a declared approximation factor.
/// Immutable once built.
class Metric {
 public:
  static Metric uniform(std::vector<std::string> labels);
  static Metric table(std::vector<std::string> labels,
                      std::vector<std::vector<double>> matrix, double rho = 1.0);
  static Metric hamming(std::size_t dim);
  static Metric squared_euclidean(std::size_t dim);

  MetricKind kind() const { return kind_; }
  double rho() const { return rho_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool label_based() const {
    return kind_ == MetricKind::uniform || kind_ == MetricKind::table;
  }

  std::optional<std::size_t> label_index(const std::string& label) const;
  bool contains(const Point& p) const;

  /// Throws DomainError when either point is outside the metric's domain.
  double operator()(const Point& u, const Point& v) const;

  /// Table entry for label-based metrics (uniform or table).
  double entry(std::size_t a, std::size_t b) const;

  MetricDescriptor descriptor() const;

 private:
  Metric() = default;

  MetricKind kind_ = MetricKind::uniform;
  std::vector<std::string> labels_;
  std::vector<double> matrix_;  // row-major, labels_.size() squared
  std::size_t dim_ = 0;
  double rho_ = 1.0;
};

/// Validates a descriptor and builds the metric. Throws Error on asymmetric
/// or negative tables, nonzero diagonals, and rho < 1.
Metric build_metric(const MetricDescriptor& spec);

double distance(const Metric& m, const Point& u, const Point& v);

std::string describe(const Metric& m, const Point& p);

struct MetricValidation {
  bool symmetry_ok = true;
  bool zero_diag_ok = true;
  /// Smallest r >= 1 with d(x,y) <= r (d(x,z) + d(z,y)) over all ordered
  /// triples; +inf when some d(x,y) > 0 has d(x,z) + d(z,y) = 0.
  double min_rho = 1.0;
  bool within_declared = true;
  bool exact() const { return symmetry_ok && zero_diag_ok && min_rho <= 1.0 + kTolerance; }
};

MetricValidation validate_approx_metric(const Metric& m, std::span<const Point> points);

/// Dense matrix of pairwise distances over a fixed point sequence.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(const Metric& m, std::span<const Point> points);

  std::size_t size() const { return size_; }
  double operator()(std::size_t a, std::size_t b) const { return d_[a * size_ + b]; }
  double max() const;
  /// Smallest distance above kZeroDistance; nullopt when every pair coincides.
  std::optional<double> min_positive() const;

 private:
  std::size_t size_ = 0;
  std::vector<double> d_;
};

}  // namespace prefgame

#endif  // PREFGAME_METRIC_HPP
