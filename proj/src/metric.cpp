#include "prefgame/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace prefgame {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::uniform: return "uniform";
    case MetricKind::table: return "table";
    case MetricKind::hamming: return "hamming";
    case MetricKind::squared_euclidean: return "l2sq";
  }
  return "unknown";
}

Metric Metric::uniform(std::vector<std::string> labels) {
  if (labels.empty()) throw Error("uniform metric needs at least one label");
  Metric m;
  m.kind_ = MetricKind::uniform;
  const std::size_t n = labels.size();
  m.labels_ = std::move(labels);
  m.matrix_.assign(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m.matrix_[i * n + i] = 0.0;
  m.rho_ = 1.0;
  return m;
}

Metric Metric::table(std::vector<std::string> labels,
                     std::vector<std::vector<double>> matrix, double rho) {
  const std::size_t n = labels.size();
  if (n == 0) throw Error("table metric needs at least one label");
  if (matrix.size() != n) throw Error("table metric matrix must have one row per label");
  if (!(rho >= 1.0)) throw Error("rho must be >= 1");
  Metric m;
  m.kind_ = MetricKind::table;
  m.rho_ = rho;
  m.matrix_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw Error("table metric matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v)) throw Error("table metric entry is not finite");
      if (v < 0.0) {
        std::ostringstream os;
        os << "negative distance between '" << labels[i] << "' and '" << labels[j] << "'";
        throw Error(os.str());
      }
      m.matrix_[i * n + j] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (m.matrix_[i * n + i] != 0.0) {
      throw Error("nonzero diagonal at '" + labels[i] + "'");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m.matrix_[i * n + j] != m.matrix_[j * n + i]) {
        throw Error("asymmetric distance between '" + labels[i] + "' and '" + labels[j] + "'");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (labels[i] == labels[j]) throw Error("duplicate metric label '" + labels[i] + "'");
    }
  }
  m.labels_ = std::move(labels);
  return m;
}

Metric Metric::hamming(std::size_t dim) {
  if (dim == 0) throw Error("hamming metric needs dim >= 1");
  Metric m;
  m.kind_ = MetricKind::hamming;
  m.dim_ = dim;
  m.rho_ = 1.0;
  return m;
}

Metric Metric::squared_euclidean(std::size_t dim) {
  if (dim == 0) throw Error("l2sq metric needs dim >= 1");
  Metric m;
  m.kind_ = MetricKind::squared_euclidean;
  m.dim_ = dim;
  m.rho_ = 2.0;
  return m;
}

std::optional<std::size_t> Metric::label_index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

bool Metric::contains(const Point& p) const {
  if (label_based()) {
    const auto* idx = std::get_if<std::size_t>(&p);
    return idx != nullptr && *idx < labels_.size();
  }
  const auto* c = std::get_if<Coords>(&p);
  if (c == nullptr || c->size() != dim_) return false;
  if (kind_ == MetricKind::hamming) {
    return std::all_of(c->begin(), c->end(), [](double v) { return v == 0.0 || v == 1.0; });
  }
  return std::all_of(c->begin(), c->end(), [](double v) { return std::isfinite(v); });
}

double Metric::entry(std::size_t a, std::size_t b) const {
  return matrix_[a * labels_.size() + b];
}

double Metric::operator()(const Point& u, const Point& v) const {
  if (!contains(u) || !contains(v)) {
    throw DomainError("point outside the domain of the " + to_string(kind_) + " metric");
  }
  switch (kind_) {
    case MetricKind::uniform:
    case MetricKind::table:
      return entry(std::get<std::size_t>(u), std::get<std::size_t>(v));
    case MetricKind::hamming: {
      const auto& a = std::get<Coords>(u);
      const auto& b = std::get<Coords>(v);
      double count = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) count += (a[k] != b[k]) ? 1.0 : 0.0;
      return count;
    }
    case MetricKind::squared_euclidean: {
      const auto& a = std::get<Coords>(u);
      const auto& b = std::get<Coords>(v);
      double sum = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        const double diff = a[k] - b[k];
        sum += diff * diff;
      }
      return sum;
    }
  }
  return 0.0;
}

MetricDescriptor Metric::descriptor() const {
  MetricDescriptor d;
  d.kind = kind_;
  d.labels = labels_;
  d.dim = dim_;
  d.rho = rho_;
  if (kind_ == MetricKind::table) {
    const std::size_t n = labels_.size();
    d.matrix.assign(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d.matrix[i][j] = entry(i, j);
  }
  return d;
}

Metric build_metric(const MetricDescriptor& spec) {
  if (spec.rho && !(*spec.rho >= 1.0)) throw Error("rho must be >= 1");
  auto fixed_rho = [&](double value) {
    if (spec.rho && *spec.rho != value) {
      std::ostringstream os;
      os << "rho of the " << to_string(spec.kind) << " metric is fixed at " << value;
      throw Error(os.str());
    }
  };
  switch (spec.kind) {
    case MetricKind::uniform:
      fixed_rho(1.0);
      return Metric::uniform(spec.labels);
    case MetricKind::table:
      return Metric::table(spec.labels, spec.matrix, spec.rho.value_or(1.0));
    case MetricKind::hamming:
      fixed_rho(1.0);
      return Metric::hamming(spec.dim);
    case MetricKind::squared_euclidean:
      fixed_rho(2.0);
      return Metric::squared_euclidean(spec.dim);
  }
  throw Error("unknown metric kind");
}

double distance(const Metric& m, const Point& u, const Point& v) { return m(u, v); }

std::string describe(const Metric& m, const Point& p) {
  if (const auto* idx = std::get_if<std::size_t>(&p)) {
    if (*idx < m.labels().size()) return m.labels()[*idx];
    return "#" + std::to_string(*idx);
  }
  std::ostringstream os;
  os << '(';
  const auto& c = std::get<Coords>(p);
  for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
  os << ')';
  return os.str();
}

MetricValidation validate_approx_metric(const Metric& m, std::span<const Point> points) {
  if (points.empty()) throw Error("metric validation needs a nonempty point set");
  const DistanceMatrix d(m, points);
  const std::size_t n = d.size();
  MetricValidation report;
  for (std::size_t x = 0; x < n; ++x) {
    if (d(x, x) != 0.0) report.zero_diag_ok = false;
    for (std::size_t y = 0; y < n; ++y) {
      if (d(x, y) != d(y, x)) report.symmetry_ok = false;
    }
  }
  double rho = 1.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double lhs = d(x, y);
      if (lhs == 0.0) continue;
      for (std::size_t z = 0; z < n; ++z) {
        const double via = d(x, z) + d(z, y);
        if (via == 0.0) {
          rho = std::numeric_limits<double>::infinity();
        } else {
          rho = std::max(rho, lhs / via);
        }
      }
    }
  }
  report.min_rho = rho;
  report.within_declared = rho <= m.rho() + kTolerance;
  return report;
}

DistanceMatrix::DistanceMatrix(const Metric& m, std::span<const Point> points)
    : size_(points.size()), d_(points.size() * points.size()) {
  for (std::size_t a = 0; a < size_; ++a) {
    for (std::size_t b = 0; b < size_; ++b) d_[a * size_ + b] = m(points[a], points[b]);
  }
}

double DistanceMatrix::max() const {
  double best = 0.0;
  for (double v : d_) best = std::max(best, v);
  return best;
}

std::optional<double> DistanceMatrix::min_positive() const {
  std::optional<double> best;
  for (double v : d_) {
    if (v > kZeroDistance && (!best || v < *best)) best = v;
  }
  return best;
}

}  // namespace prefgame
