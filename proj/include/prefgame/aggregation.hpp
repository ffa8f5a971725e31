#ifndef PREFGAME_AGGREGATION_HPP
#define PREFGAME_AGGREGATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefgame/metric.hpp"

namespace prefgame {

enum class UniverseKind {
  same_as_space,    // U = Z
  labeled_superset, // U is the label set of a label-based metric
  approval_simplex, // U = {u in [0,1]^m : sum u = k}
};

struct ApprovalSpec {
  std::size_t m = 0;
  std::size_t k = 0;
};

/// The finite public strategy space Z, in canonical order. Index order is the
/// tie-breaking order everywhere.
class StrategySpace {
 public:
  /// Z given by labels of a label-based metric. The metric's labels are U.
  static StrategySpace enumerated(const Metric& metric, const std::vector<std::string>& labels);
  /// All 0/1 vectors of length m with exactly k ones, ordered lexicographically
  /// by their sets of approved positions (so 1100 precedes 1010).
  static StrategySpace k_approval(ApprovalSpec spec);

  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t z) const { return points_[z]; }
  std::span<const Point> points() const { return points_; }
  const std::string& name(std::size_t z) const { return names_[z]; }
  const std::vector<std::string>& names() const { return names_; }
  UniverseKind universe() const { return universe_; }
  const std::optional<ApprovalSpec>& approval() const { return approval_; }

  std::optional<std::size_t> find(const std::string& name) const;

 private:
  std::vector<Point> points_;
  std::vector<std::string> names_;
  UniverseKind universe_ = UniverseKind::same_as_space;
  std::optional<ApprovalSpec> approval_;
};

enum class AggregationKind { frechet_mean, frechet_median };

std::string to_string(AggregationKind kind);

struct AggregateResult {
  std::size_t strategy = 0;
  /// Another strategy's objective was within kTolerance of the minimum.
  bool tie = false;
};

/// argmin over y in Z of sum_j w_j d(y, z_j)^p (p = 2 for the mean, 1 for the
/// median), lowest index among minimizers. Weights and strategies are aligned;
/// entries with zero weight are ignored, so a full row with w_ii = 0 can be
/// passed together with the full state.
AggregateResult aggregate(AggregationKind kind, const DistanceMatrix& zdist,
                          std::span<const double> weights,
                          std::span<const std::size_t> strategies);

/// Objective value of candidate y.
double aggregation_objective(AggregationKind kind, const DistanceMatrix& zdist,
                             std::span<const double> weights,
                             std::span<const std::size_t> strategies, std::size_t y);

std::size_t frechet_mean(const StrategySpace& space, const Metric& metric,
                         std::span<const double> weights,
                         std::span<const std::size_t> partial_state);
std::size_t frechet_median(const StrategySpace& space, const Metric& metric,
                           std::span<const double> weights,
                           std::span<const std::size_t> partial_state);

/// An aggregation rule over Z indices: (weights, strategies) -> strategy.
using AggregationRule =
    std::function<std::size_t(std::span<const double>, std::span<const std::size_t>)>;

AggregationRule make_rule(AggregationKind kind, DistanceMatrix zdist);

struct AggregationViolation {
  std::size_t row = 0;
  std::vector<std::size_t> x;
  std::vector<std::size_t> y;  // empty for unanimity
  std::size_t aggregate_x = 0;
  std::size_t aggregate_y = 0;
};

struct UnanimityVerdict {
  bool ok = true;
  std::optional<AggregationViolation> violation;
};

struct ConsistencyVerdict {
  bool ok = true;
  bool exhaustive = false;
  std::uint64_t pairs_checked = 0;
  std::optional<AggregationViolation> violation;
};

/// Rows are weight vectors over the other agents (or full rows paired with
/// full states; zero entries never influence a feasible rule).
UnanimityVerdict check_unanimity(const AggregationRule& rule, std::size_t space_size,
                                 std::span<const std::vector<double>> rows);

/// Pairs (x, y) with sum_j w_j d(x_j, y_j) = 0 must aggregate equally. Exhausts
/// all pairs when |Z|^(2 len) <= exhaustive_budget, otherwise samples
/// `trials` of them per row with the given seed.
ConsistencyVerdict check_consistency(const AggregationRule& rule, const DistanceMatrix& zdist,
                                     std::span<const std::vector<double>> rows,
                                     std::uint64_t trials, std::uint64_t seed = 1,
                                     std::uint64_t exhaustive_budget = 100000);

}  // namespace prefgame

#endif  // PREFGAME_AGGREGATION_HPP
