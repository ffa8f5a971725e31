#include "prefgame/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "prefgame/random.hpp"

namespace prefgame {

StrategySpace StrategySpace::enumerated(const Metric& metric,
                                        const std::vector<std::string>& labels) {
  if (!metric.label_based()) {
    throw Error("an enumerated strategy space needs a uniform or table metric");
  }
  if (labels.size() < 2) throw Error("strategy space needs |Z| >= 2");
  StrategySpace s;
  for (const auto& label : labels) {
    auto idx = metric.label_index(label);
    if (!idx) throw Error("strategy '" + label + "' is not a point of the metric");
    if (std::find(s.names_.begin(), s.names_.end(), label) != s.names_.end()) {
      throw Error("duplicate strategy '" + label + "'");
    }
    s.points_.emplace_back(*idx);
    s.names_.push_back(label);
  }
  s.universe_ = labels.size() == metric.labels().size() ? UniverseKind::same_as_space
                                                         : UniverseKind::labeled_superset;
  return s;
}

StrategySpace StrategySpace::k_approval(ApprovalSpec spec) {
  if (spec.k < 1 || spec.k >= spec.m) throw Error("k-approval needs 1 <= k < m");
  if (spec.m > 24) throw Error("k-approval space too large (m > 24)");
  StrategySpace s;
  s.universe_ = UniverseKind::approval_simplex;
  s.approval_ = spec;
  // Combinations of approved positions in lexicographic order.
  std::vector<std::size_t> pos(spec.k);
  for (std::size_t i = 0; i < spec.k; ++i) pos[i] = i;
  while (true) {
    Coords v(spec.m, 0.0);
    for (auto p : pos) v[p] = 1.0;
    std::string name(spec.m, '0');
    for (auto p : pos) name[p] = '1';
    s.points_.emplace_back(std::move(v));
    s.names_.push_back(std::move(name));
    std::size_t i = spec.k;
    while (i > 0 && pos[i - 1] == spec.m - spec.k + (i - 1)) --i;
    if (i == 0) break;
    ++pos[i - 1];
    for (std::size_t j = i; j < spec.k; ++j) pos[j] = pos[j - 1] + 1;
  }
  return s;
}

std::optional<std::size_t> StrategySpace::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::string to_string(AggregationKind kind) {
  return kind == AggregationKind::frechet_mean ? "frechet_mean" : "frechet_median";
}

double aggregation_objective(AggregationKind kind, const DistanceMatrix& zdist,
                             std::span<const double> weights,
                             std::span<const std::size_t> strategies, std::size_t y) {
  double total = 0.0;
  for (std::size_t j = 0; j < strategies.size(); ++j) {
    const double w = weights[j];
    if (w == 0.0) continue;
    const double d = zdist(y, strategies[j]);
    total += w * (kind == AggregationKind::frechet_mean ? d * d : d);
  }
  return total;
}

AggregateResult aggregate(AggregationKind kind, const DistanceMatrix& zdist,
                          std::span<const double> weights,
                          std::span<const std::size_t> strategies) {
  const std::size_t zn = zdist.size();
  double best = std::numeric_limits<double>::infinity();
  thread_local std::vector<double> values;
  values.resize(zn);
  for (std::size_t y = 0; y < zn; ++y) {
    values[y] = aggregation_objective(kind, zdist, weights, strategies, y);
    best = std::min(best, values[y]);
  }
  AggregateResult result;
  bool found = false;
  for (std::size_t y = 0; y < zn; ++y) {
    if (values[y] <= best + kTolerance) {
      if (!found) {
        result.strategy = y;
        found = true;
      } else {
        result.tie = true;
      }
    }
  }
  return result;
}

namespace {

std::size_t checked_frechet(AggregationKind kind, const StrategySpace& space,
                            const Metric& metric, std::span<const double> weights,
                            std::span<const std::size_t> partial_state) {
  if (weights.size() != partial_state.size()) {
    throw Error("weight row and partial state differ in length");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || w > 1.0) throw Error("weight outside [0,1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kTolerance) throw Error("weight row is not normalized");
  for (auto z : partial_state) {
    if (z >= space.size()) throw DomainError("strategy outside Z");
  }
  const DistanceMatrix zdist(metric, space.points());
  return aggregate(kind, zdist, weights, partial_state).strategy;
}

}  // namespace

std::size_t frechet_mean(const StrategySpace& space, const Metric& metric,
                         std::span<const double> weights,
                         std::span<const std::size_t> partial_state) {
  return checked_frechet(AggregationKind::frechet_mean, space, metric, weights, partial_state);
}

std::size_t frechet_median(const StrategySpace& space, const Metric& metric,
                           std::span<const double> weights,
                           std::span<const std::size_t> partial_state) {
  return checked_frechet(AggregationKind::frechet_median, space, metric, weights,
                         partial_state);
}

AggregationRule make_rule(AggregationKind kind, DistanceMatrix zdist) {
  auto shared = std::make_shared<const DistanceMatrix>(std::move(zdist));
  return [kind, shared](std::span<const double> w, std::span<const std::size_t> z) {
    return aggregate(kind, *shared, w, z).strategy;
  };
}

UnanimityVerdict check_unanimity(const AggregationRule& rule, std::size_t space_size,
                                 std::span<const std::vector<double>> rows) {
  UnanimityVerdict verdict;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t x = 0; x < space_size; ++x) {
      const std::vector<std::size_t> consensus(rows[r].size(), x);
      const std::size_t out = rule(rows[r], consensus);
      if (out != x) {
        verdict.ok = false;
        verdict.violation = AggregationViolation{r, consensus, {}, out, x};
        return verdict;
      }
    }
  }
  return verdict;
}

namespace {

// Strategies y_j with w_j d(x_j, y_j) = 0.
std::vector<std::vector<std::size_t>> compatible_choices(const DistanceMatrix& zdist,
                                                         std::span<const double> row,
                                                         std::span<const std::size_t> x) {
  std::vector<std::vector<std::size_t>> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t y = 0; y < zdist.size(); ++y) {
      if (row[j] * zdist(x[j], y) <= kZeroDistance) out[j].push_back(y);
    }
  }
  return out;
}

bool next_index(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t p = digits.size(); p-- > 0;) {
    if (++digits[p] < radix[p]) return true;
    digits[p] = 0;
  }
  return false;
}

}  // namespace

ConsistencyVerdict check_consistency(const AggregationRule& rule, const DistanceMatrix& zdist,
                                     std::span<const std::vector<double>> rows,
                                     std::uint64_t trials, std::uint64_t seed,
                                     std::uint64_t exhaustive_budget) {
  if (trials == 0) throw Error("consistency check needs trials >= 1");
  ConsistencyVerdict verdict;
  const std::size_t zn = zdist.size();
  Rng rng(seed);

  auto check_pair = [&](std::size_t r, const std::vector<std::size_t>& x,
                        const std::vector<std::size_t>& y) {
    ++verdict.pairs_checked;
    const std::size_t ax = rule(rows[r], x);
    const std::size_t ay = rule(rows[r], y);
    if (ax != ay) {
      verdict.ok = false;
      verdict.violation = AggregationViolation{r, x, y, ax, ay};
      return false;
    }
    return true;
  };

  verdict.exhaustive = true;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t len = rows[r].size();
    // Worst case is |Z|^len states times |Z|^len partners.
    double worst = std::pow(static_cast<double>(zn), 2.0 * static_cast<double>(len));
    if (worst <= static_cast<double>(exhaustive_budget)) {
      std::vector<std::size_t> x(len, 0);
      const std::vector<std::size_t> zradix(len, zn);
      do {
        const auto choices = compatible_choices(zdist, rows[r], x);
        std::vector<std::size_t> radix(len), digits(len, 0);
        for (std::size_t j = 0; j < len; ++j) radix[j] = choices[j].size();
        do {
          std::vector<std::size_t> y(len);
          for (std::size_t j = 0; j < len; ++j) y[j] = choices[j][digits[j]];
          if (!check_pair(r, x, y)) return verdict;
        } while (next_index(digits, radix));
      } while (next_index(x, zradix));
    } else {
      verdict.exhaustive = false;
      for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<std::size_t> x(len);
        for (auto& v : x) v = uniform_index(rng, zn);
        const auto choices = compatible_choices(zdist, rows[r], x);
        std::vector<std::size_t> y(len);
        for (std::size_t j = 0; j < len; ++j) y[j] = choices[j][uniform_index(rng, choices[j].size())];
        if (!check_pair(r, x, y)) return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace prefgame
