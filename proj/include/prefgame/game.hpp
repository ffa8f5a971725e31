#ifndef PREFGAME_GAME_HPP
#define PREFGAME_GAME_HPP

#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefgame/aggregation.hpp"
#include "prefgame/metric.hpp"

namespace prefgame {

/// One Z-strategy index per agent.
class State {
 public:
  State() = default;
  explicit State(std::vector<std::size_t> assignment) : z_(std::move(assignment)) {}

  static State consensus(std::size_t n, std::size_t strategy) {
    return State(std::vector<std::size_t>(n, strategy));
  }
  /// Inverse of id(): mixed-radix digits, agent 0 most significant.
  static State from_id(std::uint64_t id, std::size_t n, std::size_t space_size);

  std::uint64_t id(std::size_t space_size) const;

  std::size_t size() const { return z_.size(); }
  std::size_t operator[](std::size_t i) const { return z_[i]; }
  std::size_t& operator[](std::size_t i) { return z_[i]; }
  std::span<const std::size_t> span() const { return z_; }
  const std::vector<std::size_t>& assignment() const { return z_; }
  bool is_consensus() const;

  /// The state with agent i's strategy replaced.
  State with(std::size_t i, std::size_t strategy) const {
    State s = *this;
    s.z_[i] = strategy;
    return s;
  }

  friend auto operator<=>(const State&, const State&) = default;

 private:
  std::vector<std::size_t> z_;
};

enum class Objective { sum, max };

std::string to_string(Objective objective);

/// Plain description of a game; validated when a PreferenceGame is built.
struct GameSpec {
  double alpha = 0.0;
  std::vector<std::vector<double>> weights;
  Metric metric = Metric::uniform({"a", "b"});
  StrategySpace space;
  AggregationKind aggregation = AggregationKind::frechet_median;
  std::vector<Point> preferred;
};

struct ValidationIssue {
  std::string location;  // e.g. "weights[0][0]" or "preferred[2]"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool exact_on_z = false;
  /// Exact over Z together with every preferred strategy.
  bool exact_on_game_points = false;
  /// Exact over the whole universe U (all labels, or declared rho for
  /// continuous universes).
  bool exact_on_universe = false;
  /// No two distinct strategies of Z are at distance zero.
  bool positive_on_z = false;
  /// d(x,y) = 1 for every pair of distinct game points.
  bool uniform = false;
  MetricValidation z_metric;
  MetricValidation game_points_metric;

  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

ValidationReport validate_game(const GameSpec& spec);

class InvalidGame : public Error {
 public:
  explicit InvalidGame(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

enum class RestrictionClass { unrestricted, semi_restricted, restricted };

std::string to_string(RestrictionClass r);

struct Restriction {
  RestrictionClass kind = RestrictionClass::unrestricted;
  /// N_S: agents whose preferred strategy coincides with some z in Z.
  std::vector<std::size_t> in_space;
};

/// A validated preference game with local aggregation. Immutable.
class PreferenceGame {
 public:
  explicit PreferenceGame(GameSpec spec);

  std::size_t n() const { return n_; }
  std::size_t space_size() const { return spec_.space.size(); }
  double alpha() const { return spec_.alpha; }
  const GameSpec& spec() const { return spec_; }
  const StrategySpace& space() const { return spec_.space; }
  const Metric& metric() const { return spec_.metric; }
  AggregationKind aggregation() const { return spec_.aggregation; }
  const ValidationReport& validation() const { return validation_; }

  double weight(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  std::span<const double> weight_row(std::size_t i) const {
    return std::span<const double>(w_).subspan(i * n_, n_);
  }
  /// Positive-weight neighbours j != i, ascending.
  const std::vector<std::size_t>& support(std::size_t i) const { return support_[i]; }

  const Point& preferred(std::size_t i) const { return spec_.preferred[i]; }
  const DistanceMatrix& z_distances() const { return zdist_; }
  double zdist(std::size_t a, std::size_t b) const { return zdist_(a, b); }
  /// d(s_i, z).
  double pref_distance(std::size_t i, std::size_t z) const { return pdist_[i * space_size() + z]; }
  /// First z in canonical order with d(s_i, z) = 0, if s_i is in Z.
  std::optional<std::size_t> preferred_in_space(std::size_t i) const { return pref_index_[i]; }

  /// Preferred strategies mapped into Z; agents outside N_S get the closest
  /// strategy (lowest index on ties).
  State truthful_state() const;

  std::uint64_t state_count() const;  // |Z|^n, saturating at UINT64_MAX
  std::string state_label(const State& s) const;

 private:
  GameSpec spec_;
  ValidationReport validation_;
  std::size_t n_ = 0;
  std::vector<double> w_;
  std::vector<std::vector<std::size_t>> support_;
  DistanceMatrix zdist_;
  std::vector<double> pdist_;
  std::vector<std::optional<std::size_t>> pref_index_;
};

AggregateResult aggregate_for(const PreferenceGame& g, const State& state, std::size_t i);
double agent_cost(const PreferenceGame& g, const State& state, std::size_t i);
double social_cost(const PreferenceGame& g, const State& state, Objective objective);
Restriction classify_restriction(const PreferenceGame& g);
/// ds_i(x, y) = sum_{j != i} w_ij d(x(j), y(j)).
double relative_distance(const PreferenceGame& g, const State& x, const State& y, std::size_t i);
/// D(x, y) = {j : x(j) != y(j)}.
std::vector<std::size_t> difference_set(const State& x, const State& y);

/// Cost evaluation with aggregates memoized per agent, keyed on the state
/// restricted to that agent's positive-weight neighbours. Safe to share
/// between threads: cache slots are atomics and concurrent writers store the
/// same value.
class Evaluator {
 public:
  explicit Evaluator(const PreferenceGame& g);

  const PreferenceGame& game() const { return *g_; }

  AggregateResult aggregate(const State& state, std::size_t i) const;
  AggregateResult aggregate(std::span<const std::size_t> state, std::size_t i) const;

  /// Cost of agent i playing `strategy` against aggregate `agg`.
  double cost_against(std::size_t i, std::size_t strategy, std::size_t agg) const {
    return g_->alpha() * g_->pref_distance(i, strategy) +
           (1.0 - g_->alpha()) * g_->zdist(strategy, agg);
  }
  /// min_z cost_against(i, z, agg).
  double best_cost(std::size_t i, std::size_t agg) const { return best_[i * zn_ + agg]; }

  double cost(std::span<const std::size_t> state, std::size_t i) const;

  bool saw_tie() const { return tie_seen_.load(std::memory_order_relaxed); }

 private:
  const PreferenceGame* g_;
  std::size_t zn_;
  std::vector<double> best_;
  // Per agent: dense table indexed by the support restriction, value
  // strategy+1 with the top bit marking a tie; 0 = not computed yet.
  std::vector<std::unique_ptr<std::atomic<std::uint32_t>[]>> memo_;
  std::vector<std::uint64_t> memo_size_;
  mutable std::atomic<bool> tie_seen_{false};
};

}  // namespace prefgame

#endif  // PREFGAME_GAME_HPP
