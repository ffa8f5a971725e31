#include "prefgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace prefgame {

State State::from_id(std::uint64_t id, std::size_t n, std::size_t space_size) {
  std::vector<std::size_t> z(n);
  for (std::size_t p = n; p-- > 0;) {
    z[p] = static_cast<std::size_t>(id % space_size);
    id /= space_size;
  }
  return State(std::move(z));
}

std::uint64_t State::id(std::size_t space_size) const {
  std::uint64_t id = 0;
  for (auto z : z_) id = id * space_size + z;
  return id;
}

bool State::is_consensus() const {
  return std::adjacent_find(z_.begin(), z_.end(), std::not_equal_to<>()) == z_.end();
}

std::string to_string(Objective objective) { return objective == Objective::sum ? "SUM" : "MAX"; }

std::string to_string(RestrictionClass r) {
  switch (r) {
    case RestrictionClass::unrestricted: return "unrestricted";
    case RestrictionClass::semi_restricted: return "semi-restricted";
    case RestrictionClass::restricted: return "restricted";
  }
  return "unknown";
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& issue : issues) os << issue.location << ": " << issue.message << '\n';
  return os.str();
}

InvalidGame::InvalidGame(ValidationReport report)
    : Error("invalid game:\n" + report.summary()), report_(std::move(report)) {}

namespace {

bool same_point(const Point& a, const Point& b) { return a == b; }

void check_universe_point(const GameSpec& spec, std::size_t i, ValidationReport& report) {
  const Point& p = spec.preferred[i];
  const std::string where = "preferred[" + std::to_string(i) + "]";
  const std::string agent = "agent " + std::to_string(i + 1);
  if (!spec.metric.contains(p)) {
    report.issues.push_back({where, "preferred strategy of " + agent + " is outside U"});
    return;
  }
  if (const auto& approval = spec.space.approval()) {
    const auto& c = std::get<Coords>(p);
    double sum = 0.0;
    for (double v : c) {
      if (v < -kTolerance || v > 1.0 + kTolerance) {
        report.issues.push_back({where, "coordinate outside [0,1] for " + agent});
        return;
      }
      sum += v;
    }
    if (std::abs(sum - static_cast<double>(approval->k)) > kTolerance) {
      std::ostringstream os;
      os << "preferred vector of " << agent << " sums to " << sum << ", expected "
         << approval->k;
      report.issues.push_back({where, os.str()});
    }
  }
}

}  // namespace

ValidationReport validate_game(const GameSpec& spec) {
  ValidationReport report;
  auto issue = [&](std::string where, std::string what) {
    report.issues.push_back({std::move(where), std::move(what)});
  };

  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) issue("alpha", "alpha out of [0,1]");

  const std::size_t n = spec.weights.size();
  if (n < 2) issue("weights", "a game needs n >= 2 agents");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = spec.weights[i];
    const std::string where = "weights[" + std::to_string(i) + "]";
    if (row.size() != n) {
      issue(where, "row of agent " + std::to_string(i + 1) + " has length " +
                       std::to_string(row.size()) + ", expected " + std::to_string(n));
      continue;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = row[j];
      if (!(w >= 0.0 && w <= 1.0)) {
        issue(where + "[" + std::to_string(j) + "]", "weight outside [0,1]");
      }
      sum += w;
    }
    if (row[i] != 0.0) {
      issue(where + "[" + std::to_string(i) + "]",
            "diagonal nonzero at agent " + std::to_string(i + 1));
    }
    // Inclusive boundary: a sum written as 1 - 1e-9 must pass despite rounding.
    if (!(std::abs(sum - 1.0) <= kTolerance + 1e-15)) {
      std::ostringstream os;
      os << "row of agent " << i + 1 << " sums to " << sum << ", expected 1";
      issue(where, os.str());
    }
  }

  if (spec.space.size() < 2) issue("space", "strategy space needs |Z| >= 2");
  for (std::size_t z = 0; z < spec.space.size(); ++z) {
    if (!spec.metric.contains(spec.space.point(z))) {
      issue("space", "strategy '" + spec.space.name(z) + "' is outside the metric domain");
    }
  }

  if (spec.preferred.size() != n) {
    issue("preferred", "expected " + std::to_string(n) + " preferred strategies, got " +
                           std::to_string(spec.preferred.size()));
  } else {
    for (std::size_t i = 0; i < n; ++i) check_universe_point(spec, i, report);
  }
  if (!report.ok()) return report;

  const auto zpoints = spec.space.points();
  report.z_metric = validate_approx_metric(spec.metric, zpoints);
  report.exact_on_z = report.z_metric.exact();

  std::vector<Point> game_points(zpoints.begin(), zpoints.end());
  for (const auto& s : spec.preferred) {
    if (std::none_of(game_points.begin(), game_points.end(),
                     [&](const Point& p) { return same_point(p, s); })) {
      game_points.push_back(s);
    }
  }
  report.game_points_metric = validate_approx_metric(spec.metric, game_points);
  report.exact_on_game_points = report.game_points_metric.exact();

  if (spec.metric.label_based()) {
    std::vector<Point> all;
    for (std::size_t l = 0; l < spec.metric.labels().size(); ++l) all.emplace_back(l);
    report.exact_on_universe = validate_approx_metric(spec.metric, all).exact();
  } else {
    report.exact_on_universe = spec.metric.rho() <= 1.0 && report.exact_on_game_points;
  }
  if (!report.z_metric.within_declared || !report.game_points_metric.within_declared) {
    std::ostringstream os;
    os << "metric violates its declared rho=" << spec.metric.rho()
       << " (tight value " << std::max(report.z_metric.min_rho, report.game_points_metric.min_rho)
       << ")";
    issue("metric.rho", os.str());
  }

  const DistanceMatrix zd(spec.metric, zpoints);
  report.positive_on_z = true;
  for (std::size_t a = 0; a < zd.size(); ++a)
    for (std::size_t b = a + 1; b < zd.size(); ++b)
      if (zd(a, b) <= kZeroDistance) report.positive_on_z = false;

  const DistanceMatrix gd(spec.metric, game_points);
  report.uniform = true;
  for (std::size_t a = 0; a < gd.size(); ++a)
    for (std::size_t b = a + 1; b < gd.size(); ++b)
      if (std::abs(gd(a, b) - 1.0) > kZeroDistance) report.uniform = false;
  return report;
}

PreferenceGame::PreferenceGame(GameSpec spec) : spec_(std::move(spec)) {
  validation_ = validate_game(spec_);
  if (!validation_.ok()) throw InvalidGame(validation_);
  n_ = spec_.weights.size();
  w_.resize(n_ * n_);
  support_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      w_[i * n_ + j] = spec_.weights[i][j];
      if (j != i && spec_.weights[i][j] > 0.0) support_[i].push_back(j);
    }
  }
  zdist_ = DistanceMatrix(spec_.metric, spec_.space.points());
  const std::size_t zn = space_size();
  pdist_.resize(n_ * zn);
  pref_index_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t z = 0; z < zn; ++z) {
      const double d = spec_.metric(spec_.preferred[i], spec_.space.point(z));
      pdist_[i * zn + z] = d;
      if (d <= kZeroDistance && !pref_index_[i]) pref_index_[i] = z;
    }
  }
}

State PreferenceGame::truthful_state() const {
  std::vector<std::size_t> z(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (pref_index_[i]) {
      z[i] = *pref_index_[i];
      continue;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < space_size(); ++c) {
      if (pref_distance(i, c) < pref_distance(i, best) - kZeroDistance) best = c;
    }
    z[i] = best;
  }
  return State(std::move(z));
}

std::uint64_t PreferenceGame::state_count() const {
  std::uint64_t count = 1;
  const std::uint64_t zn = space_size();
  for (std::size_t i = 0; i < n_; ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / zn) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= zn;
  }
  return count;
}

std::string PreferenceGame::state_label(const State& s) const {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += spec_.space.name(s[i]);
  }
  return out + ')';
}

AggregateResult aggregate_for(const PreferenceGame& g, const State& state, std::size_t i) {
  return aggregate(g.aggregation(), g.z_distances(), g.weight_row(i), state.span());
}

double agent_cost(const PreferenceGame& g, const State& state, std::size_t i) {
  const std::size_t agg = aggregate_for(g, state, i).strategy;
  return g.alpha() * g.pref_distance(i, state[i]) + (1.0 - g.alpha()) * g.zdist(state[i], agg);
}

double social_cost(const PreferenceGame& g, const State& state, Objective objective) {
  double total = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double c = agent_cost(g, state, i);
    total = objective == Objective::sum ? total + c : std::max(total, c);
  }
  return total;
}

Restriction classify_restriction(const PreferenceGame& g) {
  Restriction r;
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (g.preferred_in_space(i)) r.in_space.push_back(i);
  }
  if (r.in_space.size() == g.n()) {
    r.kind = RestrictionClass::unrestricted;
  } else if (r.in_space.empty()) {
    r.kind = RestrictionClass::restricted;
  } else {
    r.kind = RestrictionClass::semi_restricted;
  }
  return r;
}

double relative_distance(const PreferenceGame& g, const State& x, const State& y, std::size_t i) {
  double total = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    if (j == i) continue;
    total += g.weight(i, j) * g.zdist(x[j], y[j]);
  }
  return total;
}

std::vector<std::size_t> difference_set(const State& x, const State& y) {
  if (x.size() != y.size()) throw Error("states of different length");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != y[j]) out.push_back(j);
  }
  return out;
}

namespace {
constexpr std::uint64_t kMemoCap = std::uint64_t{1} << 20;
constexpr std::uint32_t kTieBit = std::uint32_t{1} << 31;
}  // namespace

Evaluator::Evaluator(const PreferenceGame& g) : g_(&g), zn_(g.space_size()) {
  const std::size_t n = g.n();
  best_.resize(n * zn_);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t agg = 0; agg < zn_; ++agg) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t z = 0; z < zn_; ++z) best = std::min(best, cost_against(i, z, agg));
      best_[i * zn_ + agg] = best;
    }
  }
  memo_.resize(n);
  memo_size_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t size = 1;
    bool fits = true;
    for (std::size_t k = 0; k < g.support(i).size() && fits; ++k) {
      size *= zn_;
      fits = size <= kMemoCap;
    }
    if (fits) {
      memo_[i] = std::make_unique<std::atomic<std::uint32_t>[]>(size);
      memo_size_[i] = size;
    }
  }
}

AggregateResult Evaluator::aggregate(const State& state, std::size_t i) const {
  return aggregate(state.span(), i);
}

AggregateResult Evaluator::aggregate(std::span<const std::size_t> state, std::size_t i) const {
  std::atomic<std::uint32_t>* slot = nullptr;
  if (memo_[i]) {
    std::uint64_t key = 0;
    for (auto j : g_->support(i)) key = key * zn_ + state[j];
    slot = &memo_[i][key];
    const std::uint32_t v = slot->load(std::memory_order_relaxed);
    if (v != 0) return AggregateResult{(v & ~kTieBit) - 1, (v & kTieBit) != 0};
  }
  const AggregateResult r =
      prefgame::aggregate(g_->aggregation(), g_->z_distances(), g_->weight_row(i), state);
  if (r.tie) tie_seen_.store(true, std::memory_order_relaxed);
  if (slot) {
    slot->store(static_cast<std::uint32_t>(r.strategy + 1) | (r.tie ? kTieBit : 0),
                std::memory_order_relaxed);
  }
  return r;
}

double Evaluator::cost(std::span<const std::size_t> state, std::size_t i) const {
  return cost_against(i, state[i], aggregate(state, i).strategy);
}

}  // namespace prefgame
