#ifndef PREFGAME_TESTS_SUPPORT_HPP
#define PREFGAME_TESTS_SUPPORT_HPP

// Shared fixtures and independent oracles for the test binaries.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "prefgame/io.hpp"

namespace testing {

using namespace prefgame;

inline std::vector<std::vector<double>> symmetric_weights(std::size_t n) {
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 1.0 / static_cast<double>(n - 1)));
  for (std::size_t i = 0; i < n; ++i) w[i][i] = 0.0;
  return w;
}

inline GameSpec uniform_game(std::vector<std::string> labels, std::vector<std::size_t> preferred,
                             double alpha) {
  GameSpec spec;
  spec.alpha = alpha;
  spec.weights = symmetric_weights(preferred.size());
  spec.metric = Metric::uniform(labels);
  spec.space = StrategySpace::enumerated(spec.metric, labels);
  spec.aggregation = AggregationKind::frechet_median;
  for (auto p : preferred) spec.preferred.emplace_back(p);
  return spec;
}

// Aggregate by direct evaluation of the Frechet objective through the
// metric, lowest index on ties.
inline std::size_t naive_aggregate(const PreferenceGame& g, const State& s, std::size_t i) {
  const auto& pts = g.space().points();
  std::size_t best = 0;
  double best_v = INFINITY;
  for (std::size_t y = 0; y < pts.size(); ++y) {
    double v = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
      if (j == i) continue;
      const double d = g.metric()(pts[y], pts[s[j]]);
      v += g.weight(i, j) * (g.aggregation() == AggregationKind::frechet_mean ? d * d : d);
    }
    if (v < best_v - kTolerance) {
      best_v = v;
      best = y;
    }
  }
  return best;
}

inline double naive_cost(const PreferenceGame& g, const State& s, std::size_t i) {
  const auto& pts = g.space().points();
  const std::size_t agg = naive_aggregate(g, s, i);
  return g.alpha() * g.metric()(g.preferred(i), pts[s[i]]) +
         (1.0 - g.alpha()) * g.metric()(pts[s[i]], pts[agg]);
}

// Double loop: every state, every agent, every unilateral deviation.
inline std::vector<State> naive_equilibria(const PreferenceGame& g) {
  std::vector<State> out;
  const std::uint64_t total = g.state_count();
  for (std::uint64_t id = 0; id < total; ++id) {
    const State s = State::from_id(id, g.n(), g.space_size());
    bool eq = true;
    for (std::size_t i = 0; i < g.n() && eq; ++i) {
      const double c = naive_cost(g, s, i);
      for (std::size_t z = 0; z < g.space_size() && eq; ++z) {
        if (naive_cost(g, s.with(i, z), i) < c - kTolerance) eq = false;
      }
    }
    if (eq) out.push_back(s);
  }
  return out;
}

inline FamilyParams random_params(std::uint64_t seed, std::size_t n, std::size_t z, double alpha,
                                  const std::string& metric, const std::string& preferred) {
  FamilyParams p;
  p.set("seed", std::to_string(seed))
      .set("n", std::to_string(n))
      .set("z", std::to_string(z))
      .set("alpha", alpha)
      .set("metric", metric)
      .set("preferred", preferred);
  return p;
}

inline FamilyParams approval_params(std::uint64_t seed, std::size_t n, std::size_t m,
                                    std::size_t k, double alpha) {
  FamilyParams p;
  p.set("seed", std::to_string(seed))
      .set("n", std::to_string(n))
      .set("m", std::to_string(m))
      .set("k", std::to_string(k))
      .set("alpha", alpha);
  return p;
}

}  // namespace testing

#endif  // PREFGAME_TESTS_SUPPORT_HPP
