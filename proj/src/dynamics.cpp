#include "prefgame/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "prefgame/random.hpp"

namespace prefgame {

std::vector<std::size_t> best_responses(const PreferenceGame& g, const State& state,
                                        std::size_t i) {
  const std::size_t agg = aggregate_for(g, state, i).strategy;
  std::vector<double> cost(g.space_size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < g.space_size(); ++z) {
    cost[z] = g.alpha() * g.pref_distance(i, z) + (1.0 - g.alpha()) * g.zdist(z, agg);
    best = std::min(best, cost[z]);
  }
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < g.space_size(); ++z) {
    if (cost[z] <= best + kTolerance) out.push_back(z);
  }
  return out;
}

EquilibriumCheck is_equilibrium(const PreferenceGame& g, const State& state) {
  EquilibriumCheck check;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const std::size_t agg = aggregate_for(g, state, i).strategy;
    const double current = g.alpha() * g.pref_distance(i, state[i]) +
                           (1.0 - g.alpha()) * g.zdist(state[i], agg);
    for (std::size_t z = 0; z < g.space_size(); ++z) {
      const double c = g.alpha() * g.pref_distance(i, z) + (1.0 - g.alpha()) * g.zdist(z, agg);
      if (c < current - kTolerance) {
        // Report the canonical-first best response, not merely some improvement.
        const auto br = best_responses(g, state, i);
        const std::size_t target = br.front();
        const double tc = g.alpha() * g.pref_distance(i, target) +
                          (1.0 - g.alpha()) * g.zdist(target, agg);
        check.equilibrium = false;
        check.witness = Deviation{i, target, current - tc};
        return check;
      }
    }
  }
  return check;
}

Schedule parse_schedule(const std::string& text, std::size_t n) {
  auto parse_uint = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw Error("bad number '" + std::string(s) + "' in schedule");
    }
    return v;
  };
  if (text == "round-robin") return Schedule::round_robin();
  const std::string fixed = "fixed-permutation:";
  const std::string random = "seeded-random:";
  if (text.rfind(fixed, 0) == 0) {
    std::vector<std::size_t> order;
    std::string_view rest(text);
    rest.remove_prefix(fixed.size());
    while (true) {
      auto comma = rest.find(',');
      order.push_back(static_cast<std::size_t>(parse_uint(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    if (sorted != ids) throw Error("fixed permutation must list each agent 0.." +
                                   std::to_string(n - 1) + " once");
    return Schedule::fixed(std::move(order));
  }
  if (text.rfind(random, 0) == 0) {
    return Schedule::random(parse_uint(std::string_view(text).substr(random.size())));
  }
  throw Error("unknown schedule '" + text + "'");
}

std::string to_string(DynamicsOutcome::Kind kind) {
  switch (kind) {
    case DynamicsOutcome::Kind::converged: return "converged";
    case DynamicsOutcome::Kind::cycle: return "cycle";
    case DynamicsOutcome::Kind::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xffu;
    h *= kFnvPrime;
  }
}

}  // namespace

DynamicsOutcome run_dynamics(const PreferenceGame& g, const State& init,
                             const Schedule& schedule, std::size_t max_steps) {
  if (max_steps == 0) throw Error("max_steps must be >= 1");
  const std::size_t n = g.n();
  if (init.size() != n) throw Error("initial state has wrong length");
  for (std::size_t i = 0; i < n; ++i) {
    if (init[i] >= g.space_size()) throw DomainError("initial strategy outside Z");
  }

  Rng rng(schedule.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (schedule.kind == Schedule::Kind::fixed_permutation) {
    if (schedule.permutation.size() != n) throw Error("permutation length differs from n");
    order = schedule.permutation;
  }
  auto reshuffle = [&] {
    // Fisher-Yates with the portable index helper.
    for (std::size_t p = n; p > 1; --p) std::swap(order[p - 1], order[uniform_index(rng, p)]);
  };
  const bool random = schedule.kind == Schedule::Kind::seeded_random;
  if (random) reshuffle();

  DynamicsOutcome out;
  out.digest = kFnvOffset;
  State state = init;

  // Post-move states keyed by schedule phase; the random schedule has no
  // repeating phase, so any revisit counts there.
  std::map<std::pair<State, std::size_t>, std::size_t> seen;
  std::vector<State> trajectory;

  // Agents known to be best-responding since the last move.
  std::vector<bool> settled(n, false);
  std::size_t quiet = 0;
  std::size_t pos = 0;
  while (out.activations < max_steps) {
    const std::size_t i = order[pos];
    ++out.activations;
    if (++pos == n) {
      pos = 0;
      if (random) reshuffle();
    }

    const auto br = best_responses(g, state, i);
    if (std::find(br.begin(), br.end(), state[i]) != br.end()) {
      if (!settled[i]) {
        settled[i] = true;
        ++quiet;
      }
      if (quiet == n) {
        out.kind = DynamicsOutcome::Kind::converged;
        break;
      }
      continue;
    }
    // The mover now best-responds to an unchanged environment.
    std::fill(settled.begin(), settled.end(), false);
    settled[i] = true;
    quiet = 1;
    state[i] = br.front();
    ++out.moves;
    fnv_mix(out.digest, i);
    fnv_mix(out.digest, br.front());

    const std::size_t phase = random ? 0 : pos;
    auto [it, inserted] = seen.try_emplace({state, phase}, trajectory.size());
    trajectory.push_back(state);
    if (!inserted) {
      out.kind = DynamicsOutcome::Kind::cycle;
      out.cycle.assign(trajectory.begin() + static_cast<std::ptrdiff_t>(it->second),
                       trajectory.end() - 1);
      break;
    }
  }
  out.passes = (out.activations + n - 1) / n;
  out.final_state = state;
  return out;
}

}  // namespace prefgame
