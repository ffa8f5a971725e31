#ifndef PREFGAME_DYNAMICS_HPP
#define PREFGAME_DYNAMICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prefgame/game.hpp"

namespace prefgame {

/// All minimizers of c_i([state_-i, z]) over z in Z within kTolerance of the
/// minimum, in canonical order.
std::vector<std::size_t> best_responses(const PreferenceGame& g, const State& state,
                                        std::size_t i);

struct Deviation {
  std::size_t agent = 0;
  std::size_t strategy = 0;
  double gain = 0.0;
};

struct EquilibriumCheck {
  bool equilibrium = true;
  std::optional<Deviation> witness;
  explicit operator bool() const { return equilibrium; }
};

EquilibriumCheck is_equilibrium(const PreferenceGame& g, const State& state);

struct Schedule {
  enum class Kind { round_robin, fixed_permutation, seeded_random };
  Kind kind = Kind::round_robin;
  std::vector<std::size_t> permutation;  // fixed_permutation only
  std::uint64_t seed = 0;                // seeded_random only

  static Schedule round_robin() { return {}; }
  static Schedule fixed(std::vector<std::size_t> order) {
    return {Kind::fixed_permutation, std::move(order), 0};
  }
  static Schedule random(std::uint64_t seed) { return {Kind::seeded_random, {}, seed}; }
};

/// Parses "round-robin", "fixed-permutation:2,0,1" (0-based) or
/// "seeded-random:<seed>".
Schedule parse_schedule(const std::string& text, std::size_t n);

struct DynamicsOutcome {
  enum class Kind { converged, cycle, budget_exhausted };
  Kind kind = Kind::budget_exhausted;
  State final_state;
  /// States of the detected cycle, starting at the revisited state.
  std::vector<State> cycle;
  std::size_t activations = 0;
  std::size_t moves = 0;
  std::size_t passes = 0;
  /// FNV-1a over the (agent, strategy) sequence of moves.
  std::uint64_t digest = 0;
};

std::string to_string(DynamicsOutcome::Kind kind);

/// Best-response dynamics: the scheduled agent switches to its canonical-first
/// best response unless its current strategy is already within kTolerance of
/// optimal. Converges once every agent has been checked without a move since
/// the last change. A cycle is reported when a post-move state recurs at the
/// same schedule phase, which also witnesses an improvement cycle of the game.
/// `max_steps` bounds the number of agent activations.
DynamicsOutcome run_dynamics(const PreferenceGame& g, const State& init,
                             const Schedule& schedule, std::size_t max_steps);

}  // namespace prefgame

#endif  // PREFGAME_DYNAMICS_HPP
