#include "doctest.h"
#include "support.hpp"

using namespace prefgame;
using testing::uniform_game;

TEST_CASE("best responses") {
  SUBCASE("stubborn agent on two points") {
    // s_0 = a, the others play b so the aggregate is b.
    const PreferenceGame g(uniform_game({"a", "b"}, {0, 1, 1}, 0.6));
    CHECK(best_responses(g, State({1, 1, 1}), 0) == std::vector<std::size_t>{0});
  }
  SUBCASE("alpha one half keeps both") {
    const PreferenceGame g(uniform_game({"a", "b"}, {0, 1, 1}, 0.5));
    CHECK(best_responses(g, State({1, 1, 1}), 0) == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("compliant agents follow the aggregate") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto g = generate_instance("random",
                                       testing::random_params(seed, 3, 4, 0.25, "table", "mixed"));
      for (std::uint64_t id = 0; id < g.state_count(); ++id) {
        const State s = State::from_id(id, 3, 4);
        for (std::size_t i = 0; i < 3; ++i) {
          const auto br = best_responses(g, s, i);
          const auto agg = aggregate_for(g, s, i).strategy;
          REQUIRE(br.size() == 1);
          CHECK(br[0] == agg);
        }
      }
    }
  }
  SUBCASE("stubborn agents play their preference") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto g = generate_instance("random",
                                       testing::random_params(seed, 3, 4, 0.75, "table", "in"));
      for (std::uint64_t id = 0; id < g.state_count(); ++id) {
        const State s = State::from_id(id, 3, 4);
        for (std::size_t i = 0; i < 3; ++i) {
          CHECK(best_responses(g, s, i) == std::vector<std::size_t>{*g.preferred_in_space(i)});
        }
      }
    }
  }
}

TEST_CASE("equilibrium checks") {
  const PreferenceGame low(uniform_game({"a", "b", "c"}, {0, 1, 2}, 0.3));
  for (std::size_t z = 0; z < 3; ++z) CHECK(is_equilibrium(low, State::consensus(3, z)));

  const PreferenceGame high(uniform_game({"a", "b", "c"}, {0, 1, 2}, 0.8));
  const auto check = is_equilibrium(high, State({0, 0, 2}));
  REQUIRE_FALSE(check);
  REQUIRE(check.witness);
  CHECK(check.witness->agent == 1);
  CHECK(check.witness->strategy == 1);
  CHECK(check.witness->gain > 0);
  CHECK(is_equilibrium(high, State({0, 1, 2})));

  const PreferenceGame zero(uniform_game({"a", "b"}, {0, 1, 1}, 0.0));
  CHECK(is_equilibrium(zero, State::consensus(3, 1)));
}

TEST_CASE("schedules") {
  CHECK(parse_schedule("round-robin", 3).kind == Schedule::Kind::round_robin);
  const auto f = parse_schedule("fixed-permutation:2,0,1", 3);
  CHECK(f.kind == Schedule::Kind::fixed_permutation);
  CHECK(f.permutation == std::vector<std::size_t>{2, 0, 1});
  CHECK(parse_schedule("seeded-random:42", 3).seed == 42);
  CHECK_THROWS(parse_schedule("fixed-permutation:0,0,1", 3));
  CHECK_THROWS(parse_schedule("fixed-permutation:0,1", 3));
  CHECK_THROWS(parse_schedule("sideways", 3));
}

TEST_CASE("dynamics from a consensus with compliant agents stays put") {
  const PreferenceGame g(uniform_game({"a", "b", "c"}, {0, 1, 2}, 0.4));
  const auto out = run_dynamics(g, State::consensus(3, 2), Schedule::round_robin(), 100);
  CHECK(out.kind == DynamicsOutcome::Kind::converged);
  CHECK(out.moves == 0);
  CHECK(out.passes == 1);
  CHECK(out.final_state == State::consensus(3, 2));
}

TEST_CASE("stubborn unrestricted dynamics reach the truthful profile") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto g = generate_instance("random",
                                     testing::random_params(seed, 4, 3, 0.9, "uniform", "in"));
    for (const auto& sched : {Schedule::round_robin(), Schedule::random(seed)}) {
      const auto out = run_dynamics(g, State::consensus(4, 0), sched, 1000);
      CHECK(out.kind == DynamicsOutcome::Kind::converged);
      CHECK(out.final_state == g.truthful_state());
      CHECK(out.passes <= g.n() + 1);
    }
  }
}

TEST_CASE("dynamics are reproducible and report budget exhaustion") {
  const auto g = generate_instance("k_approval_random", testing::approval_params(3, 4, 3, 1, 0.6));
  const auto a = run_dynamics(g, State::consensus(4, 0), Schedule::random(9), 1000);
  const auto b = run_dynamics(g, State::consensus(4, 0), Schedule::random(9), 1000);
  CHECK(a.digest == b.digest);
  CHECK(a.final_state == b.final_state);
  CHECK(a.activations == b.activations);

  const PreferenceGame slow(uniform_game({"a", "b"}, {0, 1, 0, 1}, 0.9));
  const auto cut = run_dynamics(slow, State::consensus(4, 0), Schedule::round_robin(), 1);
  CHECK(cut.kind == DynamicsOutcome::Kind::budget_exhausted);
  CHECK(cut.activations == 1);
}

TEST_CASE("sequential moves resolve a disagreement") {
  const PreferenceGame g(uniform_game({"a", "b"}, {0, 1}, 0.0));
  const auto out = run_dynamics(g, State({0, 1}), Schedule::round_robin(), 100);
  // Agent 0 copies b; agent 1 is then already at its aggregate.
  CHECK(out.kind == DynamicsOutcome::Kind::converged);
  CHECK(out.final_state == State({1, 1}));
  CHECK(out.moves == 1);
  CHECK(is_equilibrium(g, out.final_state));
}

TEST_CASE("directed followers cycle under round robin") {
  // Each agent listens only to the next one, so a disagreement chases itself around.
  const auto g = build_k_approval_game(2, 1, 0.0, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},
                                       {{1, 0}, {0, 1}, {1, 0}});
  const auto out = run_dynamics(g, State({0, 1, 0}), Schedule::round_robin(), 1000);
  CHECK(out.kind == DynamicsOutcome::Kind::cycle);
  CHECK(out.cycle.size() == 6);
  CHECK_FALSE(is_equilibrium(g, out.final_state));
  CHECK(is_equilibrium(g, State::consensus(3, 0)));
}
