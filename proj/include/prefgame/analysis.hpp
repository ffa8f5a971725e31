#ifndef PREFGAME_ANALYSIS_HPP
#define PREFGAME_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prefgame/game.hpp"

namespace prefgame {

/// 10^7, or the value of PREFGAME_BUDGET when set to a positive integer.
std::uint64_t default_budget();

struct EnumerationOptions {
  std::uint64_t budget = default_budget();
  unsigned workers = 0;  // 0 = hardware concurrency
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

struct Optimum {
  double value = 0.0;
  std::vector<State> states;  // canonical order
};

/// One sweep over Z^n collecting equilibria and both optima.
struct Enumeration {
  std::uint64_t states = 0;
  std::vector<State> equilibria;
  Optimum sum;
  Optimum max;
  /// Some aggregate had several minimizers within tolerance.
  bool tie_sensitive = false;

  const Optimum& optimum(Objective o) const { return o == Objective::sum ? sum : max; }
};

/// Throws BudgetExceeded naming |Z|^n when it exceeds the budget.
Enumeration enumerate_states(const PreferenceGame& g, const EnumerationOptions& options = {});
std::vector<State> enumerate_equilibria(const PreferenceGame& g,
                                        const EnumerationOptions& options = {});
Optimum optimal_states(const PreferenceGame& g, Objective objective,
                       const EnumerationOptions& options = {});

struct PoaValue {
  enum class Kind { finite, infinite, undefined };
  Kind kind = Kind::undefined;
  double value = 0.0;          // meaningful when finite
  bool by_convention = false;  // optimum is zero
  double worst_equilibrium = 0.0;
  double optimum = 0.0;

  bool is_finite() const { return kind == Kind::finite; }
  std::string to_string() const;  // number, "inf" or "undefined"
};

/// Worst equilibrium over optimum; with a zero optimum, 1 if E equals the
/// optimal set and +inf otherwise. Undefined when E is empty.
PoaValue price_of_anarchy(const PreferenceGame& g, const std::vector<State>& equilibria,
                          const Optimum& optimum, Objective objective);
PoaValue price_of_anarchy(const PreferenceGame& g, Objective objective,
                          const EnumerationOptions& options = {});

struct SocialImpact {
  std::vector<double> per_agent;  // column sums
  double global = 0.0;
};

SocialImpact social_impact(const PreferenceGame& g);

enum class ComparisonClass { optima_sum, optima_max, all_states };
std::string to_string(ComparisonClass c);

struct StretchWitness {
  std::size_t agent = 0;
  State equilibrium;
  State other;
  double ratio = 0.0;
};

struct StretchResult {
  ComparisonClass comparison = ComparisonClass::optima_sum;
  std::vector<double> tau_hat;  // 0 when no pair has positive relative distance
  std::vector<double> tau;      // max(tau_hat, 1)
  double global = 1.0;
  std::uint64_t pairs = 0;
  /// Pairs at relative distance zero always had equal aggregates.
  bool consistency_ok = true;
  std::optional<StretchWitness> witness;
};

/// d(aggr_i(e_-i), aggr_i(y_-i)) / ds_i(e, y), or nullopt when ds_i is zero.
std::optional<double> stretch_ratio(const PreferenceGame& g, const State& e, const State& y,
                                    std::size_t i);

StretchResult stretch(const PreferenceGame& g, const std::vector<State>& equilibria,
                      const std::vector<State>& comparison, ComparisonClass kind);
/// Convenience form that enumerates; ALL_STATES needs |E|*|Z|^n within budget.
StretchResult stretch(const PreferenceGame& g, const Enumeration& en, ComparisonClass kind,
                      const EnumerationOptions& options = {});

/// d^max(Z) / (w^min d^min(Z)); nullopt when Z has no positive distance.
std::optional<double> stretch_cap(const PreferenceGame& g);

struct BoundaryResult {
  std::vector<std::optional<double>> per_agent;  // nullopt: every pair skipped
  std::optional<double> global;
};

BoundaryResult boundary(const PreferenceGame& g, const std::vector<State>& equilibria);

enum class Verdict { pass, fail, skip };
std::string to_string(Verdict v);

struct BoundVerdict {
  std::string claim;
  bool hypotheses_held = false;
  std::string hypotheses;  // what was required, or why it failed
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs; pass iff >= -kTolerance
  Verdict verdict = Verdict::skip;
  std::string detail;
};

struct InequalityCheck {
  double min_slack = 0.0;
  double lhs = 0.0;  // both sides at the tightest triple
  double rhs = 0.0;
  std::uint64_t triples = 0;
  bool ok = true;
  std::size_t agent = 0;
  std::optional<State> equilibrium;
  std::optional<State> state;
};

/// c_i(e) <= c_i(z) + tau_i (1 - alpha) ds_i(z, e) over all agents, e in E and
/// z in `states`.
InequalityCheck verify_equilibrium_inequality(const PreferenceGame& g,
                                              const std::vector<State>& equilibria,
                                              const std::vector<State>& states,
                                              const std::vector<double>& tau);

struct ContainmentCheck {
  bool ok = true;
  std::uint64_t pairs = 0;
  std::optional<State> equilibrium;
  std::optional<State> optimum;
  std::size_t agent = 0;
};

/// D(o, e) is contained in D(o, s), with i in D(o, s) iff d(o(i), s_i) > 0.
ContainmentCheck verify_difference_containment(const PreferenceGame& g,
                                               const std::vector<State>& equilibria,
                                               const std::vector<State>& optima);

struct AnalysisOptions {
  EnumerationOptions enumeration;
  /// Compute the ALL_STATES stretch when |E|*|Z|^n fits the budget.
  bool all_states_stretch = true;
  std::uint64_t consistency_trials = 2000;
};

struct AnalysisReport {
  std::size_t n = 0;
  std::size_t space_size = 0;
  double alpha = 0.0;
  std::string aggregation;
  RestrictionClass restriction = RestrictionClass::unrestricted;
  std::vector<std::size_t> in_space;
  bool exact_on_z = false;
  bool exact_on_universe = false;
  Enumeration enumeration;
  PoaValue poa_sum;
  PoaValue poa_max;
  SocialImpact delta;
  StretchResult tau_sum;
  StretchResult tau_max;
  std::optional<StretchResult> tau_all;
  std::optional<double> tau_cap;
  BoundaryResult beta;
  std::vector<BoundVerdict> verdicts;

  bool any_failure() const;
  const BoundVerdict* find(const std::string& claim) const;
};

AnalysisReport analyze(const PreferenceGame& g, const AnalysisOptions& options = {});

/// Structural claims: aggregation feasibility, consensus and truthful
/// equilibria, zero self-confidence.
std::vector<BoundVerdict> verify_structural_claims(const PreferenceGame& g,
                                                   const AnalysisReport& report,
                                                   const AnalysisOptions& options = {});
/// Equilibrium inequality, difference containment and both PoA bounds.
std::vector<BoundVerdict> verify_poa_bounds(const PreferenceGame& g,
                                            const AnalysisReport& report);
/// Bounds on the boundary and the stretch.
std::vector<BoundVerdict> verify_parameter_bounds(const PreferenceGame& g,
                                                  const AnalysisReport& report);

}  // namespace prefgame

#endif  // PREFGAME_ANALYSIS_HPP
