#ifndef PREFGAME_IO_HPP
#define PREFGAME_IO_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "prefgame/analysis.hpp"
#include "prefgame/dynamics.hpp"
#include "prefgame/game.hpp"
#include "prefgame/voting.hpp"

namespace prefgame {

/// A parse, schema or validation failure with its position in the input.
class GameFileError : public Error {
 public:
  GameFileError(std::string field, std::size_t line, const std::string& message);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }  // 1-based; 0 when unknown

 private:
  std::string field_;
  std::size_t line_;
};

GameSpec parse_game_spec(const std::string& text);
PreferenceGame parse_game_file(const std::string& text);
PreferenceGame load_game_file(const std::string& path);

/// Canonical JSON for a game; parse_game_file(emit_game(g)) rebuilds g.
std::string emit_game(const GameSpec& spec);
std::string emit_game(const PreferenceGame& g);

/// key=value pairs, e.g. "n=3,eps=0.01,alpha=0.5".
class FamilyParams {
 public:
  FamilyParams() = default;
  explicit FamilyParams(std::map<std::string, std::string> values) : values_(std::move(values)) {}
  static FamilyParams parse(const std::string& text);

  FamilyParams& set(const std::string& key, const std::string& value);
  FamilyParams& set(const std::string& key, double value);

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  std::uint64_t integer(const std::string& key,
                        std::optional<std::uint64_t> fallback = std::nullopt) const;
  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
  /// Throws on keys outside `allowed`.
  void restrict_to(std::initializer_list<const char*> allowed) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Families: prop42, prop43, stretch_flip, random, k_approval_random.
///  prop42: n, eps, alpha, dist (d(a,s) = d(a,b), default 1)
///  prop43: n, alpha
///  stretch_flip: eps, alpha
///  random: seed, n, z, alpha, metric (uniform|table), preferred (in|mixed|out),
///          sparsity (probability of a zero weight)
///  k_approval_random: seed, n, m, k, alpha, interior (probability that a
///          preferred vector is a mix of two ballots)
GameSpec generate_spec(const std::string& family, const FamilyParams& params);
PreferenceGame generate_instance(const std::string& family, const FamilyParams& params);

/// The two states of the median-flip construction, for agent 0.
std::pair<State, State> stretch_flip_pair();

enum class ReportFormat { json, csv };

std::string emit_report(const PreferenceGame& g, const AnalysisReport& report,
                        ReportFormat format);
/// Verdict rows only, as CSV: claim,hypotheses,lhs,rhs,slack,verdict.
std::string emit_verdicts_csv(const std::vector<BoundVerdict>& verdicts);
std::string emit_dynamics(const PreferenceGame& g, const DynamicsOutcome& outcome);
std::string emit_voting_boundary(const VotingBoundary& vb, ReportFormat format);

/// Re-serializes a JSON document in the canonical layout used by emitters.
std::string canonical_json(const std::string& text);

}  // namespace prefgame

#endif  // PREFGAME_IO_HPP
