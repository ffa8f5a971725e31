#ifndef PREFGAME_VOTING_HPP
#define PREFGAME_VOTING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "prefgame/analysis.hpp"
#include "prefgame/game.hpp"

namespace prefgame {

/// k-approval game: squared Euclidean distance, Frechet median aggregation.
PreferenceGame build_k_approval_game(std::size_t m, std::size_t k, double alpha,
                                     std::vector<std::vector<double>> weights,
                                     std::vector<Coords> preferred);

/// Coordinate classes of x relative to e: C_0/C_1 by x's bits, C_01 where x
/// is 0 and e is 1, C_10 where x is 1 and e is 0. ell = |C_01| = |C_10|.
struct DifferenceSets {
  std::vector<std::size_t> c0, c1, c01, c10;
  std::size_t ell = 0;
};

/// Requires two 0/1 vectors of equal length with the same number of ones.
DifferenceSets difference_sets(const Coords& x, const Coords& e);

/// ((2 alpha - 1) / (2 alpha))^2.
double boundary_closed_form(double alpha);

/// The minimizer of d(x, s) / d(x, e) over admissible s. Throws when x = e or
/// alpha <= 1/2.
Coords worst_case_preference(const Coords& x, const Coords& e, double alpha);

/// f(s) = d(x, s) / (2 ell), its gradient, and the linear constraint
/// g(s) = sum_{C_10} s - sum_{C_01} s - ell (1 - alpha) / alpha.
double boundary_objective(const Coords& s, const Coords& x, const Coords& e);
Coords boundary_gradient(const Coords& s, const Coords& x, const Coords& e);
double boundary_constraint(const Coords& s, const Coords& x, const Coords& e, double alpha);

struct GridResult {
  double min_ratio = 0.0;
  Coords argmin;
  std::uint64_t points = 0;  // feasible points evaluated
  double resolution = 0.0;   // grid step
};

/// Minimum of d(x, s) / d(x, e) over a grid of g values per varied
/// coordinate. Only C_01 and C_10 coordinates vary; the rest sit at x's bits.
/// Every line of the grid also contributes its crossing with the active
/// constraint, so the result is always a feasible value. With
/// `constrained = false` the stubbornness constraint is dropped.
GridResult boundary_grid_oracle(const Coords& x, const Coords& e, double alpha, std::size_t g,
                                bool constrained = true);

struct KktReport {
  double stationarity = 0.0;
  double complementary_slackness = 0.0;
  double primal_feasibility = 0.0;
  double dual_feasibility = 0.0;
  /// Least-squares multiplier of the stubbornness constraint at s.
  double mu = 0.0;
  double expected_mu = 0.0;  // (2 alpha - 1) / (2 ell alpha)

  double max_residual() const;
};

/// Residuals of the KKT system with multiplier expected_mu on g and zero on
/// the sum and box constraints. `mu` is fitted independently, so comparing it
/// with expected_mu checks the multiplier itself.
KktReport kkt_residual(const Coords& s, const Coords& x, const Coords& e, double alpha);

struct CertificateRow {
  std::size_t x = 0;
  std::size_t e = 0;
  std::size_t ell = 0;
  Coords s_star;
  double ratio = 0.0;
  double closed_form = 0.0;
  std::optional<GridResult> grid;
  KktReport kkt;
  bool ok = false;
};

struct VotingBoundary {
  ApprovalSpec spec;
  double alpha = 0.0;
  double closed_form = 0.0;
  std::vector<CertificateRow> rows;
  bool certificate_ok = true;
  double worst_ratio_error = 0.0;
  double worst_grid_gap = 0.0;  // grid minimum minus closed form
  double worst_kkt = 0.0;
  /// Present when a game with equilibria was supplied.
  std::optional<BoundaryResult> measured;
};

struct CertificateOptions {
  std::size_t grid = 0;  // 0 disables the grid oracle
  std::size_t grid_max_ell = 2;
};

/// Certificate over every ordered pair x != e of Z; needs no equilibria.
VotingBoundary voting_boundary(ApprovalSpec spec, double alpha,
                               const CertificateOptions& options = {});
/// Certificate plus the boundary measured over the given equilibria.
VotingBoundary voting_boundary(const PreferenceGame& g, const std::vector<State>& equilibria,
                               const CertificateOptions& options = {});

}  // namespace prefgame

#endif  // PREFGAME_VOTING_HPP
