#include "prefgame/voting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prefgame {

PreferenceGame build_k_approval_game(std::size_t m, std::size_t k, double alpha,
                                     std::vector<std::vector<double>> weights,
                                     std::vector<Coords> preferred) {
  GameSpec spec;
  spec.alpha = alpha;
  spec.weights = std::move(weights);
  spec.metric = Metric::squared_euclidean(m);
  spec.space = StrategySpace::k_approval({m, k});
  spec.aggregation = AggregationKind::frechet_median;
  for (auto& p : preferred) spec.preferred.emplace_back(std::move(p));
  return PreferenceGame(std::move(spec));
}

DifferenceSets difference_sets(const Coords& x, const Coords& e) {
  if (x.size() != e.size()) throw Error("strategies differ in length");
  DifferenceSets d;
  std::size_t ones_x = 0, ones_e = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const bool bx = x[j] == 1.0, be = e[j] == 1.0;
    if ((!bx && x[j] != 0.0) || (!be && e[j] != 0.0)) throw DomainError("expected 0/1 vectors");
    ones_x += bx;
    ones_e += be;
    (bx ? d.c1 : d.c0).push_back(j);
    if (!bx && be) d.c01.push_back(j);
    if (bx && !be) d.c10.push_back(j);
  }
  if (ones_x != ones_e) throw DomainError("strategies approve different numbers of candidates");
  d.ell = d.c01.size();
  return d;
}

double boundary_closed_form(double alpha) {
  const double r = (2.0 * alpha - 1.0) / (2.0 * alpha);
  return r * r;
}

Coords worst_case_preference(const Coords& x, const Coords& e, double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw Error("worst-case preference needs alpha in (1/2, 1]");
  const auto d = difference_sets(x, e);
  if (d.ell == 0) throw Error("worst-case preference needs x != e");
  Coords s = x;
  for (auto j : d.c01) s[j] = (2.0 * alpha - 1.0) / (2.0 * alpha);
  for (auto j : d.c10) s[j] = 1.0 / (2.0 * alpha);
  return s;
}

double boundary_objective(const Coords& s, const Coords& x, const Coords& e) {
  const auto d = difference_sets(x, e);
  if (d.ell == 0) throw Error("objective undefined for x = e");
  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) total += (s[j] - x[j]) * (s[j] - x[j]);
  return total / (2.0 * static_cast<double>(d.ell));
}

Coords boundary_gradient(const Coords& s, const Coords& x, const Coords& e) {
  const auto d = difference_sets(x, e);
  if (d.ell == 0) throw Error("gradient undefined for x = e");
  Coords grad(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) grad[j] = (s[j] - x[j]) / static_cast<double>(d.ell);
  return grad;
}

double boundary_constraint(const Coords& s, const Coords& x, const Coords& e, double alpha) {
  const auto d = difference_sets(x, e);
  double g = 0.0;
  for (auto j : d.c10) g += s[j];
  for (auto j : d.c01) g -= s[j];
  return g - static_cast<double>(d.ell) * (1.0 - alpha) / alpha;
}

GridResult boundary_grid_oracle(const Coords& x, const Coords& e, double alpha, std::size_t g,
                                bool constrained) {
  if (g < 5) throw Error("grid oracle needs at least 5 points per axis");
  if (!(alpha > 0.5 && alpha <= 1.0)) throw Error("grid oracle needs alpha in (1/2, 1]");
  const auto d = difference_sets(x, e);
  if (d.ell == 0) throw Error("grid oracle needs x != e");
  const std::size_t ell = d.ell;
  const std::size_t vars = 2 * ell;
  // Grid coordinates v[0..ell) on C_01, v[ell..2ell) on C_10. The sum
  // constraint reads sum(v) = ell.
  const double step = 1.0 / static_cast<double>(g - 1);
  const double cap = static_cast<double>(ell) * (1.0 - alpha) / alpha;
  const double bound = constrained ? cap : std::numeric_limits<double>::infinity();
  if (std::pow(static_cast<double>(g), static_cast<double>(vars - 1)) > 2e8) {
    throw Error("grid oracle too large; lower g or ell");
  }

  GridResult best;
  best.min_ratio = std::numeric_limits<double>::infinity();
  best.resolution = step;
  Coords v(vars);
  auto consider = [&](const Coords& p) {
    double excess = 0.0, obj = 0.0;
    for (std::size_t t = 0; t < vars; ++t) {
      if (p[t] < -kZeroDistance || p[t] > 1.0 + kZeroDistance) return;
      excess += t < ell ? -p[t] : p[t];
      obj += t < ell ? p[t] * p[t] : (1.0 - p[t]) * (1.0 - p[t]);
    }
    if (excess > bound + kZeroDistance) return;
    ++best.points;
    const double ratio = obj / static_cast<double>(vars);
    if (ratio < best.min_ratio) {
      best.min_ratio = ratio;
      best.argmin = x;
      for (std::size_t t = 0; t < ell; ++t) best.argmin[d.c01[t]] = p[t];
      for (std::size_t t = 0; t < ell; ++t) best.argmin[d.c10[t]] = p[ell + t];
    }
  };

  // Plain grid: the last coordinate is fixed by the sum constraint.
  std::vector<std::size_t> idx(vars - 1, 0);
  while (true) {
    double partial = 0.0;
    for (std::size_t t = 0; t + 1 < vars; ++t) {
      v[t] = static_cast<double>(idx[t]) * step;
      partial += v[t];
    }
    v[vars - 1] = static_cast<double>(ell) - partial;
    consider(v);
    std::size_t p = idx.size();
    while (p > 0 && ++idx[p - 1] == g) idx[--p] = 0;
    if (p == 0) break;
  }

  // Crossings: free one C_01 coordinate a and one C_10 coordinate b, keep the
  // rest on the grid; a + b is fixed by the sum and b - a hits the bound.
  if (constrained) {
    for (std::size_t a = 0; a < ell; ++a) {
      for (std::size_t b = ell; b < vars; ++b) {
        std::vector<std::size_t> others;
        for (std::size_t t = 0; t < vars; ++t)
          if (t != a && t != b) others.push_back(t);
        std::vector<std::size_t> oi(others.size(), 0);
        while (true) {
          double rest_sum = 0.0, rest_excess = 0.0;
          for (std::size_t q = 0; q < others.size(); ++q) {
            const double val = static_cast<double>(oi[q]) * step;
            v[others[q]] = val;
            rest_sum += val;
            rest_excess += others[q] < ell ? -val : val;
          }
          const double c = static_cast<double>(ell) - rest_sum;
          const double r = cap - rest_excess;
          v[b] = (c + r) / 2.0;
          v[a] = (c - r) / 2.0;
          consider(v);
          std::size_t p = oi.size();
          while (p > 0 && ++oi[p - 1] == g) oi[--p] = 0;
          if (p == 0) break;
        }
      }
    }
  }
  if (best.points == 0) throw Error("grid oracle found no feasible point");
  return best;
}

double KktReport::max_residual() const {
  return std::max({stationarity, complementary_slackness, primal_feasibility, dual_feasibility});
}

KktReport kkt_residual(const Coords& s, const Coords& x, const Coords& e, double alpha) {
  const auto d = difference_sets(x, e);
  if (d.ell == 0) throw Error("KKT system undefined for x = e");
  if (s.size() != x.size()) throw Error("preference has wrong length");
  const double ell = static_cast<double>(d.ell);
  const Coords grad = boundary_gradient(s, x, e);
  Coords gg(s.size(), 0.0);
  for (auto j : d.c10) gg[j] = 1.0;
  for (auto j : d.c01) gg[j] = -1.0;

  KktReport r;
  double dot = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) dot += grad[j] * gg[j];
  r.mu = -dot / (2.0 * ell);
  r.expected_mu = (2.0 * alpha - 1.0) / (2.0 * ell * alpha);
  for (std::size_t j = 0; j < s.size(); ++j) {
    r.stationarity = std::max(r.stationarity, std::abs(grad[j] + r.expected_mu * gg[j]));
  }
  const double gval = boundary_constraint(s, x, e, alpha);
  r.complementary_slackness = std::abs(r.expected_mu * gval);
  double sum = 0.0, box = 0.0;
  for (double v : s) {
    sum += v;
    box = std::max({box, -v, v - 1.0});
  }
  double k = 0.0;
  for (double v : x) k += v;
  r.primal_feasibility = std::max({0.0, gval, std::abs(sum - k), box});
  r.dual_feasibility = std::max(0.0, -r.mu);
  return r;
}

namespace {

const Coords& coords_of(const StrategySpace& space, std::size_t z) {
  return std::get<Coords>(space.point(z));
}

}  // namespace

VotingBoundary voting_boundary(ApprovalSpec spec, double alpha, const CertificateOptions& options) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw Error("voting boundary needs alpha in (1/2, 1]");
  const auto space = StrategySpace::k_approval(spec);
  VotingBoundary vb;
  vb.spec = spec;
  vb.alpha = alpha;
  vb.closed_form = boundary_closed_form(alpha);
  vb.worst_grid_gap = 0.0;
  for (std::size_t xi = 0; xi < space.size(); ++xi) {
    for (std::size_t ei = 0; ei < space.size(); ++ei) {
      if (xi == ei) continue;
      const Coords& x = coords_of(space, xi);
      const Coords& e = coords_of(space, ei);
      CertificateRow row;
      row.x = xi;
      row.e = ei;
      row.ell = difference_sets(x, e).ell;
      row.s_star = worst_case_preference(x, e, alpha);
      row.ratio = boundary_objective(row.s_star, x, e);
      row.closed_form = vb.closed_form;
      row.kkt = kkt_residual(row.s_star, x, e, alpha);
      const double ratio_err = std::abs(row.ratio - row.closed_form);
      const double mu_err = std::abs(row.kkt.mu - row.kkt.expected_mu);
      row.ok = ratio_err <= 1e-12 && row.kkt.max_residual() <= 1e-12 && mu_err <= 1e-12;
      if (options.grid > 0 && row.ell <= options.grid_max_ell) {
        row.grid = boundary_grid_oracle(x, e, alpha, options.grid);
        const double gap = row.grid->min_ratio - row.closed_form;
        // Every grid value is feasible, so it cannot undercut the minimum.
        if (gap < -kTolerance) row.ok = false;
        vb.worst_grid_gap = std::max(vb.worst_grid_gap, gap);
      }
      vb.worst_ratio_error = std::max(vb.worst_ratio_error, ratio_err);
      vb.worst_kkt = std::max({vb.worst_kkt, row.kkt.max_residual(), mu_err});
      vb.certificate_ok = vb.certificate_ok && row.ok;
      vb.rows.push_back(std::move(row));
    }
  }
  return vb;
}

VotingBoundary voting_boundary(const PreferenceGame& g, const std::vector<State>& equilibria,
                               const CertificateOptions& options) {
  const auto& spec = g.space().approval();
  if (!spec) throw Error("voting boundary needs a k-approval game");
  VotingBoundary vb = voting_boundary(*spec, g.alpha(), options);
  if (!equilibria.empty()) vb.measured = boundary(g, equilibria);
  return vb;
}

}  // namespace prefgame
