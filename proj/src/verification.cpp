#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "prefgame/aggregation.hpp"
#include "prefgame/analysis.hpp"

namespace prefgame {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skip: return "skip";
  }
  return "skip";
}

InequalityCheck verify_equilibrium_inequality(const PreferenceGame& g,
                                              const std::vector<State>& equilibria,
                                              const std::vector<State>& states,
                                              const std::vector<double>& tau) {
  if (tau.size() != g.n()) throw Error("stretch vector has wrong length");
  const Evaluator ev(g);
  InequalityCheck check;
  check.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (const auto& e : equilibria) {
      const double ce = ev.cost(e.span(), i);
      for (const auto& z : states) {
        ++check.triples;
        const double rhs =
            ev.cost(z.span(), i) + tau[i] * (1.0 - g.alpha()) * relative_distance(g, z, e, i);
        const double slack = rhs - ce;
        if (slack < check.min_slack) {
          check.min_slack = slack;
          check.lhs = ce;
          check.rhs = rhs;
          check.agent = i;
          check.equilibrium = e;
          check.state = z;
        }
      }
    }
  }
  if (check.triples == 0) check.min_slack = 0.0;
  check.ok = check.min_slack >= -kTolerance;
  return check;
}

ContainmentCheck verify_difference_containment(const PreferenceGame& g,
                                               const std::vector<State>& equilibria,
                                               const std::vector<State>& optima) {
  ContainmentCheck check;
  for (const auto& e : equilibria) {
    for (const auto& o : optima) {
      const auto diff = difference_set(o, e);
      if (diff.empty()) continue;
      ++check.pairs;
      for (auto i : diff) {
        if (g.pref_distance(i, o[i]) <= kZeroDistance) {
          check.ok = false;
          check.equilibrium = e;
          check.optimum = o;
          check.agent = i;
          return check;
        }
      }
    }
  }
  return check;
}

namespace {

// Named hypotheses of one claim; the verdict is skipped unless all hold.
class Requirements {
 public:
  Requirements& need(std::string name, bool held) {
    items_.emplace_back(std::move(name), held);
    return *this;
  }
  bool held() const {
    return std::all_of(items_.begin(), items_.end(), [](const auto& p) { return p.second; });
  }
  std::string text() const {
    std::string out;
    for (const auto& [name, ok] : items_) {
      if (!out.empty()) out += "; ";
      out += name;
    }
    return out;
  }
  std::string failed() const {
    std::string out;
    for (const auto& [name, ok] : items_) {
      if (ok) continue;
      if (!out.empty()) out += "; ";
      out += name;
    }
    return "hypothesis not met: " + out;
  }

 private:
  std::vector<std::pair<std::string, bool>> items_;
};

BoundVerdict skipped(std::string claim, const Requirements& req) {
  BoundVerdict v;
  v.claim = std::move(claim);
  v.hypotheses = req.text();
  v.detail = req.failed();
  return v;
}

BoundVerdict judged(std::string claim, const Requirements& req, double lhs, double rhs,
                    std::string detail = {}) {
  BoundVerdict v;
  v.claim = std::move(claim);
  v.hypotheses = req.text();
  v.hypotheses_held = true;
  v.lhs = lhs;
  v.rhs = rhs;
  v.slack = rhs - lhs;
  v.verdict = v.slack >= -kTolerance ? Verdict::pass : Verdict::fail;
  v.detail = std::move(detail);
  return v;
}

// Equality claims report slack = -|lhs - rhs|.
BoundVerdict judged_equal(std::string claim, const Requirements& req, double lhs, double rhs,
                          std::string detail = {}) {
  BoundVerdict v = judged(std::move(claim), req, lhs, rhs, std::move(detail));
  v.slack = -std::abs(lhs - rhs);
  v.verdict = v.slack >= -kTolerance ? Verdict::pass : Verdict::fail;
  return v;
}

std::vector<std::vector<double>> weight_rows(const PreferenceGame& g) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < g.n(); ++i) {
    auto r = g.weight_row(i);
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

bool contains(const std::vector<State>& sorted, const State& s) {
  return std::binary_search(sorted.begin(), sorted.end(), s);
}

bool all_consensus(const std::vector<State>& states) {
  return std::all_of(states.begin(), states.end(), [](const State& s) { return s.is_consensus(); });
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::vector<BoundVerdict> verify_structural_claims(const PreferenceGame& g,
                                                   const AnalysisReport& report,
                                                   const AnalysisOptions& options) {
  std::vector<BoundVerdict> out;
  const auto& val = g.validation();
  const auto& E = report.enumeration.equilibria;
  const double a = g.alpha();

  {
    Requirements req;
    const auto rows = weight_rows(g);
    const auto rule = make_rule(g.aggregation(), g.z_distances());
    const auto u = check_unanimity(rule, g.space_size(), rows);
    const auto c = check_consistency(rule, g.z_distances(), rows, options.consistency_trials);
    const double violations = (u.ok ? 0.0 : 1.0) + (c.ok ? 0.0 : 1.0);
    out.push_back(judged("aggregation-feasible", req, violations, 0.0,
                         std::string(c.exhaustive ? "exhaustive" : "sampled") + " consistency, " +
                             std::to_string(c.pairs_checked) + " pairs"));
  }
  {
    Requirements req;
    req.need("alpha <= 1/2", a <= 0.5).need("exact metric on Z and preferred points",
                                             val.exact_on_game_points);
    if (!req.held()) {
      out.push_back(skipped("consensus-equilibria", req));
    } else {
      double missing = 0.0;
      std::string detail;
      for (std::size_t z = 0; z < g.space_size(); ++z) {
        const auto s = State::consensus(g.n(), z);
        if (!contains(E, s)) {
          if (missing == 0.0) detail = "missing " + g.state_label(s);
          missing += 1.0;
        }
      }
      out.push_back(judged("consensus-equilibria", req, missing, 0.0, detail));
    }
  }
  {
    Requirements req;
    const auto r = classify_restriction(g);
    req.need("alpha >= 1/2", a >= 0.5)
        .need("unrestricted", r.kind == RestrictionClass::unrestricted)
        .need("exact metric on Z", val.exact_on_z);
    if (!req.held()) {
      out.push_back(skipped("truthful-equilibrium", req));
    } else {
      const State s = g.truthful_state();
      double bad = contains(E, s) ? 0.0 : 1.0;
      std::string detail = "truthful profile " + g.state_label(s);
      // Uniqueness needs strict stubbornness and distinct points in Z.
      if (a > 0.5 && val.positive_on_z) {
        if (E.size() != 1) bad += 1.0;
        detail += ", |E| = " + std::to_string(E.size());
      }
      out.push_back(judged("truthful-equilibrium", req, bad, 0.0, detail));
    }
  }
  {
    Requirements req;
    req.need("alpha = 0", a == 0.0);
    if (!req.held()) {
      out.push_back(skipped("zero-alpha-poa", req));
    } else {
      const bool ok = report.poa_sum.is_finite() && report.poa_sum.value == 1.0 &&
                      report.poa_max.is_finite() && report.poa_max.value == 1.0;
      out.push_back(judged("zero-alpha-poa", req, ok ? 0.0 : 1.0, 0.0,
                           "PoA_SUM=" + report.poa_sum.to_string() +
                               " PoA_MAX=" + report.poa_max.to_string()));
    }
  }
  return out;
}

std::vector<BoundVerdict> verify_poa_bounds(const PreferenceGame& g,
                                            const AnalysisReport& report) {
  std::vector<BoundVerdict> out;
  const auto& val = g.validation();
  const auto& en = report.enumeration;
  const auto& E = en.equilibria;
  const double a = g.alpha();

  {
    Requirements req;
    req.need("exact metric on Z", val.exact_on_z).need("E nonempty", !E.empty());
    if (!req.held()) {
      out.push_back(skipped("equilibrium-inequality", req));
    } else {
      struct Run {
        const std::vector<State>* states;
        const StretchResult* tau;
      };
      std::vector<Run> runs{{&en.sum.states, &report.tau_sum}, {&en.max.states, &report.tau_max}};
      std::vector<State> everything;
      if (report.tau_all) {
        for (std::uint64_t id = 0; id < en.states; ++id)
          everything.push_back(State::from_id(id, g.n(), g.space_size()));
        runs.push_back({&everything, &*report.tau_all});
      }
      InequalityCheck worst;
      worst.min_slack = std::numeric_limits<double>::infinity();
      std::string cls;
      for (const auto& run : runs) {
        auto c = verify_equilibrium_inequality(g, E, *run.states, run.tau->tau);
        if (c.triples > 0 && c.min_slack < worst.min_slack) {
          worst = c;
          cls = to_string(run.tau->comparison);
        }
      }
      std::string detail = "tightest over " + cls;
      if (worst.state) {
        detail += ": agent " + std::to_string(worst.agent + 1) + ", e=" +
                  g.state_label(*worst.equilibrium) + ", z=" + g.state_label(*worst.state);
      }
      out.push_back(judged("equilibrium-inequality", req, worst.lhs, worst.rhs, detail));
    }
  }

  {
    Requirements req;
    req.need("alpha > 1/2", a > 0.5)
        .need("exact metric on Z", val.exact_on_z)
        .need("distinct strategies at positive distance", val.positive_on_z)
        .need("E nonempty", !E.empty());
    if (!req.held()) {
      out.push_back(skipped("difference-containment", req));
    } else {
      const auto c = verify_difference_containment(g, E, en.sum.states);
      std::string detail = std::to_string(c.pairs) + " pairs";
      if (!c.ok) {
        detail = "agent " + std::to_string(c.agent + 1) + " in D(o,e) but not D(o,s): o=" +
                 g.state_label(*c.optimum) + ", e=" + g.state_label(*c.equilibrium);
      }
      out.push_back(judged("difference-containment", req, c.ok ? 0.0 : 1.0, 0.0, detail));
    }
  }

  auto poa_claim = [&](const std::string& claim, const PoaValue& poa, const Optimum& opt,
                       double tau, double factor) {
    Requirements req;
    req.need("alpha > 1/2", a > 0.5)
        .need("exact metric on Z", val.exact_on_z)
        .need("distinct strategies at positive distance", val.positive_on_z)
        .need("E nonempty", !E.empty())
        .need("beta defined and positive", report.beta.global && *report.beta.global > 0.0);
    if (!req.held()) return skipped(claim, req);
    const double beta = *report.beta.global;
    const double rhs = 1.0 + ((1.0 - a) / a) * factor * tau / beta;
    if (poa.kind == PoaValue::Kind::infinite) {
      const bool subset = std::all_of(E.begin(), E.end(),
                                      [&](const State& e) { return contains(opt.states, e); });
      if (subset) {
        // Zero optimum with E strictly inside O: the definition says +inf,
        // the argument's first case says 1. Neither reading is asserted.
        BoundVerdict v = skipped(claim, req);
        v.detail = "zero optimum with E a strict subset of the optimal set; PoA conventions disagree";
        return v;
      }
    }
    const double lhs = poa.kind == PoaValue::Kind::infinite
                           ? std::numeric_limits<double>::infinity()
                           : poa.value;
    return judged(claim, req, lhs, rhs,
                  "tau=" + fmt(tau) + " beta=" + fmt(beta) +
                      (factor != 1.0 ? " delta=" + fmt(factor) : std::string()));
  };
  out.push_back(poa_claim("poa-sum-bound", report.poa_sum, en.sum, report.tau_sum.global,
                          report.delta.global));
  out.push_back(poa_claim("poa-max-bound", report.poa_max, en.max, report.tau_max.global, 1.0));
  return out;
}

std::vector<BoundVerdict> verify_parameter_bounds(const PreferenceGame& g,
                                                  const AnalysisReport& report) {
  std::vector<BoundVerdict> out;
  const auto& val = g.validation();
  const auto& en = report.enumeration;
  const auto& E = en.equilibria;
  const double a = g.alpha();
  const bool beta_defined = report.beta.global.has_value();

  {
    Requirements req;
    req.need("alpha > 1/2", a > 0.5)
        .need("exact metric on U", val.exact_on_universe)
        .need("E nonempty", !E.empty())
        .need("beta defined", beta_defined);
    if (!req.held()) {
      out.push_back(skipped("boundary-exact-metric", req));
    } else {
      out.push_back(judged("boundary-exact-metric", req, (2.0 * a - 1.0) / (2.0 * a),
                           *report.beta.global));
    }
  }
  {
    const bool unrestricted = report.restriction == RestrictionClass::unrestricted;
    Requirements req;
    req.need("alpha > 1/2", a > 0.5)
        .need("unrestricted with exact metric on game points, or uniform metric",
              (unrestricted && val.exact_on_game_points) || val.uniform)
        .need("E nonempty", !E.empty())
        .need("beta defined", beta_defined);
    if (!req.held()) {
      out.push_back(skipped("boundary-unit", req));
    } else {
      out.push_back(judged_equal("boundary-unit", req, *report.beta.global, 1.0));
    }
  }
  {
    Requirements req;
    req.need("E nonempty", !E.empty()).need("Z has a positive distance", report.tau_cap.has_value());
    if (!req.held()) {
      out.push_back(skipped("stretch-diameter", req));
    } else {
      double tau = std::max(report.tau_sum.global, report.tau_max.global);
      std::string detail = "stretch over O_SUM and O_MAX";
      if (report.tau_all) {
        tau = std::max(tau, report.tau_all->global);
        detail = "stretch over ALL_STATES";
      }
      out.push_back(judged("stretch-diameter", req, tau, *report.tau_cap, detail));
    }
  }

  auto consensus_claim = [&](const std::string& claim, const std::string& premise, bool holds) {
    Requirements req;
    req.need(premise, holds)
        .need("exact metric on Z", val.exact_on_z)
        .need("frechet median", g.aggregation() == AggregationKind::frechet_median)
        .need("E nonempty", !E.empty());
    if (!req.held()) return skipped(claim, req);
    return judged(claim, req, std::max(report.tau_sum.global, report.tau_max.global), 2.0);
  };
  out.push_back(consensus_claim("stretch-consensus-optima", "every optimum is a consensus",
                                all_consensus(en.sum.states) && all_consensus(en.max.states)));
  out.push_back(consensus_claim("stretch-consensus-equilibria",
                                "every equilibrium is a consensus", all_consensus(E)));

  {
    Requirements req;
    req.need("k-approval space", g.space().approval().has_value())
        .need("alpha > 1/2", a > 0.5)
        .need("E nonempty", !E.empty())
        .need("beta defined", beta_defined);
    if (!req.held()) {
      out.push_back(skipped("approval-boundary", req));
    } else {
      const double r = (2.0 * a - 1.0) / (2.0 * a);
      out.push_back(judged("approval-boundary", req, r * r, *report.beta.global));
    }
  }
  return out;
}

}  // namespace prefgame
