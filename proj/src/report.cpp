#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "prefgame/io.hpp"

namespace prefgame {

using json = nlohmann::ordered_json;

namespace {

json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json poa(const PoaValue& p) {
  json out;
  switch (p.kind) {
    case PoaValue::Kind::finite: out["value"] = number(p.value); break;
    case PoaValue::Kind::infinite: out["value"] = "inf"; break;
    case PoaValue::Kind::undefined: out["value"] = "undefined"; break;
  }
  out["by_convention"] = p.by_convention;
  if (p.kind != PoaValue::Kind::undefined) {
    out["worst_equilibrium"] = number(p.worst_equilibrium);
    out["optimum"] = number(p.optimum);
  } else {
    out["note"] = "no equilibria";
  }
  return out;
}

json state(const PreferenceGame& g, const State& s) {
  json out;
  out["id"] = s.id(g.space_size());
  out["label"] = g.state_label(s);
  return out;
}

json states(const PreferenceGame& g, const std::vector<State>& list) {
  json out = json::array();
  for (const auto& s : list) out.push_back(state(g, s));
  return out;
}

json stretch(const PreferenceGame& g, const StretchResult& r) {
  json out;
  out["class"] = to_string(r.comparison);
  json hat = json::array(), tau = json::array();
  for (double v : r.tau_hat) hat.push_back(number(v));
  for (double v : r.tau) tau.push_back(number(v));
  out["tau_hat"] = hat;
  out["tau"] = tau;
  out["global"] = number(r.global);
  out["pairs"] = r.pairs;
  out["consistency_ok"] = r.consistency_ok;
  if (r.witness) {
    json w;
    w["agent"] = r.witness->agent;
    w["equilibrium"] = state(g, r.witness->equilibrium);
    w["other"] = state(g, r.witness->other);
    w["ratio"] = number(r.witness->ratio);
    out["witness"] = w;
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

json verdict(const BoundVerdict& v) {
  json out;
  out["claim"] = v.claim;
  out["hypotheses_held"] = v.hypotheses_held;
  out["hypotheses"] = v.hypotheses;
  out["lhs"] = number(v.lhs);
  out["rhs"] = number(v.rhs);
  out["slack"] = number(v.slack);
  out["verdict"] = to_string(v.verdict);
  out["detail"] = v.detail;
  return out;
}

// Shortest text that reads back to the same double.
std::string text_of(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string emit_verdicts_csv(const std::vector<BoundVerdict>& verdicts) {
  std::string out = "claim,hypotheses,lhs,rhs,slack,verdict\n";
  for (const auto& v : verdicts) {
    out += csv_field(v.claim) + "," + csv_field(v.hypotheses) + "," + text_of(v.lhs) + "," +
           text_of(v.rhs) + "," + text_of(v.slack) + "," + to_string(v.verdict) + "\n";
  }
  return out;
}

std::string emit_report(const PreferenceGame& g, const AnalysisReport& r, ReportFormat format) {
  if (format == ReportFormat::csv) return emit_verdicts_csv(r.verdicts);

  json doc;
  json game;
  game["n"] = r.n;
  game["space_size"] = r.space_size;
  game["alpha"] = number(r.alpha);
  game["aggregation"] = r.aggregation;
  game["restriction"] = to_string(r.restriction);
  game["in_space"] = r.in_space;
  game["exact_on_z"] = r.exact_on_z;
  game["exact_on_universe"] = r.exact_on_universe;
  doc["game"] = game;

  const auto& en = r.enumeration;
  json e;
  e["states"] = en.states;
  e["tie_sensitive"] = en.tie_sensitive;
  e["equilibria"] = states(g, en.equilibria);
  json optima;
  for (auto o : {Objective::sum, Objective::max}) {
    json opt;
    opt["value"] = number(en.optimum(o).value);
    opt["states"] = states(g, en.optimum(o).states);
    optima[to_string(o)] = opt;
  }
  e["optima"] = optima;
  doc["enumeration"] = e;

  doc["poa"] = {{"sum", poa(r.poa_sum)}, {"max", poa(r.poa_max)}};

  json delta;
  json per = json::array();
  for (double v : r.delta.per_agent) per.push_back(number(v));
  delta["per_agent"] = per;
  delta["global"] = number(r.delta.global);
  doc["delta"] = delta;

  json tau;
  tau[to_string(ComparisonClass::optima_sum)] = stretch(g, r.tau_sum);
  tau[to_string(ComparisonClass::optima_max)] = stretch(g, r.tau_max);
  tau[to_string(ComparisonClass::all_states)] = r.tau_all ? stretch(g, *r.tau_all) : json(nullptr);
  tau["cap"] = optional_number(r.tau_cap);
  doc["tau"] = tau;

  json beta;
  json bper = json::array();
  for (const auto& v : r.beta.per_agent) bper.push_back(optional_number(v));
  beta["per_agent"] = bper;
  beta["global"] = optional_number(r.beta.global);
  doc["beta"] = beta;

  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(verdict(v));
  doc["verdicts"] = verdicts;
  return doc.dump(2) + "\n";
}

std::string emit_dynamics(const PreferenceGame& g, const DynamicsOutcome& outcome) {
  json doc;
  doc["outcome"] = to_string(outcome.kind);
  doc["final_state"] = state(g, outcome.final_state);
  doc["final_is_equilibrium"] = is_equilibrium(g, outcome.final_state).equilibrium;
  doc["activations"] = outcome.activations;
  doc["moves"] = outcome.moves;
  doc["passes"] = outcome.passes;
  doc["digest"] = hex(outcome.digest);
  doc["cycle"] = states(g, outcome.cycle);
  return doc.dump(2) + "\n";
}

std::string emit_voting_boundary(const VotingBoundary& vb, ReportFormat format) {
  const auto space = StrategySpace::k_approval(vb.spec);
  if (format == ReportFormat::csv) {
    std::string out = "x,e,ell,ratio,closed_form,grid_min,kkt_residual,mu,expected_mu,ok\n";
    for (const auto& row : vb.rows) {
      out += space.name(row.x) + "," + space.name(row.e) + "," + std::to_string(row.ell) + "," +
             text_of(row.ratio) + "," + text_of(row.closed_form) + "," +
             (row.grid ? text_of(row.grid->min_ratio) : std::string()) + "," +
             text_of(row.kkt.max_residual()) + "," + text_of(row.kkt.mu) + "," +
             text_of(row.kkt.expected_mu) + "," + (row.ok ? "true" : "false") + "\n";
    }
    return out;
  }

  json doc;
  doc["m"] = vb.spec.m;
  doc["k"] = vb.spec.k;
  doc["alpha"] = number(vb.alpha);
  doc["source"] = vb.measured ? "certificate+measured" : "certificate";
  doc["closed_form"] = number(vb.closed_form);
  doc["certificate_ok"] = vb.certificate_ok;
  doc["worst_ratio_error"] = number(vb.worst_ratio_error);
  doc["worst_grid_gap"] = number(vb.worst_grid_gap);
  doc["worst_kkt"] = number(vb.worst_kkt);
  json rows = json::array();
  for (const auto& row : vb.rows) {
    json r;
    r["x"] = space.name(row.x);
    r["e"] = space.name(row.e);
    r["ell"] = row.ell;
    json s = json::array();
    for (double v : row.s_star) s.push_back(number(v));
    r["s_star"] = s;
    r["ratio"] = number(row.ratio);
    r["kkt"] = {{"stationarity", number(row.kkt.stationarity)},
                {"complementary_slackness", number(row.kkt.complementary_slackness)},
                {"primal_feasibility", number(row.kkt.primal_feasibility)},
                {"dual_feasibility", number(row.kkt.dual_feasibility)},
                {"mu", number(row.kkt.mu)},
                {"expected_mu", number(row.kkt.expected_mu)}};
    if (row.grid) {
      r["grid"] = {{"min_ratio", number(row.grid->min_ratio)},
                   {"points", row.grid->points},
                   {"resolution", number(row.grid->resolution)}};
    } else {
      r["grid"] = nullptr;
    }
    r["ok"] = row.ok;
    rows.push_back(r);
  }
  doc["rows"] = rows;
  if (vb.measured) {
    json per = json::array();
    for (const auto& v : vb.measured->per_agent) per.push_back(optional_number(v));
    doc["measured"] = {{"per_agent", per}, {"global", optional_number(vb.measured->global)}};
  } else {
    doc["measured"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace prefgame
