#include "prefgame/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>
#include <thread>

namespace prefgame {

std::uint64_t default_budget() {
  constexpr std::uint64_t kDefault = 10'000'000;
  const char* env = std::getenv("PREFGAME_BUDGET");
  if (!env) return kDefault;
  std::uint64_t v = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end || v == 0) return kDefault;
  return v;
}

namespace {

struct Candidate {
  std::uint64_t id;
  double value;
};

// Keeps every candidate within kTolerance of the running minimum.
class Band {
 public:
  void offer(std::uint64_t id, double value) {
    if (value < min_) {
      min_ = value;
      std::erase_if(items_, [&](const Candidate& c) { return c.value > min_ + kTolerance; });
    }
    if (value <= min_ + kTolerance) items_.push_back({id, value});
  }
  double min() const { return min_; }
  const std::vector<Candidate>& items() const { return items_; }

 private:
  double min_ = std::numeric_limits<double>::infinity();
  std::vector<Candidate> items_;
};

struct ChunkResult {
  std::vector<std::uint64_t> equilibria;
  Band sum;
  Band max;
};

void advance(std::vector<std::size_t>& z, std::size_t zn) {
  for (std::size_t p = z.size(); p-- > 0;) {
    if (++z[p] < zn) return;
    z[p] = 0;
  }
}

void sweep(const Evaluator& ev, std::uint64_t lo, std::uint64_t hi, ChunkResult& out) {
  const PreferenceGame& g = ev.game();
  const std::size_t n = g.n();
  const std::size_t zn = g.space_size();
  std::vector<std::size_t> z = State::from_id(lo, n, zn).assignment();
  for (std::uint64_t id = lo; id < hi; ++id, advance(z, zn)) {
    bool equilibrium = true;
    double sum = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t agg = ev.aggregate(std::span<const std::size_t>(z), i).strategy;
      const double c = ev.cost_against(i, z[i], agg);
      if (c > ev.best_cost(i, agg) + kTolerance) equilibrium = false;
      sum += c;
      mx = std::max(mx, c);
    }
    if (equilibrium) out.equilibria.push_back(id);
    out.sum.offer(id, sum);
    out.max.offer(id, mx);
  }
}

Optimum merge_band(const std::vector<ChunkResult>& chunks, Band ChunkResult::*band,
                   std::size_t n, std::size_t zn) {
  Optimum opt;
  opt.value = std::numeric_limits<double>::infinity();
  for (const auto& c : chunks) opt.value = std::min(opt.value, (c.*band).min());
  for (const auto& c : chunks) {
    for (const auto& cand : (c.*band).items()) {
      if (cand.value <= opt.value + kTolerance) opt.states.push_back(State::from_id(cand.id, n, zn));
    }
  }
  return opt;
}

}  // namespace

Enumeration enumerate_states(const PreferenceGame& g, const EnumerationOptions& options) {
  const std::uint64_t total = g.state_count();
  if (total > options.budget) {
    std::ostringstream os;
    os << "refusing to enumerate |Z|^n = " << g.space_size() << "^" << g.n();
    if (total == std::numeric_limits<std::uint64_t>::max()) {
      os << " (overflows 64 bits)";
    } else {
      os << " = " << total;
    }
    os << " states; budget is " << options.budget << " (set PREFGAME_BUDGET to raise it)";
    throw BudgetExceeded(os.str());
  }

  const Evaluator ev(g);
  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, workers);
  constexpr std::uint64_t kMinChunk = 4096;
  std::uint64_t chunk_count = std::max<std::uint64_t>(1, total / kMinChunk);
  chunk_count = std::min<std::uint64_t>(chunk_count, std::uint64_t{workers} * 8);
  const std::uint64_t chunk_len = (total + chunk_count - 1) / chunk_count;
  chunk_count = (total + chunk_len - 1) / chunk_len;

  std::vector<ChunkResult> chunks(chunk_count);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t c; (c = next.fetch_add(1)) < chunk_count;) {
      const std::uint64_t lo = c * chunk_len;
      sweep(ev, lo, std::min(total, lo + chunk_len), chunks[c]);
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunk_count));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  Enumeration en;
  en.states = total;
  for (const auto& c : chunks) {
    for (auto id : c.equilibria) en.equilibria.push_back(State::from_id(id, g.n(), g.space_size()));
  }
  en.sum = merge_band(chunks, &ChunkResult::sum, g.n(), g.space_size());
  en.max = merge_band(chunks, &ChunkResult::max, g.n(), g.space_size());
  en.tie_sensitive = ev.saw_tie();
  return en;
}

std::vector<State> enumerate_equilibria(const PreferenceGame& g,
                                        const EnumerationOptions& options) {
  return enumerate_states(g, options).equilibria;
}

Optimum optimal_states(const PreferenceGame& g, Objective objective,
                       const EnumerationOptions& options) {
  auto en = enumerate_states(g, options);
  return objective == Objective::sum ? std::move(en.sum) : std::move(en.max);
}

std::string PoaValue::to_string() const {
  switch (kind) {
    case Kind::finite: {
      std::ostringstream os;
      os.precision(17);
      os << value;
      return os.str();
    }
    case Kind::infinite: return "inf";
    case Kind::undefined: return "undefined";
  }
  return "undefined";
}

PoaValue price_of_anarchy(const PreferenceGame& g, const std::vector<State>& equilibria,
                          const Optimum& optimum, Objective objective) {
  PoaValue poa;
  poa.optimum = optimum.value;
  if (equilibria.empty()) return poa;
  for (const auto& e : equilibria) {
    poa.worst_equilibrium = std::max(poa.worst_equilibrium, social_cost(g, e, objective));
  }
  if (optimum.value > kTolerance) {
    poa.kind = PoaValue::Kind::finite;
    poa.value = poa.worst_equilibrium / optimum.value;
    return poa;
  }
  poa.by_convention = true;
  if (equilibria == optimum.states) {
    poa.kind = PoaValue::Kind::finite;
    poa.value = 1.0;
  } else {
    poa.kind = PoaValue::Kind::infinite;
    poa.value = std::numeric_limits<double>::infinity();
  }
  return poa;
}

PoaValue price_of_anarchy(const PreferenceGame& g, Objective objective,
                          const EnumerationOptions& options) {
  const auto en = enumerate_states(g, options);
  return price_of_anarchy(g, en.equilibria, en.optimum(objective), objective);
}

SocialImpact social_impact(const PreferenceGame& g) {
  SocialImpact s;
  s.per_agent.assign(g.n(), 0.0);
  for (std::size_t j = 0; j < g.n(); ++j)
    for (std::size_t i = 0; i < g.n(); ++i) s.per_agent[i] += g.weight(j, i);
  s.global = *std::max_element(s.per_agent.begin(), s.per_agent.end());
  return s;
}

std::string to_string(ComparisonClass c) {
  switch (c) {
    case ComparisonClass::optima_sum: return "O_SUM";
    case ComparisonClass::optima_max: return "O_MAX";
    case ComparisonClass::all_states: return "ALL_STATES";
  }
  return "?";
}

std::optional<double> stretch_ratio(const PreferenceGame& g, const State& e, const State& y,
                                    std::size_t i) {
  const double ds = relative_distance(g, e, y, i);
  if (ds <= kZeroDistance) return std::nullopt;
  const std::size_t ae = aggregate_for(g, e, i).strategy;
  const std::size_t ay = aggregate_for(g, y, i).strategy;
  return g.zdist(ae, ay) / ds;
}

StretchResult stretch(const PreferenceGame& g, const std::vector<State>& equilibria,
                      const std::vector<State>& comparison, ComparisonClass kind) {
  const Evaluator ev(g);
  StretchResult r;
  r.comparison = kind;
  r.tau_hat.assign(g.n(), 0.0);
  double best = -1.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (const auto& e : equilibria) {
      const std::size_t ae = ev.aggregate(e, i).strategy;
      for (const auto& y : comparison) {
        ++r.pairs;
        const double ds = relative_distance(g, e, y, i);
        const double drift = g.zdist(ae, ev.aggregate(y, i).strategy);
        if (ds <= kZeroDistance) {
          if (drift > kZeroDistance) r.consistency_ok = false;
          continue;
        }
        const double ratio = drift / ds;
        r.tau_hat[i] = std::max(r.tau_hat[i], ratio);
        if (ratio > best) {
          best = ratio;
          r.witness = StretchWitness{i, e, y, ratio};
        }
      }
    }
  }
  r.tau.resize(g.n());
  r.global = 1.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    r.tau[i] = std::max(r.tau_hat[i], 1.0);
    r.global = std::max(r.global, r.tau[i]);
  }
  return r;
}

namespace {

std::vector<State> all_states(const PreferenceGame& g) {
  std::vector<State> out;
  out.reserve(g.state_count());
  for (std::uint64_t id = 0; id < g.state_count(); ++id) {
    out.push_back(State::from_id(id, g.n(), g.space_size()));
  }
  return out;
}

}  // namespace

StretchResult stretch(const PreferenceGame& g, const Enumeration& en, ComparisonClass kind,
                      const EnumerationOptions& options) {
  switch (kind) {
    case ComparisonClass::optima_sum: return stretch(g, en.equilibria, en.sum.states, kind);
    case ComparisonClass::optima_max: return stretch(g, en.equilibria, en.max.states, kind);
    case ComparisonClass::all_states: break;
  }
  const std::uint64_t pairs = en.equilibria.size() * en.states;
  if (en.states != 0 && pairs / en.states != en.equilibria.size()) {
    throw BudgetExceeded("ALL_STATES stretch: pair count overflows");
  }
  if (pairs > options.budget) {
    throw BudgetExceeded("ALL_STATES stretch needs |E|*|Z|^n = " + std::to_string(pairs) +
                         " pairs; budget is " + std::to_string(options.budget));
  }
  return stretch(g, en.equilibria, all_states(g), kind);
}

std::optional<double> stretch_cap(const PreferenceGame& g) {
  const auto& zd = g.z_distances();
  const auto dmin = zd.min_positive();
  if (!dmin) return std::nullopt;
  double wmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j)
      if (i != j && g.weight(i, j) > 0.0) wmin = std::min(wmin, g.weight(i, j));
  return zd.max() / (wmin * *dmin);
}

BoundaryResult boundary(const PreferenceGame& g, const std::vector<State>& equilibria) {
  BoundaryResult r;
  r.per_agent.resize(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (const auto& e : equilibria) {
      for (std::size_t x = 0; x < g.space_size(); ++x) {
        const double d = g.zdist(x, e[i]);
        if (d <= kZeroDistance) continue;
        const double ratio = g.pref_distance(i, x) / d;
        if (!r.per_agent[i] || ratio < *r.per_agent[i]) r.per_agent[i] = ratio;
      }
    }
    if (r.per_agent[i] && (!r.global || *r.per_agent[i] < *r.global)) r.global = r.per_agent[i];
  }
  return r;
}

bool AnalysisReport::any_failure() const {
  return std::any_of(verdicts.begin(), verdicts.end(),
                     [](const BoundVerdict& v) { return v.verdict == Verdict::fail; });
}

const BoundVerdict* AnalysisReport::find(const std::string& claim) const {
  for (const auto& v : verdicts)
    if (v.claim == claim) return &v;
  return nullptr;
}

AnalysisReport analyze(const PreferenceGame& g, const AnalysisOptions& options) {
  AnalysisReport r;
  r.n = g.n();
  r.space_size = g.space_size();
  r.alpha = g.alpha();
  r.aggregation = to_string(g.aggregation());
  const auto restriction = classify_restriction(g);
  r.restriction = restriction.kind;
  r.in_space = restriction.in_space;
  r.exact_on_z = g.validation().exact_on_z;
  r.exact_on_universe = g.validation().exact_on_universe;

  r.enumeration = enumerate_states(g, options.enumeration);
  const auto& en = r.enumeration;
  r.poa_sum = price_of_anarchy(g, en.equilibria, en.sum, Objective::sum);
  r.poa_max = price_of_anarchy(g, en.equilibria, en.max, Objective::max);
  r.delta = social_impact(g);
  r.tau_sum = stretch(g, en, ComparisonClass::optima_sum);
  r.tau_max = stretch(g, en, ComparisonClass::optima_max);
  if (options.all_states_stretch &&
      en.equilibria.size() <= options.enumeration.budget / std::max<std::uint64_t>(1, en.states)) {
    r.tau_all = stretch(g, en, ComparisonClass::all_states, options.enumeration);
  }
  r.tau_cap = stretch_cap(g);
  r.beta = boundary(g, en.equilibria);

  for (auto&& list : {verify_structural_claims(g, r, options), verify_poa_bounds(g, r),
                      verify_parameter_bounds(g, r)}) {
    r.verdicts.insert(r.verdicts.end(), list.begin(), list.end());
  }
  return r;
}

}  // namespace prefgame
