#include <charconv>
#include <cmath>
#include <sstream>

#include "prefgame/io.hpp"
#include "prefgame/random.hpp"

namespace prefgame {

FamilyParams FamilyParams::parse(const std::string& text) {
  FamilyParams p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("parameter '" + item + "' is not key=value");
    p.values_[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return p;
}

FamilyParams& FamilyParams::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  return *this;
}

FamilyParams& FamilyParams::set(const std::string& key, double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  values_[key] = os.str();
  return *this;
}

double FamilyParams::real(const std::string& key, std::optional<double> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    if (!fallback) throw Error("missing parameter '" + key + "'");
    return *fallback;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || it->second.empty()) {
    throw Error("parameter '" + key + "' is not a number: '" + it->second + "'");
  }
  return v;
}

std::uint64_t FamilyParams::integer(const std::string& key,
                                    std::optional<std::uint64_t> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    if (!fallback) throw Error("missing parameter '" + key + "'");
    return *fallback;
  }
  const std::string& s = it->second;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error("parameter '" + key + "' is not a nonnegative integer: '" + s + "'");
  }
  return v;
}

std::string FamilyParams::text(const std::string& key, std::optional<std::string> fallback) const {
  auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  if (!fallback) throw Error("missing parameter '" + key + "'");
  return *fallback;
}

void FamilyParams::restrict_to(std::initializer_list<const char*> allowed) const {
  for (const auto& [key, value] : values_) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw Error("unknown parameter '" + key + "' for this family");
  }
}

namespace {

std::vector<std::vector<double>> uniform_weights(std::size_t n) {
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 1.0 / static_cast<double>(n - 1)));
  for (std::size_t i = 0; i < n; ++i) w[i][i] = 0.0;
  return w;
}

std::size_t agents(const FamilyParams& p, std::uint64_t fallback) {
  const auto n = p.integer("n", fallback);
  if (n < 2 || n > 64) throw Error("n must be in [2, 64]");
  return static_cast<std::size_t>(n);
}

double alpha_of(const FamilyParams& p, double fallback) {
  const double a = p.real("alpha", fallback);
  if (!(a >= 0.0 && a <= 1.0)) throw Error("alpha must be in [0,1]");
  return a;
}

// Agent i sees two endpoints at distance d_as = d(a,b) from a, and s sits at
// eps from b.
GameSpec two_point_family(std::size_t n, double alpha, double eps, double dist) {
  GameSpec spec;
  spec.alpha = alpha;
  spec.weights = uniform_weights(n);
  spec.metric = Metric::table({"a", "b", "s"},
                              {{0.0, dist, dist}, {dist, 0.0, eps}, {dist, eps, 0.0}});
  spec.space = StrategySpace::enumerated(spec.metric, {"a", "b"});
  spec.aggregation = AggregationKind::frechet_median;
  spec.preferred.assign(n, Point(std::size_t{2}));
  return spec;
}

std::vector<std::vector<double>> random_weights(Rng& rng, std::size_t n, double sparsity) {
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double keep = uniform01(rng);
      const double v = 0.05 + uniform01(rng);
      if (keep >= sparsity) {
        w[i][j] = v;
        sum += v;
      }
    }
    if (sum == 0.0) {
      const std::size_t j = (i + 1 + uniform_index(rng, n - 1)) % n;
      w[i][j] = 1.0;
      sum = 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) w[i][j] /= sum;
  }
  return w;
}

GameSpec random_family(const FamilyParams& p) {
  p.restrict_to({"seed", "n", "z", "alpha", "metric", "preferred", "sparsity", "aggregation"});
  Rng rng(p.integer("seed"));
  const std::size_t n = agents(p, 3);
  const auto zn = static_cast<std::size_t>(p.integer("z", 3));
  if (zn < 2 || zn > 64) throw Error("z must be in [2, 64]");
  const double alpha = alpha_of(p, 0.5);
  const std::string metric = p.text("metric", "table");
  const std::string mode = p.text("preferred", "in");
  const double sparsity = p.real("sparsity", 0.25);
  if (!(sparsity >= 0.0 && sparsity < 1.0)) throw Error("sparsity must be in [0,1)");
  const std::string aggregation = p.text("aggregation", "frechet_median");

  GameSpec spec;
  spec.alpha = alpha;
  spec.weights = random_weights(rng, n, sparsity);
  if (aggregation == "frechet_median") {
    spec.aggregation = AggregationKind::frechet_median;
  } else if (aggregation == "frechet_mean") {
    spec.aggregation = AggregationKind::frechet_mean;
  } else {
    throw Error("unknown aggregation '" + aggregation + "'");
  }

  // Preferred strategies: a Z index, or an extra universe point.
  std::vector<std::optional<std::size_t>> in_z(n);
  std::size_t extra = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool inside = mode == "in";
    if (mode == "mixed") inside = uniform01(rng) < 0.5;
    else if (mode != "in" && mode != "out") throw Error("preferred must be in|mixed|out");
    if (inside) {
      in_z[i] = uniform_index(rng, zn);
    } else {
      ++extra;
    }
  }

  std::vector<std::string> labels;
  for (std::size_t z = 0; z < zn; ++z) labels.push_back("z" + std::to_string(z));
  for (std::size_t u = 0; u < extra; ++u) labels.push_back("u" + std::to_string(u));

  if (metric == "uniform") {
    spec.metric = Metric::uniform(labels);
  } else if (metric == "table") {
    // Euclidean distances between random points of the unit square.
    std::vector<std::pair<double, double>> pts;
    for (std::size_t l = 0; l < labels.size(); ++l) {
      const double x = uniform01(rng);
      const double y = uniform01(rng);
      pts.emplace_back(x, y);
    }
    std::vector<std::vector<double>> m(labels.size(), std::vector<double>(labels.size(), 0.0));
    for (std::size_t a = 0; a < labels.size(); ++a) {
      for (std::size_t b = 0; b < labels.size(); ++b) {
        if (a == b) continue;
        const double dx = pts[a].first - pts[b].first;
        const double dy = pts[a].second - pts[b].second;
        m[a][b] = std::sqrt(dx * dx + dy * dy);
      }
    }
    spec.metric = Metric::table(labels, m);
  } else {
    throw Error("metric must be uniform|table");
  }
  spec.space = StrategySpace::enumerated(
      spec.metric, std::vector<std::string>(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(zn)));
  std::size_t next_extra = zn;
  for (std::size_t i = 0; i < n; ++i) {
    spec.preferred.emplace_back(in_z[i] ? *in_z[i] : next_extra++);
  }
  return spec;
}

GameSpec approval_family(const FamilyParams& p) {
  p.restrict_to({"seed", "n", "m", "k", "alpha", "interior", "sparsity"});
  Rng rng(p.integer("seed"));
  const std::size_t n = agents(p, 3);
  const auto m = static_cast<std::size_t>(p.integer("m", 2));
  const auto k = static_cast<std::size_t>(p.integer("k", 1));
  const double alpha = alpha_of(p, 0.75);
  const double interior = p.real("interior", 0.5);
  const double sparsity = p.real("sparsity", 0.25);
  if (!(sparsity >= 0.0 && sparsity < 1.0)) throw Error("sparsity must be in [0,1)");

  GameSpec spec;
  spec.alpha = alpha;
  spec.weights = random_weights(rng, n, sparsity);
  spec.metric = Metric::squared_euclidean(m);
  spec.space = StrategySpace::k_approval({m, k});
  spec.aggregation = AggregationKind::frechet_median;
  for (std::size_t i = 0; i < n; ++i) {
    const Coords& a = std::get<Coords>(spec.space.point(uniform_index(rng, spec.space.size())));
    if (uniform01(rng) < interior) {
      const Coords& b = std::get<Coords>(spec.space.point(uniform_index(rng, spec.space.size())));
      const double lambda = uniform01(rng);
      Coords s(m);
      for (std::size_t j = 0; j < m; ++j) s[j] = lambda * a[j] + (1.0 - lambda) * b[j];
      spec.preferred.emplace_back(std::move(s));
    } else {
      spec.preferred.emplace_back(a);
    }
  }
  return spec;
}

}  // namespace

GameSpec generate_spec(const std::string& family, const FamilyParams& p) {
  if (family == "prop42") {
    p.restrict_to({"n", "eps", "alpha", "dist"});
    const double eps = p.real("eps", 0.01);
    if (!(eps > 0.0)) throw Error("eps must be > 0");
    const double dist = p.real("dist", 1.0);
    if (!(dist > 0.0)) throw Error("dist must be > 0");
    return two_point_family(agents(p, 3), alpha_of(p, 0.5), eps, dist);
  }
  if (family == "prop43") {
    p.restrict_to({"n", "alpha"});
    return two_point_family(agents(p, 3), alpha_of(p, 0.5), 0.0, 1.0);
  }
  if (family == "stretch_flip") {
    p.restrict_to({"eps", "alpha"});
    const double eps = p.real("eps", 0.01);
    if (!(eps > 0.0 && eps < 1.0)) throw Error("eps must be in (0,1)");
    GameSpec spec;
    spec.alpha = alpha_of(p, 0.75);
    spec.weights = uniform_weights(4);
    spec.weights[0] = {0.0, (1.0 - eps) / 2.0, eps, (1.0 - eps) / 2.0};
    spec.metric = Metric::uniform({"0", "1"});
    spec.space = StrategySpace::enumerated(spec.metric, {"0", "1"});
    spec.aggregation = AggregationKind::frechet_median;
    spec.preferred = {Point(std::size_t{0}), Point(std::size_t{0}), Point(std::size_t{1}),
                      Point(std::size_t{1})};
    return spec;
  }
  if (family == "random") return random_family(p);
  if (family == "k_approval_random") return approval_family(p);
  throw Error("unknown family '" + family + "'");
}

PreferenceGame generate_instance(const std::string& family, const FamilyParams& params) {
  return PreferenceGame(generate_spec(family, params));
}

std::pair<State, State> stretch_flip_pair() {
  return {State({0, 0, 1, 1}), State({0, 0, 0, 1})};
}

}  // namespace prefgame
