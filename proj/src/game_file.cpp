#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "prefgame/io.hpp"

namespace prefgame {

using json = nlohmann::ordered_json;

namespace {

std::string located(const std::string& field, std::size_t line, const std::string& message) {
  std::ostringstream os;
  if (line) os << "line " << line << ", ";
  os << "field '" << field << "': " << message;
  return os.str();
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of the top-level key named by a field path
// such as "weights[0][1]" or "metric.rho".
std::size_t line_of_field(const std::string& text, const std::string& field) {
  const auto stop = field.find_first_of(".[");
  const std::string key = "\"" + field.substr(0, stop) + "\"";
  const auto pos = text.find(key);
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw GameFileError(field, line_of_field(text_, field), message);
  }

  const json& member(const json& obj, const std::string& key, const std::string& field) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(field, "missing");
    return *it;
  }

  double number(const json& v, const std::string& field) const {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }

  std::size_t count(const json& v, const std::string& field) const {
    if (!v.is_number_unsigned()) fail(field, "expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  std::string string(const json& v, const std::string& field) const {
    if (!v.is_string()) fail(field, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  std::vector<std::vector<double>> matrix(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array of rows");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(numbers(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  std::vector<std::string> strings(const json& v, const std::string& field) const {
    if (!v.is_array()) fail(field, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(string(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

 private:
  const std::string& text_;
};

MetricKind metric_kind(const Reader& r, const std::string& name) {
  if (name == "uniform") return MetricKind::uniform;
  if (name == "table") return MetricKind::table;
  if (name == "hamming") return MetricKind::hamming;
  if (name == "l2sq") return MetricKind::squared_euclidean;
  r.fail("metric.kind", "unknown metric kind '" + name + "'");
}

}  // namespace

GameFileError::GameFileError(std::string field, std::size_t line, const std::string& message)
    : Error(located(field, line, message)), field_(std::move(field)), line_(line) {}

GameSpec parse_game_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GameFileError("(document)", line_of_offset(text, e.byte ? e.byte - 1 : 0),
                        "malformed JSON");
  }
  const Reader r(text);
  if (!doc.is_object()) r.fail("(document)", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    static const std::vector<std::string> known{"alpha",  "weights",     "space",
                                                "metric", "aggregation", "preferred"};
    if (std::find(known.begin(), known.end(), key) == known.end()) r.fail(key, "unknown field");
  }

  GameSpec spec;
  spec.alpha = r.number(r.member(doc, "alpha", "alpha"), "alpha");
  spec.weights = r.matrix(r.member(doc, "weights", "weights"), "weights");

  const json& space = r.member(doc, "space", "space");
  if (!space.is_object()) r.fail("space", "expected an object");
  const std::string space_kind = r.string(r.member(space, "kind", "space.kind"), "space.kind");

  MetricDescriptor md;
  bool have_metric = doc.contains("metric");
  if (have_metric) {
    const json& m = doc["metric"];
    if (!m.is_object()) r.fail("metric", "expected an object");
    md.kind = metric_kind(r, r.string(r.member(m, "kind", "metric.kind"), "metric.kind"));
    if (m.contains("labels")) md.labels = r.strings(m["labels"], "metric.labels");
    if (m.contains("matrix")) md.matrix = r.matrix(m["matrix"], "metric.matrix");
    if (m.contains("dim")) md.dim = r.count(m["dim"], "metric.dim");
    if (m.contains("rho")) md.rho = r.number(m["rho"], "metric.rho");
    for (const auto& [key, value] : m.items()) {
      if (key != "kind" && key != "labels" && key != "matrix" && key != "dim" && key != "rho") {
        r.fail("metric." + key, "unknown field");
      }
    }
  }

  if (space_kind == "enumerated") {
    const auto labels = r.strings(r.member(space, "labels", "space.labels"), "space.labels");
    if (!have_metric) {
      md.kind = MetricKind::uniform;
      md.labels = labels;
    } else if (md.kind == MetricKind::uniform && md.labels.empty()) {
      md.labels = labels;
    }
    try {
      spec.metric = build_metric(md);
    } catch (const Error& e) {
      r.fail("metric", e.what());
    }
    try {
      spec.space = StrategySpace::enumerated(spec.metric, labels);
    } catch (const Error& e) {
      r.fail("space", e.what());
    }
  } else if (space_kind == "k_approval") {
    ApprovalSpec a;
    a.m = r.count(r.member(space, "m", "space.m"), "space.m");
    a.k = r.count(r.member(space, "k", "space.k"), "space.k");
    if (!have_metric) {
      md.kind = MetricKind::squared_euclidean;
      md.dim = a.m;
    }
    if (md.dim != a.m) r.fail("metric.dim", "must equal space.m");
    try {
      spec.metric = build_metric(md);
      spec.space = StrategySpace::k_approval(a);
    } catch (const Error& e) {
      r.fail("space", e.what());
    }
  } else {
    r.fail("space.kind", "unknown space kind '" + space_kind + "'");
  }

  const std::string agg =
      r.string(r.member(doc, "aggregation", "aggregation"), "aggregation");
  if (agg == "frechet_mean") {
    spec.aggregation = AggregationKind::frechet_mean;
  } else if (agg == "frechet_median") {
    spec.aggregation = AggregationKind::frechet_median;
  } else {
    r.fail("aggregation", "unknown aggregation '" + agg + "'");
  }

  const json& pref = r.member(doc, "preferred", "preferred");
  if (!pref.is_array()) r.fail("preferred", "expected an array");
  for (std::size_t i = 0; i < pref.size(); ++i) {
    const std::string field = "preferred[" + std::to_string(i) + "]";
    if (pref[i].is_string()) {
      const auto label = pref[i].get<std::string>();
      const auto idx = spec.metric.label_index(label);
      if (!idx) r.fail(field, "unknown label '" + label + "' for agent " + std::to_string(i + 1));
      spec.preferred.emplace_back(*idx);
    } else {
      spec.preferred.emplace_back(r.numbers(pref[i], field));
    }
  }
  return spec;
}

PreferenceGame parse_game_file(const std::string& text) {
  GameSpec spec = parse_game_spec(text);
  const auto report = validate_game(spec);
  if (!report.ok()) {
    const auto& first = report.issues.front();
    std::string message = first.message;
    if (report.issues.size() > 1) {
      message += " (and " + std::to_string(report.issues.size() - 1) + " more)";
    }
    throw GameFileError(first.location, line_of_field(text, first.location), message);
  }
  return PreferenceGame(std::move(spec));
}

PreferenceGame load_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GameFileError("(file)", 0, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_game_file(os.str());
}

std::string emit_game(const GameSpec& spec) {
  json doc;
  doc["alpha"] = spec.alpha;
  doc["weights"] = spec.weights;
  json space;
  if (const auto& a = spec.space.approval()) {
    space["kind"] = "k_approval";
    space["m"] = a->m;
    space["k"] = a->k;
  } else {
    space["kind"] = "enumerated";
    space["labels"] = spec.space.names();
  }
  doc["space"] = space;

  const auto md = spec.metric.descriptor();
  json metric;
  metric["kind"] = to_string(md.kind);
  if (spec.metric.label_based()) metric["labels"] = md.labels;
  if (md.kind == MetricKind::table) metric["matrix"] = md.matrix;
  if (!spec.metric.label_based()) metric["dim"] = md.dim;
  metric["rho"] = spec.metric.rho();
  doc["metric"] = metric;
  doc["aggregation"] = to_string(spec.aggregation);

  json pref = json::array();
  for (const auto& p : spec.preferred) {
    if (const auto* idx = std::get_if<std::size_t>(&p)) {
      pref.push_back(spec.metric.labels().at(*idx));
    } else {
      pref.push_back(std::get<Coords>(p));
    }
  }
  doc["preferred"] = pref;
  return doc.dump(2) + "\n";
}

std::string emit_game(const PreferenceGame& g) { return emit_game(g.spec()); }

std::string canonical_json(const std::string& text) { return json::parse(text).dump(2) + "\n"; }

}  // namespace prefgame
