#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace prefgame;

namespace {

const char* kMinimal = R"({
  "alpha": 0.5,
  "weights": [[0, 1], [1, 0]],
  "space": {"kind": "enumerated", "labels": ["a", "b"]},
  "aggregation": "frechet_median",
  "preferred": ["a", "b"]
})";

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  s.replace(s.find(from), from.size(), to);
  return s;
}

}  // namespace

TEST_CASE("parse a minimal file") {
  const auto g = parse_game_file(kMinimal);
  CHECK(g.n() == 2);
  CHECK(g.metric().kind() == MetricKind::uniform);
  CHECK(g.space().names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("located errors") {
  SUBCASE("alpha out of range") {
    try {
      parse_game_file(with("\"alpha\": 0.5", "\"alpha\": 1.2"));
      FAIL("expected an error");
    } catch (const GameFileError& e) {
      CHECK(std::string(e.what()).find("alpha out of [0,1]") != std::string::npos);
      CHECK(e.field() == "alpha");
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("unknown label") {
    try {
      parse_game_file(with("[\"a\", \"b\"]\n", "[\"a\", \"q\"]\n"));
      FAIL("expected an error");
    } catch (const GameFileError& e) {
      CHECK(e.field() == "preferred[1]");
      CHECK(e.line() == 6);
    }
  }
  SUBCASE("unknown field") {
    CHECK_THROWS_AS(parse_game_file(with("\"alpha\"", "\"beta\": 1, \"alpha\"")), GameFileError);
  }
  SUBCASE("malformed JSON") {
    try {
      parse_game_file("{\n\"alpha\": ,\n}");
      FAIL("expected an error");
    } catch (const GameFileError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("approval vector with the wrong sum") {
    const std::string text = R"({
  "alpha": 0.75,
  "weights": [[0, 1], [1, 0]],
  "space": {"kind": "k_approval", "m": 4, "k": 2},
  "aggregation": "frechet_median",
  "preferred": [[0.5, 0.5, 0.5, 0.5], [0.5, 0.5, 0.5, 0.0]]
})";
    try {
      parse_game_file(text);
      FAIL("expected an error");
    } catch (const GameFileError& e) {
      CHECK(std::string(e.what()).find("agent 2") != std::string::npos);
      CHECK(e.field() == "preferred[1]");
    }
  }
}

TEST_CASE("emit and parse round trip") {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"prop42", "n=3,eps=0.01"},
      {"prop43", "n=4,alpha=0.3"},
      {"stretch_flip", "eps=0.01"},
      {"random", "seed=4,n=3,z=3,metric=table,preferred=mixed"},
      {"random", "seed=5,n=3,z=4,metric=uniform,preferred=out,aggregation=frechet_mean"},
      {"k_approval_random", "seed=6,n=3,m=3,k=1"},
  };
  for (const auto& [family, params] : cases) {
    CAPTURE(family);
    const auto g = generate_instance(family, FamilyParams::parse(params));
    const std::string text = emit_game(g);
    const auto back = parse_game_file(text);
    CHECK(emit_game(back) == text);
    const auto a = emit_report(g, analyze(g), ReportFormat::json);
    const auto b = emit_report(back, analyze(back), ReportFormat::json);
    CHECK(a == b);
    CHECK(canonical_json(a) == a);
  }
}

TEST_CASE("generators validate and classify") {
  CHECK(classify_restriction(generate_instance("prop42", FamilyParams::parse("n=3"))).kind ==
        RestrictionClass::restricted);
  CHECK(classify_restriction(generate_instance("prop43", FamilyParams::parse("n=3"))).kind ==
        RestrictionClass::unrestricted);
  CHECK_THROWS(generate_spec("prop42", FamilyParams::parse("eps=0")));
  CHECK_THROWS(generate_spec("prop42", FamilyParams::parse("n=3,bogus=1")));
  CHECK_THROWS(generate_spec("random", FamilyParams::parse("n=3")));
  CHECK_THROWS(generate_spec("nonesuch", FamilyParams{}));
  CHECK_THROWS(FamilyParams::parse("n3"));
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    CHECK(validate_game(generate_spec("random", testing::random_params(seed, 4, 3, 0.5, "table", "mixed"))).ok());
    CHECK(validate_game(generate_spec("k_approval_random", testing::approval_params(seed, 4, 4, 2, 0.6))).ok());
  }
  const auto a = emit_game(generate_instance("random", testing::random_params(9, 4, 3, 0.5, "table", "mixed")));
  const auto b = emit_game(generate_instance("random", testing::random_params(9, 4, 3, 0.5, "table", "mixed")));
  CHECK(a == b);
}

TEST_CASE("report serialization") {
  SUBCASE("infinite PoA") {
    const auto g = generate_instance("prop43", FamilyParams::parse("n=3,alpha=0.5"));
    const auto doc = nlohmann::json::parse(emit_report(g, analyze(g), ReportFormat::json));
    CHECK(doc["poa"]["sum"]["value"] == "inf");
    CHECK(doc["poa"]["max"]["value"] == "inf");
  }
  SUBCASE("state ids") {
    const auto g = generate_instance("prop42", FamilyParams::parse("n=3,eps=0.01"));
    const auto doc = nlohmann::json::parse(emit_report(g, analyze(g), ReportFormat::json));
    for (const auto& e : doc["enumeration"]["equilibria"]) {
      const auto id = e["id"].get<std::uint64_t>();
      CHECK(g.state_label(State::from_id(id, 3, 2)) == e["label"].get<std::string>());
    }
  }
  SUBCASE("csv rows have six columns") {
    const auto g = generate_instance("stretch_flip", FamilyParams::parse("eps=0.01"));
    const auto csv = emit_report(g, analyze(g), ReportFormat::csv);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "claim,hypotheses,lhs,rhs,slack,verdict");
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      int cols = 1;
      bool quoted = false;
      for (char c : line) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) ++cols;
      }
      CHECK(cols == 6);
    }
    CHECK(rows > 5);
  }
}

TEST_CASE("dynamics and certificate emitters") {
  const auto g = generate_instance("k_approval_random", testing::approval_params(2, 3, 2, 1, 0.5));
  const auto out = run_dynamics(g, g.truthful_state(), Schedule::round_robin(), 1000);
  const auto doc = nlohmann::json::parse(emit_dynamics(g, out));
  CHECK(doc["outcome"] == to_string(out.kind));
  CHECK(doc["digest"].get<std::string>().size() == 16);

  CertificateOptions opts;
  opts.grid = 11;
  const auto vb = voting_boundary(ApprovalSpec{3, 1}, 0.75, opts);
  const auto v = nlohmann::json::parse(emit_voting_boundary(vb, ReportFormat::json));
  CHECK(v["source"] == "certificate");
  CHECK(v["rows"].size() == 6);
  const auto table = emit_voting_boundary(vb, ReportFormat::csv);
  CHECK(std::count(table.begin(), table.end(), '\n') == 7);
}
