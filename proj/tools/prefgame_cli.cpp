#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prefgame/io.hpp"
#include "prefgame/random.hpp"

using namespace prefgame;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

std::size_t strategy_index(const PreferenceGame& g, const std::string& label) {
  const auto& names = g.space().names();
  for (std::size_t z = 0; z < names.size(); ++z)
    if (names[z] == label) return z;
  throw Error("unknown strategy '" + label + "'");
}

State initial_state(const PreferenceGame& g, const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "truthful") return g.truthful_state();
  if (kind == "consensus") return State::consensus(g.n(), strategy_index(g, arg));
  if (kind == "random") {
    Rng rng(std::stoull(arg));
    std::vector<std::size_t> z(g.n());
    for (auto& v : z) v = uniform_index(rng, g.space_size());
    return State(std::move(z));
  }
  if (kind == "explicit") {
    // Labels separated by ';' or whitespace.
    std::vector<std::size_t> z;
    std::string item;
    std::stringstream ss(arg);
    while (std::getline(ss, item, ';')) {
      std::stringstream words(item);
      std::string w;
      while (words >> w) z.push_back(strategy_index(g, w));
    }
    if (z.size() != g.n()) throw Error("explicit state needs " + std::to_string(g.n()) + " labels");
    return State(std::move(z));
  }
  throw Error("--init must be consensus:<label>, truthful, random:<seed> or explicit:<l1;l2;...>");
}

AnalysisOptions analysis_options(unsigned workers, std::uint64_t budget) {
  AnalysisOptions o;
  o.enumeration.workers = workers;
  if (budget) o.enumeration.budget = budget;
  return o;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference games with local aggregation"};
  app.require_subcommand(1);

  std::string file, format = "json", objective = "both", init = "truthful",
                    schedule = "round-robin", family, params, output, vb_format = "json";
  unsigned workers = 0;
  std::uint64_t budget = 0;
  std::size_t max_steps = 100000, m = 0, k = 0, grid = 0;
  double alpha = 0.75;

  auto* cmd_validate = app.add_subcommand("validate", "Check a game file");
  cmd_validate->add_option("file", file, "Game file")->required();

  auto* cmd_analyze = app.add_subcommand("analyze", "Enumerate and report");
  cmd_analyze->add_option("file", file, "Game file")->required();
  cmd_analyze->add_option("--objective", objective)->check(CLI::IsMember({"sum", "max", "both"}));
  cmd_analyze->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  cmd_analyze->add_option("--workers", workers, "Threads (0 = all cores)");
  cmd_analyze->add_option("--budget", budget, "Largest |Z|^n to enumerate");

  auto* cmd_verify = app.add_subcommand("verify-bounds", "Bound verdicts as CSV or JSON");
  cmd_verify->add_option("file", file, "Game file")->required();
  cmd_verify->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  cmd_verify->add_option("--workers", workers);
  cmd_verify->add_option("--budget", budget);

  auto* cmd_dynamics = app.add_subcommand("dynamics", "Best-response dynamics");
  cmd_dynamics->add_option("file", file, "Game file")->required();
  cmd_dynamics->add_option("--init", init, "consensus:<label> | truthful | random:<seed> | explicit:<l1;l2;...>");
  cmd_dynamics->add_option("--schedule", schedule,
                       "round-robin | fixed-permutation:<i,j,...> | seeded-random:<seed>");
  cmd_dynamics->add_option("--max-steps", max_steps, "Activation budget");

  auto* cmd_generate = app.add_subcommand("generate", "Write a generated game file");
  cmd_generate->add_option("--family", family)->required();
  cmd_generate->add_option("--params", params, "key=value,...");
  cmd_generate->add_option("--output,-o", output, "Destination (default stdout)");

  auto* cmd_voting = app.add_subcommand("voting-boundary", "Boundary certificate for k-approval");
  cmd_voting->add_option("--m", m)->required();
  cmd_voting->add_option("--k", k)->required();
  cmd_voting->add_option("--alpha", alpha)->required();
  cmd_voting->add_option("--grid", grid, "Grid points per axis (0 = off)");
  cmd_voting->add_option("--game", file, "Also measure the boundary over this game's equilibria");
  cmd_voting->add_option("--format", vb_format)->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*cmd_validate) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw GameFileError("(file)", 0, "cannot open '" + file + "'");
      std::ostringstream text;
      text << in.rdbuf();
      const PreferenceGame g = parse_game_file(text.str());
      const auto& v = g.validation();
      std::cout << "valid: n=" << g.n() << " |Z|=" << g.space_size()
                << " restriction=" << to_string(classify_restriction(g).kind)
                << " exact_on_z=" << (v.exact_on_z ? "yes" : "no")
                << " exact_on_universe=" << (v.exact_on_universe ? "yes" : "no")
                << " min_rho_z=" << v.z_metric.min_rho << '\n';
      return kOk;
    }

    if (*cmd_analyze || *cmd_verify) {
      const PreferenceGame g = load_game_file(file);
      const AnalysisReport report = analyze(g, analysis_options(workers, budget));
      const ReportFormat fmt = format == "csv" ? ReportFormat::csv : ReportFormat::json;
      if (*cmd_verify) {
        if (fmt == ReportFormat::csv) {
          std::cout << emit_verdicts_csv(report.verdicts);
        } else {
          auto doc = nlohmann::ordered_json::parse(emit_report(g, report, fmt));
          std::cout << doc["verdicts"].dump(2) << '\n';
        }
      } else if (fmt == ReportFormat::json && objective != "both") {
        auto doc = nlohmann::ordered_json::parse(emit_report(g, report, fmt));
        const std::string drop = objective == "sum" ? "max" : "sum";
        doc["poa"].erase(drop);
        doc["enumeration"]["optima"].erase(drop);
        doc["tau"].erase(drop == "sum" ? "O_SUM" : "O_MAX");
        std::cout << doc.dump(2) << '\n';
      } else {
        std::cout << emit_report(g, report, fmt);
      }
      return report.any_failure() ? kViolation : kOk;
    }

    if (*cmd_dynamics) {
      const PreferenceGame g = load_game_file(file);
      const State start = initial_state(g, init);
      const auto outcome = run_dynamics(g, start, parse_schedule(schedule, g.n()), max_steps);
      std::cout << emit_dynamics(g, outcome);
      return kOk;
    }

    if (*cmd_generate) {
      const GameSpec spec = generate_spec(family, FamilyParams::parse(params));
      write_output(emit_game(PreferenceGame(spec)), output);
      return kOk;
    }

    if (*cmd_voting) {
      CertificateOptions opts;
      opts.grid = grid;
      VotingBoundary vb;
      if (!file.empty()) {
        const PreferenceGame g = load_game_file(file);
        const auto& a = g.space().approval();
        if (!a || a->m != m || a->k != k || g.alpha() != alpha) {
          throw Error("--game must be a k-approval game matching --m, --k and --alpha");
        }
        vb = voting_boundary(g, enumerate_equilibria(g), opts);
      } else {
        vb = voting_boundary(ApprovalSpec{m, k}, alpha, opts);
      }
      std::cout << emit_voting_boundary(vb, vb_format == "csv" ? ReportFormat::csv
                                                               : ReportFormat::json);
      return vb.certificate_ok ? kOk : kViolation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
