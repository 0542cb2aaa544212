// Command-line driver for the crossing-probability laboratory.
//
// Exit codes: 0 success (and PASS/CONFIRMS verdicts), 2 configuration error,
// 3 precondition violation, 4 negative verdict, 1 anything else.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cardylab/cardylab.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string family;
  double k = 1.0;
  double delta = 0.01;
  std::vector<double> x_params;
  double p = 0.5;
  std::uint64_t n = 100000;
  std::uint64_t seed = 42;
  std::string out;
  std::string format;
  int threads = 1;
  int window_radius = 16;
};

void add_common_options(CLI::App* sub, CliOverrides& o) {
  sub->add_option("--config", o.config_path, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  sub->add_option("--family", o.family,
                  "Lattice family: Square, TriangularK, SquareNE, TriNE, TriNW, TriH");
  sub->add_option("--k", o.k, "Stretch parameter for TriangularK (k > 1/2)");
  sub->add_option("--delta", o.delta, "Mesh size");
  sub->add_option("--x", o.x_params, "Base-point parameter(s) in (0, 1); repeatable");
  sub->add_option("--p", o.p, "Site occupation probability");
  sub->add_option("--n", o.n, "Number of Monte Carlo samples");
  sub->add_option("--seed", o.seed, "RNG seed");
  sub->add_option("--out", o.out, "Output path (default: stdout)");
  sub->add_option("--format", o.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", o.threads, "Worker threads (results are identical for any count)");
  sub->add_option("--window-radius", o.window_radius, "Index window radius for lattice checks");
}

cardylab::ExperimentConfig build_config(cardylab::ExperimentKind kind, const CLI::App* sub,
                                        const CliOverrides& o) {
  cardylab::ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw cardylab::config_error("config: cannot read " + o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw cardylab::config_error(std::string("config: ") + e.what());
    }
    cfg = cardylab::config_from_json(j);
    if (j.contains("experiment") && cfg.experiment != kind) {
      throw cardylab::config_error(std::string("config: file requests experiment ") +
                                   cardylab::experiment_name(cfg.experiment) +
                                   " but the subcommand is " +
                                   cardylab::experiment_name(kind));
    }
  }
  cfg.experiment = kind;
  if (sub->count("--family")) {
    const auto fam = cardylab::family_from_name(o.family);
    if (!fam) throw cardylab::config_error("config: unknown family \"" + o.family + "\"");
    cfg.family = *fam;
  }
  if (sub->count("--k")) cfg.k = o.k;
  if (sub->count("--delta")) cfg.delta = o.delta;
  if (sub->count("--x")) cfg.x_params = o.x_params;
  if (sub->count("--p")) cfg.p = o.p;
  if (sub->count("--n")) cfg.n_samples = o.n;
  if (sub->count("--seed")) cfg.seed = o.seed;
  if (sub->count("--out")) cfg.out = o.out;
  if (sub->count("--format")) {
    cfg.format = o.format == "json" ? cardylab::OutFormat::json : cardylab::OutFormat::csv;
  }
  if (sub->count("--threads")) cfg.threads = o.threads;
  if (sub->count("--window-radius")) cfg.window_radius = o.window_radius;
  return cfg;
}

int run(cardylab::ExperimentKind kind, const CLI::App* sub, const CliOverrides& o) {
  const cardylab::ExperimentConfig cfg = build_config(kind, sub, o);
  const cardylab::ExperimentResult result = cardylab::run_experiment(cfg);
  cardylab::write_output(result, std::cout);
  // Human-readable status; kept off stdout when the payload lands there.
  std::ostream& status = result.config.out.empty() ? std::cerr : std::cout;
  for (const std::string& note : result.notes) status << note << "\n";
  if (result.verdict != cardylab::Verdict::none) {
    status << "verdict: " << cardylab::verdict_name(result.verdict) << "\n";
  }
  if (!result.config.out.empty()) {
    status << "wrote " << result.config.out << "\n";
  }
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for critical crossing probabilities"};
  app.require_subcommand(1);

  struct Entry {
    cardylab::ExperimentKind kind;
    const char* help;
    CLI::App* sub = nullptr;
    CliOverrides opts;
  };
  Entry entries[] = {
      {cardylab::ExperimentKind::VerifyCardy,
       "Check the conformal prediction on the equilateral lattice", nullptr, {}},
      {cardylab::ExperimentKind::Coupling,
       "Exact-agreement run for a lattice pair sharing randomness", nullptr, {}},
      {cardylab::ExperimentKind::Violation,
       "Test a stretched or SquareNE family against its prediction", nullptr, {}},
      {cardylab::ExperimentKind::Sweep, "Grid of estimates over (p, delta, x)", nullptr, {}},
      {cardylab::ExperimentKind::Predict,
       "Tabulate the predicted crossing function and residual", nullptr, {}},
      {cardylab::ExperimentKind::ValidateLattice,
       "Check graph requirements on an index window", nullptr, {}},
  };
  for (Entry& e : entries) {
    e.sub = app.add_subcommand(cardylab::experiment_name(e.kind), e.help);
    add_common_options(e.sub, e.opts);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (Entry& e : entries) {
      if (e.sub->parsed()) return run(e.kind, e.sub, e.opts);
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const cardylab::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cardylab::precondition_error& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
