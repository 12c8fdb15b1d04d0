#include <chrono>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "nogo/errors.hpp"

namespace {

void add_common(CLI::App* sub, cli::RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Random seed (required)")->required();
  sub->add_option("--out", cfg.out, "Output file; stdout when omitted");
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of hidden-variable no-go results"};
  app.require_subcommand(1);
  cli::RunConfig cfg;

  auto* scan = app.add_subcommand("leggett-scan", "Leggett inequality vs quantum prediction over phi");
  add_common(scan, cfg);
  scan->add_option("--phi-min", cfg.phi_min, "First angle (radians)")->capture_default_str();
  scan->add_option("--phi-max", cfg.phi_max, "Last angle (radians)")->capture_default_str();
  scan->add_option("--phi-step", cfg.phi_step, "Angle step")->capture_default_str();
  scan->add_flag("--lp", cfg.lp, "Also maximize the left-hand side over discretized models");
  scan->add_option("--grid", cfg.grid, "Sphere grid points for --lp")->capture_default_str();
  scan->add_option("--eta", cfg.leggett_eta, "Marginal purity for --lp")->capture_default_str();

  auto* lemmas = app.add_subcommand("verify-lemmas", "Map-level identities for a pure state");
  add_common(lemmas, cfg);
  lemmas->add_option("--n", cfg.n, "Local dimension of the maximally entangled state")
      ->capture_default_str();
  lemmas->add_option("--state", cfg.state_path, "State file overriding --n");
  lemmas->add_option("--samples", cfg.samples, "Rank-1 samples")->capture_default_str();
  lemmas->add_option("--pairs", cfg.pairs, "Operator pairs for the HS check")
      ->capture_default_str();
  lemmas->add_option("--test-samples", cfg.test_samples, "Test projectors for constancy")
      ->capture_default_str();
  lemmas->add_option("--tol-lemma1", cfg.tol_lemma1, "Rank-one tolerance")->capture_default_str();
  lemmas->add_option("--tol-lemma3", cfg.tol_lemma3, "HS conformality tolerance")
      ->capture_default_str();
  lemmas->add_option("--tol-constancy", cfg.tol_constancy, "Constancy chain tolerance")
      ->capture_default_str();

  auto* nogo_cmd = app.add_subcommand("nogo", "Sampled convex-decomposition search");
  add_common(nogo_cmd, cfg);
  nogo_cmd->add_option("--n", cfg.n, "Local dimension")->capture_default_str();
  nogo_cmd->add_option("--samples", cfg.ladder, "Ladder of product-constraint counts")
      ->delimiter(',')
      ->capture_default_str();
  nogo_cmd->add_option("--seeds", cfg.seeds, "Seeds per ladder entry, starting at --seed")
      ->capture_default_str();
  nogo_cmd->add_option("--eta", cfg.eta, "Mixing weight")->capture_default_str();
  nogo_cmd->add_option("--contrast", cfg.contrast,
                       "Required mixed/entangled median ratio at the largest N")
      ->capture_default_str();
  nogo_cmd->add_flag("--lp", cfg.lp, "Also run the basis LP certificate");
  nogo_cmd->add_option("--lp-samples", cfg.lp_samples, "Constraint count for --lp")
      ->capture_default_str();

  auto* model = app.add_subcommand("model-check", "Run the condition checkers on a model file");
  add_common(model, cfg);
  model->add_option("--model", cfg.model_path, "Model file")->required();
  model->add_option("--random-contexts", cfg.random_contexts,
                    "Haar-random contexts per side besides the fixed ones")
      ->capture_default_str();
  model->add_option("--tol", cfg.tol_check, "Checker tolerance")->capture_default_str();
  model->add_option("--cond-floor", cfg.cond_floor, "Skip conditionals below this probability")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.resolve();
    if (cfg.command == "leggett-scan") code = cli::run_leggett_scan(cfg);
    else if (cfg.command == "verify-lemmas") code = cli::run_verify_lemmas(cfg);
    else if (cfg.command == "nogo") code = cli::run_nogo(cfg);
    else code = cli::run_model_check(cfg);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cli::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nogo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << cfg.command << ": " << (code == 0 ? "ok" : "checks failed") << " in " << secs
            << " s\n";
  return code;
}
