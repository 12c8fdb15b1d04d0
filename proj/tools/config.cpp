#include "config.hpp"

#include <cmath>

namespace cli {

namespace {

void require_positive(double v, const std::string& name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name + " must be positive");
}

void require_count(std::size_t v, const std::string& name) {
  if (v < 1) throw ConfigError(name + " must be at least 1");
}

} // namespace

void RunConfig::resolve() {
  if (format.empty()) format = command == "leggett-scan" ? "csv" : "json";
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");

  if (command == "leggett-scan") {
    require_positive(phi_step, "--phi-step");
    if (!std::isfinite(phi_min) || !std::isfinite(phi_max)) {
      throw ConfigError("phi range must be finite");
    }
    if (phi_min < 0.0 || phi_max >= 2.0 * 3.14159265358979323846) {
      throw ConfigError("phi range must lie in [0, 2 pi)");
    }
    if (!(phi_max > phi_min)) throw ConfigError("phi range is empty (need phi-max > phi-min)");
    require_count(grid, "--grid");
    if (!(leggett_eta > 0.0 && leggett_eta <= 1.0)) throw ConfigError("--eta must be in (0, 1]");
  } else if (command == "verify-lemmas") {
    if (format != "json") throw ConfigError("verify-lemmas writes json only");
    if (state_path.empty() && (n < 2 || n > 4)) throw ConfigError("--n must be 2, 3 or 4");
    require_count(samples, "--samples");
    require_count(pairs, "--pairs");
    require_count(test_samples, "--test-samples");
    require_positive(tol_lemma1, "--tol-lemma1");
    require_positive(tol_lemma3, "--tol-lemma3");
    require_positive(tol_constancy, "--tol-constancy");
  } else if (command == "nogo") {
    if (n < 2) throw ConfigError("--n must be at least 2");
    if (n > 4) throw ConfigError("--n above 4 is out of range for the sampled search");
    if (ladder.empty()) throw ConfigError("--samples ladder is empty");
    for (auto v : ladder) {
      if (v < n * n * n * n) {
        throw ConfigError("every ladder entry must be at least n^4 = " +
                          std::to_string(n * n * n * n));
      }
    }
    require_count(seeds, "--seeds");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("--eta must lie strictly inside (0, 1)");
    require_positive(contrast, "--contrast");
  } else if (command == "model-check") {
    if (format != "json") throw ConfigError("model-check writes json only");
    if (model_path.empty()) throw ConfigError("--model is required");
    require_positive(tol_check, "--tol");
    require_positive(cond_floor, "--cond-floor");
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
}

Json RunConfig::echo() const {
  Json j;
  j["command"] = command;
  j["seed"] = seed;
  j["format"] = format;
  if (command == "leggett-scan") {
    j["phi_min"] = number(phi_min);
    j["phi_max"] = number(phi_max);
    j["phi_step"] = number(phi_step);
    j["lp"] = lp;
    j["grid"] = grid;
    j["eta"] = number(leggett_eta);
  } else if (command == "verify-lemmas") {
    j["n"] = n;
    j["state"] = state_path.empty() ? "max_entangled" : state_path;
    j["samples"] = samples;
    j["pairs"] = pairs;
    j["test_samples"] = test_samples;
    j["tol_lemma1"] = number(tol_lemma1);
    j["tol_lemma3"] = number(tol_lemma3);
    j["tol_constancy"] = number(tol_constancy);
  } else if (command == "nogo") {
    j["n"] = n;
    j["eta"] = number(eta);
    j["samples"] = ladder;
    j["seeds"] = seeds;
    j["contrast"] = number(contrast);
    j["lp"] = lp;
    j["lp_samples"] = lp_samples;
  } else if (command == "model-check") {
    j["model"] = model_path;
    j["random_contexts"] = random_contexts;
    j["tol"] = number(tol_check);
    j["cond_floor"] = number(cond_floor);
  }
  return j;
}

} // namespace cli
