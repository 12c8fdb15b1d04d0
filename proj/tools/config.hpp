#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "format.hpp"

namespace cli {

struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::string out;
  std::string format; // csv | json; empty selects the command's default

  // leggett-scan
  double phi_min = 0.0;
  double phi_max = 3.14159265358979323846;
  double phi_step = 0.05;
  bool lp = false;
  std::size_t grid = 128;
  double leggett_eta = 1.0;

  // verify-lemmas
  std::size_t n = 3;
  std::size_t samples = 1000;
  std::size_t pairs = 500;
  std::size_t test_samples = 200;
  std::string state_path;
  double tol_lemma1 = 1e-10;
  double tol_lemma3 = 1e-8;
  double tol_constancy = 1e-8;

  // nogo
  std::vector<std::size_t> ladder{200, 1000, 5000, 20000};
  std::size_t seeds = 32;
  double eta = 0.5;
  double contrast = 10.0;
  std::size_t lp_samples = 200;

  // model-check
  std::string model_path;
  std::size_t random_contexts = 2;
  double tol_check = 1e-10;
  double cond_floor = 1e-8;

  /// Fills the per-command format default and checks ranges; throws
  /// ConfigError.
  void resolve();

  /// The resolved settings relevant to the command, defaults included.
  [[nodiscard]] Json echo() const;
};

} // namespace cli
