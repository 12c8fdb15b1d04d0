#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "model_file.hpp"
#include "nogo/hv_models.hpp"
#include "nogo/influence.hpp"
#include "nogo/leggett.hpp"
#include "nogo/nogo_engine.hpp"
#include "nogo/states.hpp"

namespace cli {

namespace {

constexpr int kCheckFailure = 3;

Json number_or_null(double x) { return std::isfinite(x) ? number(x) : Json(nullptr); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

std::vector<double> phi_rows(const RunConfig& cfg) {
  std::vector<double> phis;
  for (std::size_t k = 0;; ++k) {
    const double phi = cfg.phi_min + static_cast<double>(k) * cfg.phi_step;
    if (phi >= cfg.phi_max - 1e-12) break;
    phis.push_back(phi);
  }
  phis.push_back(cfg.phi_max);
  return phis;
}

} // namespace

int run_leggett_scan(const RunConfig& cfg) {
  using namespace nogo::leggett;
  const auto phis = phi_rows(cfg);
  std::vector<BlochVector> grid;
  if (cfg.lp) grid = fibonacci_sphere(cfg.grid, cfg.seed);

  std::vector<std::string> header{"phi", "quantum_lhs", "leggett_bound", "violation"};
  if (cfg.lp) {
    for (const char* h : {"lp_value", "grid_points", "slack"}) header.emplace_back(h);
  }
  CsvTable table(header);
  Json rows = Json::array();

  for (double phi : phis) {
    const auto triple = DirectionTriple::standard(phi);
    const double lhs = quantum_lhs(triple);
    const double bound = leggett_bound(phi);
    const bool violated = lhs > bound;
    std::vector<double> values{phi, lhs, bound, violated ? 1.0 : 0.0};
    Json row;
    row["phi"] = number(phi);
    row["quantum_lhs"] = number(lhs);
    row["leggett_bound"] = number(bound);
    row["violation"] = violated;
    if (cfg.lp) {
      LpResult lp;
      try {
        lp = max_lhs_lp(triple, grid, cfg.leggett_eta);
      } catch (const nogo::InfeasibleError& e) {
        throw ConfigError(std::string("grid too coarse for flat marginals: ") + e.what());
      }
      values.push_back(lp.value);
      values.push_back(static_cast<double>(lp.grid_points));
      values.push_back(lp.slack);
      row["lp_value"] = number(lp.value);
      row["grid_points"] = lp.grid_points;
      row["slack"] = number(lp.slack);
    }
    table.add_row(values);
    rows.push_back(row);
  }

  if (cfg.format == "csv") {
    write_output(cfg.out, table.str());
  } else {
    Json report;
    report["config"] = cfg.echo();
    report["phi_star"] = number(violation_region().phi_star);
    report["rows"] = rows;
    write_output(cfg.out, dump_json(report));
  }
  return 0;
}

int run_verify_lemmas(const RunConfig& cfg) {
  using namespace nogo;
  std::optional<KeyValueFile> state_file;
  if (!cfg.state_path.empty()) state_file = KeyValueFile::load(cfg.state_path);
  const PureState psi = state_file ? state_from_file(*state_file) : max_entangled(cfg.n);
  const std::size_t n = psi.dims().a;
  if (psi.dims().a != psi.dims().b) throw ConfigError("state must have equal factor dims");
  const bool maximal = is_maximally_entangled(psi);

  Json report;
  report["config"] = cfg.echo();
  Json state;
  state["source"] = state_file ? "file" : "max_entangled";
  if (state_file) state["file"] = state_file->to_json();
  state["n"] = n;
  const SchmidtData sd = schmidt_decompose(psi);
  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i) {
    coeffs.push_back(number(sd.coefficients(i)));
  }
  state["schmidt_coefficients"] = coeffs;
  state["maximally_entangled"] = maximal;
  report["state"] = state;

  bool passed = true;

  if (maximal) {
    // Perfect correlations with the partner projection.
    const DensityOperator rho(psi);
    Rng rng = make_rng(cfg.seed, 11);
    double marginal_dev = 0.0;
    double joint_dev = 0.0;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const Projector p = random_rank1_projector(n, rng);
      const Projector q = partner_projection(psi, p);
      const double pp = born_marginal_a(rho, p);
      marginal_dev = std::max(marginal_dev, std::abs(pp - 1.0 / static_cast<double>(n)));
      joint_dev = std::max(joint_dev, std::abs(born_joint(rho, p, q) - pp));
    }
    Json pc;
    pc["samples"] = cfg.samples;
    pc["max_marginal_deviation"] = number(marginal_dev);
    pc["max_joint_deviation"] = number(joint_dev);
    pc["tolerance"] = number(cfg.tol_lemma1);
    pc["passed"] = marginal_dev <= cfg.tol_lemma1 && joint_dev <= cfg.tol_lemma1;
    passed = passed && pc["passed"].get<bool>();
    report["perfect_correlation"] = pc;
  }

  const Lemma1Report l1 = verify_lemma1(psi, cfg.samples, cfg.seed, cfg.tol_lemma1);
  Json j1;
  j1["samples"] = l1.samples;
  j1["skipped"] = l1.skipped;
  j1["max_ratio"] = number(l1.max_ratio);
  j1["tolerance"] = number(l1.tolerance);
  j1["passed"] = l1.passed;
  report["lemma1"] = j1;
  passed = passed && l1.passed;

  const Lemma3Report l3 = verify_lemma3(psi, cfg.pairs, cfg.seed, cfg.tol_lemma3);
  Json j3;
  j3["pairs"] = l3.pairs;
  j3["hs_factor"] = number(l3.factor);
  if (maximal) j3["expected_factor"] = number(1.0 / static_cast<double>(n * n));
  j3["max_deviation"] = number(l3.max_deviation);
  j3["tolerance"] = number(l3.tolerance);
  j3["is_hs_conformal"] = l3.is_hs_conformal;
  bool l3_ok = l3.is_hs_conformal;
  if (maximal) {
    const double expected = 1.0 / static_cast<double>(n * n);
    l3_ok = l3_ok && std::abs(l3.factor - expected) <= cfg.tol_lemma3;
  }
  j3["passed"] = l3_ok;
  report["lemma3"] = j3;
  passed = passed && l3_ok;

  const BasisImageReport bi = basis_image_conditioning(psi, matrix_unit_basis(n));
  Json jb;
  jb["basis"] = "matrix_units";
  jb["gram_condition"] = number_or_null(bi.gram_condition);
  jb["input_condition"] = number_or_null(bi.input_condition);
  jb["smallest_singular"] = number(bi.smallest_singular);
  jb["is_basis"] = bi.is_basis;
  report["basis_image"] = jb;
  passed = passed && bi.is_basis;

  Json jc;
  if (maximal) {
    const DensityOperator rho(psi);
    const LambdaOperator lam = reconstruct_lambda(
        [&rho](const Projector& p, const Projector& q) { return born_joint(rho, p, q); }, n,
        cfg.seed);
    const ConstancyReport cr = verify_constancy_chain(psi, lam, informationally_complete_set(n),
                                                      cfg.test_samples, cfg.seed,
                                                      cfg.tol_constancy);
    jc["lambda"] = "reconstructed_from_born_rule";
    jc["basis_size"] = cr.basis_c.size();
    jc["test_samples"] = cr.test_profile.records.size();
    jc["test_skipped"] = cr.test_profile.skipped;
    jc["mean_c"] = number(cr.mean_c);
    jc["max_dispersion"] = number(cr.max_dispersion);
    jc["max_residual"] = number(cr.max_residual);
    jc["reconstruction_error"] = number(cr.reconstruction_error);
    jc["distance_to_state"] = number(cr.distance_to_state);
    jc["tolerance"] = number(cfg.tol_constancy);
    const bool ok = cr.c_is_one && cr.reconstruction_error <= cfg.tol_constancy &&
                    cr.distance_to_state <= cfg.tol_constancy;
    jc["passed"] = ok;
    passed = passed && ok;
  } else {
    jc["skipped"] = "state is not maximally entangled";
  }
  report["constancy"] = jc;
  report["passed"] = passed;

  write_output(cfg.out, dump_json(report));
  return passed ? 0 : kCheckFailure;
}

int run_nogo(const RunConfig& cfg) {
  using namespace nogo;
  const std::size_t n = cfg.n;
  const Dims dims{n, n};
  const auto total = static_cast<Eigen::Index>(n * n);
  struct Target {
    std::string name;
    DensityOperator rho;
  };
  const std::vector<Target> targets{
      {"max_entangled", DensityOperator(max_entangled(n))},
      {"maximally_mixed", DensityOperator(
                              dims, ComplexMatrix::Identity(total, total) /
                                        static_cast<double>(total))},
  };

  Json certificates = Json::array();
  std::vector<std::vector<double>> medians(targets.size());
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    for (std::size_t samples : cfg.ladder) {
      std::vector<double> ts;
      for (std::size_t k = 0; k < cfg.seeds; ++k) {
        const std::uint64_t seed = cfg.seed + k;
        DecompositionProblem p{targets[ti].rho, cfg.eta, samples, seed, std::nullopt};
        FeasibilityCertificate c;
        try {
          c = max_perturbation(p);
        } catch (const ValidationError& e) {
          throw ConfigError(e.what());
        }
        ts.push_back(c.t_max);
        Json j;
        j["state"] = targets[ti].name;
        j["n"] = n;
        j["eta"] = number(cfg.eta);
        j["N"] = samples;
        j["seed"] = seed;
        j["t_max"] = number(c.t_max);
        j["min_residual"] = number(c.min_residual);
        certificates.push_back(j);
      }
      medians[ti].push_back(median(ts));
    }
  }

  bool non_increasing = true;
  for (std::size_t i = 1; i < cfg.ladder.size(); ++i) {
    non_increasing = non_increasing && medians[0][i] <= medians[0][i - 1];
  }
  const double ratio = medians[1].back() / medians[0].back();
  const bool contrast_ok = ratio >= cfg.contrast;

  CsvTable table({"N", "median_t_max_entangled", "median_t_max_mixed", "ratio"});
  Json rows = Json::array();
  for (std::size_t i = 0; i < cfg.ladder.size(); ++i) {
    const double r = medians[1][i] / medians[0][i];
    table.add_row({static_cast<double>(cfg.ladder[i]), medians[0][i], medians[1][i], r});
    Json row;
    row["N"] = cfg.ladder[i];
    row["median_t_max_entangled"] = number(medians[0][i]);
    row["median_t_max_mixed"] = number(medians[1][i]);
    row["ratio"] = number_or_null(r);
    rows.push_back(row);
  }

  if (cfg.format == "csv") {
    write_output(cfg.out, table.str());
  } else {
    Json report;
    report["config"] = cfg.echo();
    report["table"] = rows;
    Json checks;
    checks["entangled_median_non_increasing"] = non_increasing;
    checks["contrast_ratio"] = number_or_null(ratio);
    checks["contrast_passed"] = contrast_ok;
    report["checks"] = checks;
    if (cfg.lp) {
      Json lp = Json::array();
      for (const auto& t : targets) {
        DecompositionProblem p{t.rho, cfg.eta, cfg.lp_samples, cfg.seed, std::nullopt};
        BasisLpCertificate c;
        try {
          c = max_perturbation_lp(p);
        } catch (const ValidationError& e) {
          throw ConfigError(e.what());
        }
        Json j;
        j["state"] = t.name;
        j["N"] = cfg.lp_samples;
        j["seed"] = cfg.seed;
        j["axes"] = c.axis_max.size();
        j["best_t"] = number(c.best);
        j["best_axis"] = c.best_axis;
        j["min_axis_t"] = number(*std::min_element(c.axis_max.begin(), c.axis_max.end()));
        lp.push_back(j);
      }
      report["basis_lp"] = lp;
    }
    report["certificates"] = certificates;
    write_output(cfg.out, dump_json(report));
  }
  return non_increasing && contrast_ok ? 0 : kCheckFailure;
}

int run_model_check(const RunConfig& cfg) {
  using namespace nogo;
  const KeyValueFile file = KeyValueFile::load(cfg.model_path);
  LoadedModel loaded = model_from_file(file, cfg.seed);
  const Scenario scenario = Scenario::all_pairs(
      standard_contexts(loaded.local_dim, cfg.random_contexts, cfg.seed),
      standard_contexts(loaded.local_dim, cfg.random_contexts, cfg.seed + 1));

  const HVModel& m = *loaded.model;
  const double tol = cfg.tol_check;
  const std::vector<std::pair<Condition, std::function<ConditionReport()>>> checks{
      {Condition::OI, [&] { return check_oi(m, scenario, tol); }},
      {Condition::PI, [&] { return check_pi(m, scenario, tol); }},
      {Condition::CPI, [&] { return check_cpi(m, scenario, tol, cfg.cond_floor); }},
      {Condition::Reproduction, [&] { return check_reproduction(m, scenario, tol); }},
      {Condition::Triviality, [&] { return check_triviality(m, scenario, tol); }},
      {Condition::MarginalNC, [&] { return check_marginal_noncontextuality(m, scenario, tol); }},
      {Condition::JointNC, [&] { return check_joint_noncontextuality(m, scenario, tol); }},
  };

  const auto pair_json = [&](std::size_t idx) -> Json {
    const auto [a, b] = scenario.pairs.at(idx);
    Json j;
    j["alice_context"] = scenario.alice[a].label;
    j["bob_context"] = scenario.bob[b].label;
    return j;
  };

  Json results = Json::array();
  bool passed = true;
  for (const auto& [cond, run] : checks) {
    Json j;
    j["condition"] = condition_name(cond);
    // OI is reported but not part of the verdict: entangled states violate
    // it in every model that reproduces them.
    j["in_verdict"] = cond != Condition::OI;
    try {
      const ConditionReport r = run();
      j["status"] = r.passed ? "pass" : "fail";
      j["violation"] = number(r.violation);
      j["tolerance"] = number(r.tolerance);
      j["comparisons"] = r.comparisons;
      j["skipped"] = r.skipped;
      const Witness& w = r.witness;
      if (w.lambda != Witness::kNone || w.pair != Witness::kNone) {
        Json wj;
        if (w.lambda != Witness::kNone) wj["lambda"] = w.lambda;
        if (w.pair != Witness::kNone) wj["contexts"] = pair_json(w.pair);
        if (w.other_pair != Witness::kNone) wj["other_contexts"] = pair_json(w.other_pair);
        if (w.outcome_a != Witness::kNone) wj["outcome_a"] = w.outcome_a;
        if (w.outcome_b != Witness::kNone) wj["outcome_b"] = w.outcome_b;
        j["witness"] = wj;
      }
      if (cond != Condition::OI) passed = passed && r.passed;
    } catch (const InconclusiveCheck& e) {
      j["status"] = "inconclusive";
      j["reason"] = e.what();
    }
    results.push_back(j);
  }

  Json report;
  report["config"] = cfg.echo();
  report["model"] = file.to_json();
  report["family"] = m.family();
  report["hidden_count"] = m.hidden_count();
  Json ctx;
  ctx["alice"] = scenario.alice.size();
  ctx["bob"] = scenario.bob.size();
  ctx["pairs"] = scenario.pairs.size();
  report["contexts"] = ctx;
  report["checks"] = results;
  report["passed"] = passed;
  write_output(cfg.out, dump_json(report));
  return passed ? 0 : kCheckFailure;
}

} // namespace cli
