// End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero exit
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "nogo/hv_models.hpp"
#include "nogo/influence.hpp"
#include "nogo/leggett.hpp"
#include "nogo/nogo_engine.hpp"
#include "nogo/states.hpp"
#include "support.hpp"

using namespace nogo;
namespace lg = nogo::leggett;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int failures = 0;

void criterion(int id, const std::string& title, double time_limit_s,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.require(elapsed < time_limit_s, "runtime " + fmt(elapsed) + " s over limit " +
                                          fmt(time_limit_s) + " s");
  if (!out.passed) ++failures;
  std::printf("[%s] criterion %d: %s (%s; %.2f s)\n", out.passed ? "PASS" : "FAIL", id,
              title.c_str(), out.detail.c_str(), elapsed);
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------

Outcome perfect_correlations() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t n : {2u, 3u, 4u}) {
    const PureState psi = max_entangled(n);
    const DensityOperator rho(psi);
    Rng rng = make_rng(1000 + n);
    for (int s = 0; s < 1000; ++s) {
      const Projector p = random_rank1_projector(n, rng);
      const Projector q = partner_projection(psi, p);
      const double pp = oracle::born(rho.matrix(), p.matrix(),
                                     ComplexMatrix::Identity(static_cast<Eigen::Index>(n),
                                                             static_cast<Eigen::Index>(n)));
      const double dm = std::abs(born_marginal_a(rho, p) - 1.0 / static_cast<double>(n));
      const double dj = std::abs(born_joint(rho, p, q) - born_marginal_a(rho, p));
      const double doracle = std::abs(oracle::born(rho.matrix(), p.matrix(), q.matrix()) - pp);
      worst = std::max({worst, dm, dj, doracle});
    }
  }
  o.require(worst <= 1e-10, "deviation " + fmt(worst));
  o.note("max deviation " + fmt(worst));
  return o;
}

Outcome lemma1() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t n : {2u, 3u}) {
    const PureState psi = max_entangled(n);
    const Lemma1Report r = verify_lemma1(psi, 1000, 7 + n);
    o.require(r.passed && r.skipped == 0, "verify_lemma1 failed for n=" + std::to_string(n));
    worst = std::max(worst, r.max_ratio);
    // independent recomputation of the image spectrum
    Rng rng = make_rng(70 + n);
    for (int s = 0; s < 1000; ++s) {
      const ComplexMatrix q = random_rank1_projector(n, rng).matrix();
      const ComplexMatrix img = oracle::phi_of_state(psi.amplitude_matrix(), q);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(img)};
      const auto& ev = es.eigenvalues();
      worst = std::max(worst, ev(ev.size() - 2) / img.trace().real());
    }
  }
  o.require(worst <= 1e-10, "second eigenvalue ratio " + fmt(worst));
  o.note("max second-eigenvalue ratio " + fmt(worst));
  return o;
}

Outcome lemma3() {
  Outcome o;
  for (std::size_t n : {2u, 3u, 4u}) {
    const PureState psi = max_entangled(n);
    double defect = 0.0;
    const double expected = oracle::hs_factor_brute_force(psi.amplitude_matrix(), &defect);
    const Lemma3Report r = verify_lemma3(psi, 500, 30 + n);
    o.require(defect <= 1e-12, "oracle gram not scalar for n=" + std::to_string(n));
    o.require(std::abs(r.factor - expected) <= 1e-10,
              "factor " + fmt(r.factor) + " vs oracle " + fmt(expected));
    o.require(r.max_deviation <= 1e-10, "dispersion " + fmt(r.max_deviation));
    o.note("n=" + std::to_string(n) + " factor " + fmt(r.factor));
  }
  const Lemma3Report c = verify_lemma3(schmidt_form_state({std::sqrt(0.8), std::sqrt(0.2)}), 500, 39);
  o.require(c.max_deviation > 1e-3, "control dispersion " + fmt(c.max_deviation));
  o.note("control dispersion " + fmt(c.max_deviation));
  return o;
}

Outcome reconstruction() {
  Outcome o;
  Rng rng = make_rng(400);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const ComplexMatrix lam = oracle::random_unit_trace_hermitian(9, rng);
    const LambdaOperator rec = reconstruct_lambda(
        [&lam](const Projector& p, const Projector& q) {
          return oracle::born(lam, p.matrix(), q.matrix());
        },
        3, 400 + static_cast<std::uint64_t>(t));
    worst = std::max(worst, hs_norm(rec.matrix() - lam));
  }
  o.require(worst <= 1e-8, "HS error " + fmt(worst));
  o.note("max HS error " + fmt(worst));
  return o;
}

Outcome choi_example() {
  Outcome o;
  const ComplexMatrix pt = partial_transpose(DensityOperator(singlet()).matrix(), {2, 2});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(pt)};
  const double direct = es.eigenvalues().minCoeff();
  const double lib = min_eigenvalue(HermitianMatrix(pt));
  o.require(std::abs(direct + 0.5) <= 1e-12 && std::abs(lib + 0.5) <= 1e-12,
            "min eigenvalue " + fmt(lib));
  const double product_min = min_product_expectation(LambdaOperator({2, 2}, pt), 100000, 5);
  o.require(product_min >= -1e-12, "product minimum " + fmt(product_min));
  o.note("min eigenvalue " + fmt(lib) + ", product minimum " + fmt(product_min));
  return o;
}

Outcome leggett_inequality() {
  Outcome o;
  const double q = lg::quantum_lhs(lg::DirectionTriple::standard(0.2));
  const double b = lg::leggett_bound(0.2);
  o.require(std::abs(q - 1.990008) <= 1e-6, "quantum_lhs " + fmt(q));
  o.require(std::abs(b - 1.933444) <= 1e-6, "bound " + fmt(b));
  const double star = lg::violation_region().phi_star;
  const double ref = oracle::leggett_crossing();
  o.require(std::abs(star - ref) <= 1e-10, "phi* " + fmt(star) + " vs " + fmt(ref));
  for (int k = 1; k <= 20; ++k) {
    const double below = star * k / 21.0;
    const double above = star + (oracle::kPi - star) * k / 21.0;
    o.require(lg::quantum_lhs(lg::DirectionTriple::standard(below)) > lg::leggett_bound(below),
              "no violation at " + fmt(below));
    o.require(lg::quantum_lhs(lg::DirectionTriple::standard(above)) < lg::leggett_bound(above),
              "violation at " + fmt(above));
  }
  o.note("phi* " + fmt(star));
  return o;
}

Outcome lp_soundness() {
  Outcome o;
  const std::vector<std::size_t> grids{128, 512, 2048};
  for (double phi : {0.3, 0.8, 1.2, 2.0}) {
    const lg::DirectionTriple d = lg::DirectionTriple::standard(phi);
    std::vector<double> medians;
    for (std::size_t g : grids) {
      std::vector<double> slack;
      for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const lg::LpResult r = lg::max_lhs_lp(d, lg::fibonacci_sphere(g, seed), 1.0);
        o.require(r.value <= lg::leggett_bound(phi) + 1e-9,
                  "value above bound at phi=" + fmt(phi));
        slack.push_back(lg::leggett_bound(phi) - r.value);
      }
      medians.push_back(oracle::median(slack));
    }
    for (std::size_t i = 1; i < medians.size(); ++i) {
      o.require(medians[i] <= medians[i - 1], "median slack increased at phi=" + fmt(phi));
    }
    o.note("phi=" + fmt(phi) + " slack " + fmt(medians[0]) + ">" + fmt(medians[1]) + ">" +
           fmt(medians[2]));
  }
  return o;
}

Outcome checker_logic() {
  Outcome o;
  const double tol = 1e-10;

  // (a) trivial quantum model
  {
    const QuantumTrivialModel m(DensityOperator(singlet()), 2);
    const Scenario s =
        Scenario::all_pairs(standard_contexts(2, 2, 81), standard_contexts(2, 2, 82));
    const std::vector<ConditionReport> six{
        check_pi(m, s, tol),          check_cpi(m, s, tol),
        check_reproduction(m, s, tol), check_triviality(m, s, tol),
        check_marginal_noncontextuality(m, s, tol), check_joint_noncontextuality(m, s, tol)};
    for (const auto& r : six) {
      o.require(r.passed, "(a) trivial model fails " + condition_name(r.condition));
    }
  }

  // (b) Leggett family
  {
    const LeggettModel m = LeggettModel::on_grid(
        128, 1.0,
        [](const lg::LeggettLambda& l, const lg::BlochVector& a, const lg::BlochVector& b) {
          return lg::product_correlation(l, a, b);
        },
        3);
    const Scenario s =
        Scenario::all_pairs(standard_contexts(2, 2, 83), standard_contexts(2, 2, 84));
    const ConditionReport pi = check_pi(m, s, tol);
    const ConditionReport cpi = check_cpi(m, s, tol);
    const ConditionReport triv = check_triviality(m, s, tol);
    // zero up to rounding in the marginal sums
    const double zero = 1e-14;
    o.require(pi.passed && pi.violation <= zero, "(b) PI violation " + fmt(pi.violation));
    o.require(cpi.passed && cpi.violation <= zero, "(b) CPI violation " + fmt(cpi.violation));
    o.note("(b) PI " + fmt(pi.violation) + ", CPI " + fmt(cpi.violation) + ", triviality " +
           fmt(triv.violation));
    o.require(!triv.passed, "(b) Leggett model is trivial");
  }

  // (c) PI <=> CPI on outcome-independent models
  {
    Rng rng = make_rng(85);
    std::size_t pi_pass = 0, pi_fail = 0, mismatches = 0;
    for (int t = 0; t < 200; ++t) {
      const Scenario s = Scenario::all_pairs(models::contexts_sharing_e0(3, 3, rng),
                                             models::contexts_sharing_e0(3, 3, rng));
      const TabularModel m = models::random_oi_model(s, 3, 0.5, rng);
      o.require(check_oi(m, s, 1e-12).passed, "(c) generated model is not OI");
      const bool pi = check_pi(m, s, tol).passed;
      const bool cpi = check_cpi(m, s, tol).passed;
      (pi ? pi_pass : pi_fail) += 1;
      if (pi != cpi) ++mismatches;
    }
    o.require(mismatches == 0, "(c) " + std::to_string(mismatches) + " PI/CPI mismatches");
    o.require(pi_pass > 0 && pi_fail > 0, "(c) population lacks one verdict class");
    o.note("(c) " + std::to_string(pi_pass) + " PI-pass, " + std::to_string(pi_fail) +
           " PI-fail");
  }

  // (d) MARGINAL-NC and CPI imply JOINT-NC
  {
    Rng rng = make_rng(86);
    std::size_t premise = 0, premise_failed = 0, generated = 0, bad = 0;
    while (premise < 200 && generated < 2000) {
      const std::size_t n = 2 + generated % 2;
      const int kind = static_cast<int>(generated % 4);
      const std::uint64_t seed = 860 + generated;
      ++generated;
      const Scenario s = Scenario::all_pairs(standard_contexts(n, 1, seed),
                                             standard_contexts(n, 1, seed + 1));
      const auto m = models::random_prop2_model(n, kind, rng);
      if (!check_marginal_noncontextuality(*m, s, tol).passed || !check_cpi(*m, s, tol).passed) {
        ++premise_failed;
        continue;
      }
      ++premise;
      if (!check_joint_noncontextuality(*m, s, tol).passed) ++bad;
    }
    o.require(premise == 200, "(d) only " + std::to_string(premise) + " premise models");
    o.require(bad == 0, "(d) " + std::to_string(bad) + " JOINT-NC failures");
    o.require(premise_failed > 0, "(d) generator never violates the premise");
    o.note("(d) " + std::to_string(premise) + " premise models, " +
           std::to_string(premise_failed) + " rejected");
  }
  return o;
}

Outcome nogo_trend() {
  Outcome o;
  const std::vector<std::size_t> ladder{200, 1000, 5000, 20000};
  const std::size_t seeds = 32;
  const DensityOperator entangled(max_entangled(3));
  const DensityOperator mixed = models::mixed_state(3);
  std::vector<double> ent_med, mix_med;
  for (std::size_t n : ladder) {
    std::vector<double> e, m;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      const DecompositionProblem pe{entangled, 0.5, n, seed, std::nullopt};
      const DecompositionProblem pm{mixed, 0.5, n, seed, std::nullopt};
      const FeasibilityCertificate ce = max_perturbation(pe);
      const FeasibilityCertificate cm = max_perturbation(pm);
      o.require(recheck_certificate(pe, ce) >= -1e-12, "certificate recheck failed");
      e.push_back(ce.t_max);
      m.push_back(cm.t_max);
    }
    ent_med.push_back(oracle::median(e));
    mix_med.push_back(oracle::median(m));
  }
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    o.require(ent_med[i] <= ent_med[i - 1], "entangled median increased at N=" +
                                                std::to_string(ladder[i]));
  }
  const double ratio = mix_med.back() / ent_med.back();
  o.require(ratio >= 10.0, "contrast ratio " + fmt(ratio));
  o.note("entangled medians " + fmt(ent_med[0]) + ", " + fmt(ent_med[1]) + ", " +
         fmt(ent_med[2]) + ", " + fmt(ent_med[3]) + "; contrast " + fmt(ratio));
  return o;
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = cli_runner::scratch("determinism");
  cli_runner::write_file(dir / "model.txt", "[model]\nfamily = leggett\n[params]\ngrid = 32\n");
  const std::vector<std::pair<std::string, std::string>> runs{
      {"leggett-scan", "leggett-scan --seed 3 --lp --grid 24"},
      {"verify-lemmas", "verify-lemmas --seed 3 --n 3"},
      {"nogo", "nogo --seed 3 --n 2 --samples 200,1000 --seeds 8 --lp --lp-samples 100"},
      {"model-check", "model-check --seed 3 --model " + (dir / "model.txt").string()},
  };
  for (const auto& [name, args] : runs) {
    std::string outputs[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / (name + "-" + std::to_string(k) + ".out");
      codes[k] = cli_runner::run(args + " --out " + out.string());
      outputs[k] = cli_runner::read_file(out);
    }
    o.require(codes[0] == codes[1], name + " exit codes differ");
    o.require(!outputs[0].empty(), name + " produced no output");
    o.require(outputs[0] == outputs[1], name + " outputs differ");
  }
  fs::remove_all(dir);
  o.note(std::to_string(runs.size()) + " subcommands compared");
  return o;
}

} // namespace

int main() {
  criterion(1, "perfect correlations with the partner projection", 5, perfect_correlations);
  criterion(2, "rank-one images of rank-one projections", 5, lemma1);
  criterion(3, "HS conformal factor against the brute-force oracle", 10, lemma3);
  criterion(4, "reconstruction round trip from product probabilities", 30, reconstruction);
  criterion(5, "partially transposed singlet is product-positive", 10, choi_example);
  criterion(6, "Leggett inequality values and violation region", 1, leggett_inequality);
  criterion(7, "LP soundness and refinement of the slack", 300, lp_soundness);
  criterion(8, "condition-checker logic", 120, checker_logic);
  criterion(9, "no-go trend of the decomposition search", 600, nogo_trend);
  criterion(10, "byte-identical CLI outputs", 120, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
