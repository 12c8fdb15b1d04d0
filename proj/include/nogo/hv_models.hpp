#pragma once

// Finite hidden-variable models of product measurements and verifiers for
// outcome independence (OI), parameter independence (PI), conditional
// parameter independence (CPI), quantum reproduction, triviality, and
// marginal / joint non-contextuality.

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nogo/leggett.hpp"
#include "nogo/linalg.hpp"
#include "nogo/states.hpp"

namespace nogo {

/// A complete projective measurement on one factor. The label is the
/// experimenter's setting; distinct labels are distinct contexts even when
/// the projector families coincide.
struct MeasurementContext {
  static constexpr double kTolerance = 1e-10;

  std::vector<Projector> outcomes;
  std::size_t focus = 0;
  std::uint32_t label = 0;

  MeasurementContext() = default;
  MeasurementContext(std::vector<Projector> outcomes, std::size_t focus, std::uint32_t label);

  /// Rank-1 outcomes from the columns of a unitary.
  static MeasurementContext from_basis(const ComplexMatrix& unitary, std::uint32_t label,
                                       std::size_t focus = 0);

  [[nodiscard]] std::size_t size() const { return outcomes.size(); }
  [[nodiscard]] std::size_t dim() const { return outcomes.empty() ? 0 : outcomes.front().dim(); }
};

/// Contexts on both sides and the (alice, bob) index pairs to evaluate.
struct Scenario {
  std::vector<MeasurementContext> alice;
  std::vector<MeasurementContext> bob;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  static Scenario all_pairs(std::vector<MeasurementContext> alice,
                            std::vector<MeasurementContext> bob);
};

/// Bases on C^n: computational, two rotations sharing a computational vector
/// with it, and `random_bases` Haar-random bases. For n = 2 the shared-vector
/// rotations are replaced by the x basis, y basis and the computational basis
/// with reversed outcome order.
std::vector<MeasurementContext> standard_contexts(std::size_t n, std::size_t random_bases,
                                                  std::uint64_t seed);

/// Qubit context measuring spin along a Bloch direction (outcome 0 is +1).
MeasurementContext qubit_context(const leggett::BlochVector& direction, std::uint32_t label);

/// Bloch vector of the outcome-0 projector of a two-outcome qubit context.
leggett::BlochVector bloch_direction(const MeasurementContext& ctx);

/// p_lambda(P, Q) for P in ctx_a and Q in ctx_b; finite hidden-variable space.
class HVModel {
public:
  virtual ~HVModel() = default;

  [[nodiscard]] virtual const DensityOperator& state() const = 0;
  [[nodiscard]] virtual const std::vector<double>& weights() const = 0;
  /// Outcome-pair probabilities, rows indexed by ctx_a outcomes.
  [[nodiscard]] virtual Eigen::MatrixXd joint(std::size_t lambda, const MeasurementContext& a,
                                              const MeasurementContext& b) const = 0;
  [[nodiscard]] virtual std::string family() const = 0;

  [[nodiscard]] std::size_t hidden_count() const { return weights().size(); }
};

/// Throws ValidationError unless weights are non-negative and sum to 1.
void validate_weights(const std::vector<double>& weights);

/// Every hidden state reproduces the Born rule.
class QuantumTrivialModel final : public HVModel {
public:
  explicit QuantumTrivialModel(DensityOperator rho, std::size_t hidden_count = 1);

  const DensityOperator& state() const override { return rho_; }
  const std::vector<double>& weights() const override { return weights_; }
  Eigen::MatrixXd joint(std::size_t lambda, const MeasurementContext& a,
                        const MeasurementContext& b) const override;
  std::string family() const override { return "trivial"; }

private:
  DensityOperator rho_;
  std::vector<double> weights_;
};

/// Leggett family on two qubits with a chosen correlation function; models
/// the singlet.
class LeggettModel final : public HVModel {
public:
  LeggettModel(std::vector<leggett::LeggettLambda> lambdas, std::vector<double> weights,
               leggett::CorrelationFn correlation, std::string family = "leggett");

  /// Fibonacci grid with nu = -mu, uniform weights.
  static LeggettModel on_grid(std::size_t points, double eta, leggett::CorrelationFn correlation,
                              std::uint64_t seed = 0);

  const DensityOperator& state() const override { return rho_; }
  const std::vector<double>& weights() const override { return weights_; }
  Eigen::MatrixXd joint(std::size_t lambda, const MeasurementContext& a,
                        const MeasurementContext& b) const override;
  std::string family() const override { return family_; }
  [[nodiscard]] const std::vector<leggett::LeggettLambda>& lambdas() const { return lambdas_; }

private:
  DensityOperator rho_;
  std::vector<leggett::LeggettLambda> lambdas_;
  std::vector<double> weights_;
  leggett::CorrelationFn correlation_;
  std::string family_;
};

/// Flat distribution, except that Alice's outcome-0 marginal rises by epsilon
/// (outcome 1 falls by epsilon) whenever Bob's context label is nonzero.
/// Outcome independent; violates PI by exactly epsilon.
class PlantedSignallingModel final : public HVModel {
public:
  PlantedSignallingModel(Dims dims, double epsilon);

  const DensityOperator& state() const override { return rho_; }
  const std::vector<double>& weights() const override { return weights_; }
  Eigen::MatrixXd joint(std::size_t lambda, const MeasurementContext& a,
                        const MeasurementContext& b) const override;
  std::string family() const override { return "planted-signalling"; }

private:
  Dims dims_;
  double epsilon_;
  DensityOperator rho_;
  std::vector<double> weights_;
};

/// Flat marginals; the joint gains +epsilon on (0,0), (1,1) and -epsilon on
/// (0,1), (1,0) whenever Bob's context label is nonzero. Passes PI, fails CPI.
class PlantedContextualJointModel final : public HVModel {
public:
  PlantedContextualJointModel(Dims dims, double epsilon);

  const DensityOperator& state() const override { return rho_; }
  const std::vector<double>& weights() const override { return weights_; }
  Eigen::MatrixXd joint(std::size_t lambda, const MeasurementContext& a,
                        const MeasurementContext& b) const override;
  std::string family() const override { return "planted-contextual-joint"; }

private:
  Dims dims_;
  double epsilon_;
  DensityOperator rho_;
  std::vector<double> weights_;
};

/// Explicit table keyed by (lambda, alice label, bob label).
class TabularModel final : public HVModel {
public:
  TabularModel(DensityOperator rho, std::vector<double> weights, std::size_t alice_labels,
               std::size_t bob_labels);

  void set(std::size_t lambda, std::uint32_t alice_label, std::uint32_t bob_label,
           Eigen::MatrixXd probabilities);

  const DensityOperator& state() const override { return rho_; }
  const std::vector<double>& weights() const override { return weights_; }
  Eigen::MatrixXd joint(std::size_t lambda, const MeasurementContext& a,
                        const MeasurementContext& b) const override;
  std::string family() const override { return "tabular"; }

private:
  [[nodiscard]] std::size_t slot(std::size_t lambda, std::uint32_t a, std::uint32_t b) const;

  DensityOperator rho_;
  std::vector<double> weights_;
  std::size_t alice_labels_;
  std::size_t bob_labels_;
  std::vector<Eigen::MatrixXd> table_;
};

enum class Condition {
  OI,
  PI,
  CPI,
  Reproduction,
  Triviality,
  MarginalNC,
  JointNC,
};

std::string condition_name(Condition c);

struct Witness {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t lambda = kNone;
  std::size_t pair = kNone;       // index into Scenario::pairs
  std::size_t other_pair = kNone; // second pair of a comparison, if any
  std::size_t outcome_a = kNone;
  std::size_t outcome_b = kNone;
};

struct ConditionReport {
  Condition condition = Condition::OI;
  double violation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  Witness witness;
  std::size_t comparisons = 0;
  std::size_t skipped = 0;
};

ConditionReport check_oi(const HVModel& m, const Scenario& s, double tol);
/// Throws InconclusiveCheck when some context has fewer than two far-side
/// partners.
ConditionReport check_pi(const HVModel& m, const Scenario& s, double tol);
/// Compares p(P|Q) across far contexts that share Q; tuples with
/// p(Q) < cond_floor are skipped. Throws InconclusiveCheck when nothing is
/// left to compare.
ConditionReport check_cpi(const HVModel& m, const Scenario& s, double tol,
                          double cond_floor = 1e-8);
ConditionReport check_reproduction(const HVModel& m, const Scenario& s, double tol);
ConditionReport check_triviality(const HVModel& m, const Scenario& s, double tol);
ConditionReport check_marginal_noncontextuality(const HVModel& m, const Scenario& s, double tol);
ConditionReport check_joint_noncontextuality(const HVModel& m, const Scenario& s, double tol);

} // namespace nogo
