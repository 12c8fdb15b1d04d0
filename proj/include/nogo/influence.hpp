#pragma once

// Influence-free operators Lambda (unit trace, self-adjoint, non-negative on
// product projections) and the maps Phi_Lambda they induce on Bob's operators:
//
//   Tr(Lambda P (x) Q) = Tr(P Phi_Lambda(Q)).

#include <cstdint>
#include <functional>
#include <vector>

#include "nogo/linalg.hpp"
#include "nogo/states.hpp"

namespace nogo {

class LambdaOperator {
public:
  static constexpr double kTraceTolerance = 1e-10;

  /// Validates self-adjointness and unit trace. Positivity on product
  /// projections is not a finite condition; see min_product_expectation.
  LambdaOperator(Dims dims, const ComplexMatrix& m);
  explicit LambdaOperator(const DensityOperator& rho);
  explicit LambdaOperator(const PureState& psi);

  [[nodiscard]] Dims dims() const { return dims_; }
  [[nodiscard]] const ComplexMatrix& matrix() const { return h_.matrix(); }
  [[nodiscard]] const HermitianMatrix& hermitian() const { return h_; }

  /// Tr(Lambda P (x) Q).
  [[nodiscard]] double expectation(const Projector& p, const Projector& q) const;

private:
  Dims dims_;
  HermitianMatrix h_;
};

/// Minimum of Tr(Lambda P (x) Q) over `samples` seeded Haar rank-1 pairs.
double min_product_expectation(const LambdaOperator& lam, std::size_t samples,
                               std::uint64_t seed);

/// Linear map from operators on H_B to operators on H_A, stored as its matrix
/// in the matrix-unit basis (row-major vectorization, orthonormal under HS).
class PhiMap {
public:
  PhiMap(Dims dims, ComplexMatrix matrix);

  [[nodiscard]] Dims dims() const { return dims_; }
  [[nodiscard]] const ComplexMatrix& matrix() const { return m_; }

  [[nodiscard]] ComplexMatrix apply(const ComplexMatrix& q) const;
  /// Tr(Phi(1)).
  [[nodiscard]] double normalization() const;

private:
  Dims dims_;
  ComplexMatrix m_;
};

ComplexVector vectorize(const ComplexMatrix& x);
ComplexMatrix unvectorize(const ComplexVector& v, std::size_t rows, std::size_t cols);

/// Phi(Q) = Tr_B(Lambda (1 (x) Q)).
PhiMap phi_from_lambda(const LambdaOperator& lam);

/// Phi(Q) = sum_ij beta_i beta_j |psi_i><psi_j| <phi_j|Q|phi_i> from the
/// Schmidt data of psi.
PhiMap phi_from_pure_state(const PureState& psi);

/// Inverse of phi_from_lambda: the operator on H_A (x) H_B whose induced
/// map is phi. Unit trace is not enforced.
ComplexMatrix operator_from_phi(const PhiMap& phi);

/// Minimum eigenvalue of Phi(Q) over seeded rank-1 Q.
double min_image_eigenvalue(const PhiMap& phi, std::size_t samples, std::uint64_t seed);

struct Lemma1Report {
  std::size_t samples = 0;
  std::size_t skipped = 0;     // Tr Phi(Q) <= zero_floor
  double max_ratio = 0.0;      // second-largest eigenvalue / trace
  double tolerance = 0.0;
  bool passed = false;
};

/// Checks that Phi maps rank-1 projections to rank <= 1 operators.
Lemma1Report verify_lemma1(const PhiMap& phi, std::size_t samples, std::uint64_t seed,
                           double tol = 1e-10, double zero_floor = 1e-8);
Lemma1Report verify_lemma1(const PureState& psi, std::size_t samples, std::uint64_t seed,
                           double tol = 1e-10, double zero_floor = 1e-8);

struct ProportionalityRecord {
  double c = 0.0;
  double residual = 0.0; // || Phi_L(Q) - c Phi_Psi(Q) ||_HS
};

struct ProportionalityReport {
  std::vector<ProportionalityRecord> records;
  std::size_t skipped = 0;
  double mean_c = 0.0;
  double max_dispersion = 0.0; // max |c - mean_c|
  double max_residual = 0.0;
  double min_c = 0.0;
};

/// Least-squares fit Phi_Lambda(Q) ~ c(Q) Phi_Psi(Q) for a fixed Q.
ProportionalityRecord fit_proportionality(const ComplexMatrix& phi_psi_q,
                                          const ComplexMatrix& phi_lam_q);

ProportionalityReport summarize_proportionality(std::vector<ProportionalityRecord> records,
                                                std::size_t skipped);

ProportionalityReport proportionality_profile(const PureState& psi, const LambdaOperator& lam,
                                              std::size_t samples, std::uint64_t seed,
                                              double zero_floor = 1e-8);

struct Lemma3Report {
  std::size_t pairs = 0;
  double factor = 0.0;        // fitted c in Tr(Phi(A^dagger) Phi(B)) = c Tr(A^dagger B)
  double max_deviation = 0.0; // over unit-HS-norm pairs
  double tolerance = 0.0;
  bool is_hs_conformal = false;
};

/// Fits one constant to Tr(Phi(A^dagger) Phi(B)) / Tr(A^dagger B) over seeded
/// random operator pairs.
Lemma3Report verify_lemma3(const PhiMap& phi, std::size_t pairs, std::uint64_t seed,
                           double tol = 1e-8);
Lemma3Report verify_lemma3(const PureState& psi, std::size_t pairs, std::uint64_t seed,
                           double tol = 1e-8);

struct ConformalDefect {
  double factor = 0.0;    // c with M^dagger M ~ c I
  double deviation = 0.0; // max |M^dagger M - c I|
};

/// Matrix-level conformality of Phi: in an HS-orthonormal basis, Phi is
/// unitary up to a factor iff M^dagger M is a multiple of the identity.
ConformalDefect conformal_defect(const PhiMap& phi);

/// The n^2 rank-1 projectors used for linear inversion: |i><i|, then for
/// each i < j the projectors onto (|i> + |j>)/sqrt2 and (|i> + i|j>)/sqrt2.
std::vector<Projector> informationally_complete_set(std::size_t n);

using ProductOracle = std::function<double(const Projector&, const Projector&)>;

/// Recovers the unique Lambda with Tr(Lambda E_a (x) E_b) = oracle(E_a, E_b)
/// on the informationally complete set, then cross-checks the oracle on
/// seeded random product pairs.
LambdaOperator reconstruct_lambda(const ProductOracle& oracle, std::size_t n,
                                  std::uint64_t check_seed = 0, std::size_t check_pairs = 16);

} // namespace nogo
