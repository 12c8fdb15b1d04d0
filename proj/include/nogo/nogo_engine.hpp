#pragma once

// Numerical study of convex decompositions rho = eta L1 + (1 - eta) L2 into
// operators that are non-negative on product projections. Perturbations are
// parameterized as
//
//   L1 = rho + (1 - eta) t D,   L2 = rho - eta t D,   Tr D = 0,
//
// so the convex identity holds exactly and feasibility is linear in t.

#include <cstdint>
#include <optional>
#include <vector>

#include "nogo/influence.hpp"
#include "nogo/linalg.hpp"
#include "nogo/states.hpp"

namespace nogo {

struct DecompositionProblem {
  DensityOperator target;
  double eta = 0.5;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  /// Traceless Hermitian direction; a seeded random unit-HS-norm direction
  /// is drawn when empty.
  std::optional<ComplexMatrix> direction;

  /// Throws ValidationError unless 0 < eta < 1 and samples >= dim^2.
  void validate() const;
};

struct FeasibilityCertificate {
  double t_max = 0.0;
  HermitianMatrix direction;
  double min_residual = 0.0; // min over samples of both constraint values at t_max
  std::size_t samples = 0;
};

/// Sampled product constraints <x (x) y| A |x (x) y> for one problem; the
/// sample sequence for a seed is prefix-stable in `samples`.
struct ProductConstraints {
  std::vector<double> target;    // Tr(rho P (x) Q)
  std::vector<ComplexVector> kets; // x (x) y
};

ProductConstraints sample_product_constraints(const DensityOperator& rho, std::size_t samples,
                                              std::uint64_t seed);

/// Seeded random traceless Hermitian matrix with unit HS norm.
ComplexMatrix random_traceless_direction(std::size_t dim, std::uint64_t seed);

/// Largest t keeping both L1 and L2 non-negative on every sampled product
/// projection, solved exactly from the sampled linear forms. Throws
/// ValidationError("degenerate sample") when no constraint binds.
FeasibilityCertificate max_perturbation(const DecompositionProblem& p);

/// Independent re-check: min over the problem's samples of the two
/// constraint values at the certificate's t.
double recheck_certificate(const DecompositionProblem& p, const FeasibilityCertificate& c);

/// Orthonormal (HS) basis of traceless Hermitian matrices of size dim.
std::vector<ComplexMatrix> traceless_hermitian_basis(std::size_t dim);

struct BasisLpCertificate {
  std::vector<double> axis_max; // max t along +B_k, then -B_k, for each k
  double best = 0.0;
  std::size_t best_axis = 0;
  std::size_t samples = 0;
};

/// LP variant: for every signed axis of a traceless Hermitian basis, the
/// largest coefficient admissible under all sampled constraints.
BasisLpCertificate max_perturbation_lp(const DecompositionProblem& p);

struct ConstancyReport {
  std::vector<double> basis_c;
  ProportionalityReport basis_profile;
  ProportionalityReport test_profile;
  double max_dispersion = 0.0; // over basis and test c values
  double mean_c = 0.0;
  double max_residual = 0.0;
  bool proportional = false;   // max_residual <= tol
  bool c_is_one = false;       // proportional and |c - 1| <= tol everywhere
  double reconstruction_error = 0.0; // ||Lambda_rec - Lambda||_HS
  double distance_to_state = 0.0;    // ||Lambda - |Psi><Psi| ||_HS
};

/// Fits c(Q_i) on the basis and c(Q) on seeded test projectors, rebuilds
/// Lambda from the basis equalities Phi_L(Q_i) = c(Q_i) Phi_Psi(Q_i), and
/// reports how far Lambda sits from the pure state.
ConstancyReport verify_constancy_chain(const PureState& psi, const LambdaOperator& lam,
                                       const std::vector<Projector>& basis,
                                       std::size_t test_samples, std::uint64_t seed,
                                       double tol = 1e-8);

struct BasisImageReport {
  double gram_condition = 0.0;  // of the images under Phi_Psi
  double input_condition = 0.0; // of the inputs
  double smallest_singular = 0.0;
  bool is_basis = false;
};

BasisImageReport basis_image_conditioning(const PureState& psi,
                                          const std::vector<ComplexMatrix>& basis);

/// Matrix units E_ij of size n, an HS-orthonormal basis.
std::vector<ComplexMatrix> matrix_unit_basis(std::size_t n);

} // namespace nogo
