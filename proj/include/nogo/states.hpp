#pragma once

// Bipartite pure and mixed states, Born-rule probabilities, Schmidt data and
// the perfect-correlation partner construction for maximally entangled states.

#include <cstdint>
#include <vector>

#include "nogo/linalg.hpp"
#include "nogo/random.hpp"

namespace nogo {

/// Unit-norm ket on H_A (x) H_B, amplitude index a * dim_b + b.
class PureState {
public:
  static constexpr double kNormTolerance = 1e-12;

  PureState(Dims dims, ComplexVector amplitudes);

  /// Normalizes before validating; rejects the zero vector.
  static PureState normalized(Dims dims, ComplexVector amplitudes);

  [[nodiscard]] Dims dims() const { return dims_; }
  [[nodiscard]] const ComplexVector& amplitudes() const { return amps_; }
  /// Amplitudes reshaped into a dim_a x dim_b matrix.
  [[nodiscard]] ComplexMatrix amplitude_matrix() const;
  [[nodiscard]] ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }

private:
  Dims dims_;
  ComplexVector amps_;
};

/// Biorthogonal form sum_i beta_i |psi_i>|phi_i>, beta descending and positive.
struct SchmidtData {
  RealVector coefficients;
  ComplexMatrix left;  // columns psi_i on H_A
  ComplexMatrix right; // columns phi_i on H_B

  [[nodiscard]] std::size_t rank() const { return static_cast<std::size_t>(coefficients.size()); }
  [[nodiscard]] ComplexVector reconstruct() const;
};

/// Positive semidefinite unit-trace operator on a bipartite space.
class DensityOperator {
public:
  static constexpr double kTolerance = 1e-10;

  DensityOperator(Dims dims, const ComplexMatrix& m);
  explicit DensityOperator(const PureState& psi);

  [[nodiscard]] Dims dims() const { return dims_; }
  [[nodiscard]] const ComplexMatrix& matrix() const { return h_.matrix(); }
  [[nodiscard]] const HermitianMatrix& hermitian() const { return h_; }

private:
  Dims dims_;
  HermitianMatrix h_;
};

/// (1/sqrt n) sum_i |i>|i>.
PureState max_entangled(std::size_t n);

/// (|01> - |10>) / sqrt 2.
PureState singlet();

PureState product_state(const ComplexVector& a, const ComplexVector& b);

/// sum_i c_i |i>|i> with the given (normalized) coefficients, n = c.size().
PureState schmidt_form_state(const std::vector<double>& coefficients);

SchmidtData schmidt_decompose(const PureState& s);

/// True when all Schmidt coefficients are within tol of 1/sqrt(n) and the
/// Schmidt rank equals n = dim_a = dim_b.
bool is_maximally_entangled(const PureState& s, double tol = 1e-10);

/// Tr(rho P (x) Q), clamped onto [0, 1] only when within 1e-12 of an end.
double born_joint(const DensityOperator& rho, const Projector& p, const Projector& q);
double born_marginal_a(const DensityOperator& rho, const Projector& p);
double born_marginal_b(const DensityOperator& rho, const Projector& q);

/// For P = |x><x| with x = sum_i c_i psi_i, returns |y><y| with
/// y = sum_i conj(c_i) phi_i. P and the result are perfectly correlated on psi.
Projector partner_projection(const PureState& psi, const Projector& p);

/// Haar-random rank-1 projector; deterministic in (dim, seed).
Projector random_rank1_projector(std::size_t dim, std::uint64_t seed);
Projector random_rank1_projector(std::size_t dim, Rng& rng);

} // namespace nogo
