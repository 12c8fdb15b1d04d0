#pragma once

// Dense complex linear algebra on small bipartite spaces.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "nogo/errors.hpp"

namespace nogo {

using Complex = std::complex<double>;

/// Row-major dense complex matrix; the substrate for every operator and state.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

/// Factor dimensions of a bipartite space H_A (x) H_B.
struct Dims {
  std::size_t a = 0;
  std::size_t b = 0;

  [[nodiscard]] std::size_t total() const { return a * b; }
  bool operator==(const Dims&) const = default;
};

enum class Side { A, B };

/// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m);

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);

/// Self-adjoint matrix. Inputs within 1e-12 of Hermitian are accepted and
/// stored symmetrized as (M + M^dagger) / 2.
class HermitianMatrix {
public:
  static constexpr double kTolerance = 1e-12;

  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);

  [[nodiscard]] const ComplexMatrix& matrix() const { return m_; }
  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  [[nodiscard]] double trace() const { return m_.trace().real(); }

private:
  ComplexMatrix m_;
};

/// Orthogonal projector of declared rank.
class Projector {
public:
  static constexpr double kTolerance = 1e-10;

  Projector() = default;
  Projector(const ComplexMatrix& m, std::size_t rank);

  /// |v><v| / <v|v>.
  static Projector from_ket(const ComplexVector& v);
  /// |i><i| in a space of dimension dim.
  static Projector basis(std::size_t dim, std::size_t i);
  static Projector identity(std::size_t dim);

  [[nodiscard]] const ComplexMatrix& matrix() const { return h_.matrix(); }
  [[nodiscard]] std::size_t rank() const { return rank_; }
  [[nodiscard]] std::size_t dim() const { return h_.dim(); }

private:
  HermitianMatrix h_;
  std::size_t rank_ = 0;
};

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // orthonormal columns, matching values
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hilbert-Schmidt inner product Tr(A^dagger B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hilbert-Schmidt norm sqrt(Tr(A^dagger A)).
double hs_norm(const ComplexMatrix& a);

/// Eigen-decomposition with ascending eigenvalues. Each eigenvector's phase is
/// fixed so that its first component of maximal modulus is real and positive.
EigenDecomposition eig_hermitian(const HermitianMatrix& m);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const HermitianMatrix& m);

/// Traces out the factor named by `traced` of an operator on H_A (x) H_B.
ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Side traced);

/// Transposes the indices of the factor named by `side`. An involution.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims, Side side = Side::B);

/// Pauli matrices.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

} // namespace nogo
