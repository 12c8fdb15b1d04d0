#include "nogo/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace nogo {

void require_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ValidationError("matrix has a non-finite entry");
    }
  }
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("Hermitian matrix must be square");
  }
  require_finite(m);
  const ComplexMatrix adj = m.adjoint();
  if (max_abs(m - adj) > kTolerance) {
    throw ValidationError("matrix is not Hermitian (max |M - M^dagger| = " +
                          std::to_string(max_abs(m - adj)) + ")");
  }
  m_ = (m + adj) / 2.0;
}

Projector::Projector(const ComplexMatrix& m, std::size_t rank) : h_(m), rank_(rank) {
  const ComplexMatrix& p = h_.matrix();
  if (max_abs(p * p - p) > kTolerance) {
    throw ValidationError("matrix is not idempotent");
  }
  if (std::abs(h_.trace() - static_cast<double>(rank)) > kTolerance) {
    throw ValidationError("projector trace does not match declared rank " +
                          std::to_string(rank));
  }
}

Projector Projector::from_ket(const ComplexVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("cannot build a projector from a zero or non-finite ket");
  }
  const ComplexVector u = v / norm;
  return Projector(u * u.adjoint(), 1);
}

Projector Projector::basis(std::size_t dim, std::size_t i) {
  if (i >= dim) {
    throw DimensionError("basis index out of range");
  }
  ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return from_ket(e);
}

Projector Projector::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return Projector(ComplexMatrix::Identity(d, d), dim);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hs_inner: dimension mismatch");
  }
  // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  Complex acc{0.0, 0.0};
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    acc += std::conj(a.data()[k]) * b.data()[k];
  }
  return acc;
}

double hs_norm(const ComplexMatrix& a) { return std::sqrt(hs_inner(a, a).real()); }

EigenDecomposition eig_hermitian(const HermitianMatrix& m) {
  const Eigen::MatrixXcd dense = m.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("Hermitian eigensolver did not converge");
  }
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    auto col = out.vectors.col(k);
    const double peak = col.cwiseAbs().maxCoeff();
    Eigen::Index lead = 0;
    while (std::abs(col(lead)) < peak - 1e-12) {
      ++lead;
    }
    const Complex phase = col(lead) / std::abs(col(lead));
    col /= phase;
  }
  return out;
}

double min_eigenvalue(const HermitianMatrix& m) {
  const Eigen::MatrixXcd dense = m.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues()(0);
}

namespace {

void require_bipartite(const ComplexMatrix& m, Dims dims, const char* what) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  if (dims.a == 0 || dims.b == 0 || m.rows() != n || m.cols() != n) {
    throw DimensionError(std::string(what) + ": matrix is not " + std::to_string(dims.a) +
                         "x" + std::to_string(dims.b) + " bipartite");
  }
}

} // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Side traced) {
  require_bipartite(m, dims, "partial_trace");
  const auto da = static_cast<Eigen::Index>(dims.a);
  const auto db = static_cast<Eigen::Index>(dims.b);

  if (traced == Side::B) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index k = 0; k < db; ++k)
    for (Eigen::Index l = 0; l < db; ++l)
      for (Eigen::Index i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims, Side side) {
  require_bipartite(m, dims, "partial_transpose");
  const auto da = static_cast<Eigen::Index>(dims.a);
  const auto db = static_cast<Eigen::Index>(dims.b);

  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index k = 0; k < db; ++k)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index l = 0; l < db; ++l) {
          if (side == Side::B) {
            out(i * db + k, j * db + l) = m(i * db + l, j * db + k);
          } else {
            out(i * db + k, j * db + l) = m(j * db + k, i * db + l);
          }
        }
  return out;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

} // namespace nogo
