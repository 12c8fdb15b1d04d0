#include "nogo/random.hpp"

#include <Eigen/QR>

namespace nogo {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x6e6f676fu};
  return Rng(seq);
}

ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

ComplexVector random_ket(std::size_t dim, Rng& rng) {
  ComplexVector v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = random_ginibre(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  const Eigen::MatrixXcd g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

} // namespace nogo
