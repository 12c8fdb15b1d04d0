#include "nogo/states.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace nogo {

PureState::PureState(Dims dims, ComplexVector amplitudes)
    : dims_(dims), amps_(std::move(amplitudes)) {
  if (dims_.a == 0 || dims_.b == 0 ||
      static_cast<std::size_t>(amps_.size()) != dims_.total()) {
    throw DimensionError("pure state: amplitude count does not match factor dims");
  }
  require_finite(amps_);
  if (std::abs(amps_.norm() - 1.0) > kNormTolerance) {
    throw ValidationError("pure state is not normalized (norm " +
                          std::to_string(amps_.norm()) + ")");
  }
}

PureState PureState::normalized(Dims dims, ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) {
    throw ValidationError("pure state: zero amplitude vector");
  }
  return PureState(dims, amplitudes / norm);
}

ComplexMatrix PureState::amplitude_matrix() const {
  const auto da = static_cast<Eigen::Index>(dims_.a);
  const auto db = static_cast<Eigen::Index>(dims_.b);
  ComplexMatrix m(da, db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j) m(i, j) = amps_(i * db + j);
  return m;
}

ComplexVector SchmidtData::reconstruct() const {
  const Eigen::Index da = left.rows();
  const Eigen::Index db = right.rows();
  ComplexVector out = ComplexVector::Zero(da * db);
  for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < db; ++j)
        out(i * db + j) += coefficients(k) * left(i, k) * right(j, k);
  }
  return out;
}

DensityOperator::DensityOperator(Dims dims, const ComplexMatrix& m) : dims_(dims), h_(m) {
  if (h_.dim() != dims.total()) {
    throw DimensionError("density operator: size does not match factor dims");
  }
  if (std::abs(h_.trace() - 1.0) > kTolerance) {
    throw ValidationError("density operator must have unit trace");
  }
  if (min_eigenvalue(h_) < -kTolerance) {
    throw ValidationError("density operator must be positive semidefinite");
  }
}

DensityOperator::DensityOperator(const PureState& psi)
    : DensityOperator(psi.dims(), psi.projector()) {}

PureState max_entangled(std::size_t n) {
  if (n < 2) {
    throw ValidationError("max_entangled requires n >= 2");
  }
  const auto d = static_cast<Eigen::Index>(n);
  ComplexVector amps = ComplexVector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) amps(i * d + i) = 1.0 / std::sqrt(static_cast<double>(n));
  return PureState::normalized({n, n}, amps);
}

PureState singlet() {
  ComplexVector amps = ComplexVector::Zero(4);
  amps(1) = 1.0;
  amps(2) = -1.0;
  return PureState::normalized({2, 2}, amps);
}

PureState product_state(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector amps(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) amps(i * b.size() + j) = a(i) * b(j);
  return PureState::normalized({static_cast<std::size_t>(a.size()),
                                static_cast<std::size_t>(b.size())},
                               amps);
}

PureState schmidt_form_state(const std::vector<double>& coefficients) {
  const auto n = static_cast<Eigen::Index>(coefficients.size());
  if (n < 1) {
    throw ValidationError("schmidt_form_state: no coefficients");
  }
  ComplexVector amps = ComplexVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (coefficients[static_cast<std::size_t>(i)] < 0.0) {
      throw ValidationError("Schmidt coefficients must be non-negative");
    }
    amps(i * n + i) = coefficients[static_cast<std::size_t>(i)];
  }
  return PureState::normalized({coefficients.size(), coefficients.size()}, amps);
}

SchmidtData schmidt_decompose(const PureState& s) {
  const Eigen::MatrixXcd m = s.amplitude_matrix();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();

  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-12) ++rank;

  // M = U S V^dagger  =>  Psi = sum_k s_k u_k (x) conj(v_k)
  SchmidtData out;
  out.coefficients = sv.head(rank);
  out.left = svd.matrixU().leftCols(rank);
  out.right = svd.matrixV().leftCols(rank).conjugate();
  return out;
}

bool is_maximally_entangled(const PureState& s, double tol) {
  if (s.dims().a != s.dims().b) return false;
  const SchmidtData sd = schmidt_decompose(s);
  if (sd.rank() != s.dims().a) return false;
  const double flat = 1.0 / std::sqrt(static_cast<double>(s.dims().a));
  return (sd.coefficients.array() - flat).abs().maxCoeff() <= tol;
}

namespace {

double clamp_probability(double p) {
  if (p < -1e-10 || p > 1.0 + 1e-10) {
    throw ValidationError("Born probability " + std::to_string(p) + " is outside [0, 1]");
  }
  if (p < 0.0 && p >= -1e-12) return 0.0;
  if (p > 1.0 && p <= 1.0 + 1e-12) return 1.0;
  return p;
}

} // namespace

double born_joint(const DensityOperator& rho, const Projector& p, const Projector& q) {
  if (p.dim() != rho.dims().a || q.dim() != rho.dims().b) {
    throw DimensionError("born_joint: projector dims do not match the state");
  }
  // Tr(rho P (x) Q) = <P (x) Q, rho>_HS, both Hermitian
  return clamp_probability(hs_inner(kron(p.matrix(), q.matrix()), rho.matrix()).real());
}

double born_marginal_a(const DensityOperator& rho, const Projector& p) {
  return born_joint(rho, p, Projector::identity(rho.dims().b));
}

double born_marginal_b(const DensityOperator& rho, const Projector& q) {
  return born_joint(rho, Projector::identity(rho.dims().a), q);
}

Projector partner_projection(const PureState& psi, const Projector& p) {
  if (!is_maximally_entangled(psi)) {
    throw ValidationError("partner_projection requires a maximally entangled state");
  }
  if (p.rank() != 1 || p.dim() != psi.dims().a) {
    throw ValidationError("partner_projection requires a rank-1 projector on H_A");
  }
  const SchmidtData sd = schmidt_decompose(psi);

  // x is the range of P; any unit vector in it works up to phase
  const HermitianMatrix h(p.matrix());
  const EigenDecomposition eig = eig_hermitian(h);
  const ComplexVector x = eig.vectors.col(eig.vectors.cols() - 1);

  const ComplexVector c = sd.left.adjoint() * x; // c_i = <psi_i|x>
  const ComplexVector y = sd.right * c.conjugate();
  return Projector::from_ket(y);
}

Projector random_rank1_projector(std::size_t dim, Rng& rng) {
  if (dim < 1) {
    throw ValidationError("random_rank1_projector requires dim >= 1");
  }
  return Projector::from_ket(random_ket(dim, rng));
}

Projector random_rank1_projector(std::size_t dim, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_rank1_projector(dim, rng);
}

} // namespace nogo
