#include "nogo/influence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "nogo/random.hpp"

namespace nogo {

LambdaOperator::LambdaOperator(Dims dims, const ComplexMatrix& m) : dims_(dims), h_(m) {
  if (h_.dim() != dims.total()) {
    throw DimensionError("Lambda: size does not match factor dims");
  }
  if (std::abs(h_.trace() - 1.0) > kTraceTolerance) {
    throw ValidationError("Lambda must have unit trace (got " + std::to_string(h_.trace()) +
                          ")");
  }
}

LambdaOperator::LambdaOperator(const DensityOperator& rho)
    : LambdaOperator(rho.dims(), rho.matrix()) {}

LambdaOperator::LambdaOperator(const PureState& psi)
    : LambdaOperator(psi.dims(), psi.projector()) {}

double LambdaOperator::expectation(const Projector& p, const Projector& q) const {
  if (p.dim() != dims_.a || q.dim() != dims_.b) {
    throw DimensionError("Lambda expectation: projector dims do not match");
  }
  return hs_inner(kron(p.matrix(), q.matrix()), h_.matrix()).real();
}

double min_product_expectation(const LambdaOperator& lam, std::size_t samples,
                               std::uint64_t seed) {
  Rng rng = make_rng(seed);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const Projector p = random_rank1_projector(lam.dims().a, rng);
    const Projector q = random_rank1_projector(lam.dims().b, rng);
    lowest = std::min(lowest, lam.expectation(p, q));
  }
  return lowest;
}

PhiMap::PhiMap(Dims dims, ComplexMatrix matrix) : dims_(dims), m_(std::move(matrix)) {
  const auto rows = static_cast<Eigen::Index>(dims.a * dims.a);
  const auto cols = static_cast<Eigen::Index>(dims.b * dims.b);
  if (m_.rows() != rows || m_.cols() != cols) {
    throw DimensionError("PhiMap: matrix shape does not match factor dims");
  }
  require_finite(m_);
}

ComplexVector vectorize(const ComplexMatrix& x) {
  // row-major storage is already the vectorization
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols) {
    throw DimensionError("unvectorize: size mismatch");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), static_cast<Eigen::Index>(rows),
                                         static_cast<Eigen::Index>(cols));
}

ComplexMatrix PhiMap::apply(const ComplexMatrix& q) const {
  if (static_cast<std::size_t>(q.rows()) != dims_.b ||
      static_cast<std::size_t>(q.cols()) != dims_.b) {
    throw DimensionError("PhiMap::apply: operator is not on H_B");
  }
  return unvectorize(m_ * vectorize(q), dims_.a, dims_.a);
}

double PhiMap::normalization() const {
  const auto db = static_cast<Eigen::Index>(dims_.b);
  return apply(ComplexMatrix::Identity(db, db)).trace().real();
}

PhiMap phi_from_lambda(const LambdaOperator& lam) {
  const auto da = static_cast<Eigen::Index>(lam.dims().a);
  const auto db = static_cast<Eigen::Index>(lam.dims().b);
  const ComplexMatrix& m = lam.matrix();

  // Phi(E_kl)_ij = Lambda_{(i,l),(j,k)}
  ComplexMatrix phi(da * da, db * db);
  for (Eigen::Index k = 0; k < db; ++k)
    for (Eigen::Index l = 0; l < db; ++l)
      for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
          phi(i * da + j, k * db + l) = m(i * db + l, j * db + k);
  return PhiMap(lam.dims(), std::move(phi));
}

ComplexMatrix operator_from_phi(const PhiMap& phi) {
  const auto da = static_cast<Eigen::Index>(phi.dims().a);
  const auto db = static_cast<Eigen::Index>(phi.dims().b);
  const ComplexMatrix& m = phi.matrix();
  ComplexMatrix lam(da * db, da * db);
  for (Eigen::Index k = 0; k < db; ++k)
    for (Eigen::Index l = 0; l < db; ++l)
      for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j) lam(i * db + l, j * db + k) = m(i * da + j, k * db + l);
  return lam;
}

PhiMap phi_from_pure_state(const PureState& psi) {
  const SchmidtData sd = schmidt_decompose(psi);
  const auto da = static_cast<Eigen::Index>(psi.dims().a);
  const auto db = static_cast<Eigen::Index>(psi.dims().b);

  // Phi(E_kl) = u_l u_k^dagger with u_l = sum_i beta_i phi_i[l] psi_i
  ComplexMatrix u(da, db);
  for (Eigen::Index l = 0; l < db; ++l) {
    ComplexVector col = ComplexVector::Zero(da);
    for (Eigen::Index i = 0; i < sd.coefficients.size(); ++i) {
      col += sd.coefficients(i) * sd.right(l, i) * sd.left.col(i);
    }
    u.col(l) = col;
  }

  ComplexMatrix phi(da * da, db * db);
  for (Eigen::Index k = 0; k < db; ++k)
    for (Eigen::Index l = 0; l < db; ++l) {
      const ComplexMatrix image = u.col(l) * u.col(k).adjoint();
      phi.col(k * db + l) = vectorize(image);
    }
  return PhiMap(psi.dims(), std::move(phi));
}

double min_image_eigenvalue(const PhiMap& phi, std::size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const Projector q = random_rank1_projector(phi.dims().b, rng);
    const ComplexMatrix image = phi.apply(q.matrix());
    lowest = std::min(lowest, min_eigenvalue(HermitianMatrix((image + image.adjoint()) / 2.0)));
  }
  return lowest;
}

Lemma1Report verify_lemma1(const PhiMap& phi, std::size_t samples, std::uint64_t seed,
                           double tol, double zero_floor) {
  Lemma1Report report;
  report.samples = samples;
  report.tolerance = tol;
  Rng rng = make_rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const Projector q = random_rank1_projector(phi.dims().b, rng);
    const ComplexMatrix image = phi.apply(q.matrix());
    const double trace = image.trace().real();
    if (trace <= zero_floor) {
      ++report.skipped;
      continue;
    }
    const EigenDecomposition eig =
        eig_hermitian(HermitianMatrix((image + image.adjoint()) / 2.0));
    const Eigen::Index m = eig.values.size();
    const double second = m >= 2 ? std::abs(eig.values(m - 2)) : 0.0;
    report.max_ratio = std::max(report.max_ratio, second / trace);
  }
  report.passed = report.max_ratio <= tol;
  return report;
}

Lemma1Report verify_lemma1(const PureState& psi, std::size_t samples, std::uint64_t seed,
                           double tol, double zero_floor) {
  return verify_lemma1(phi_from_pure_state(psi), samples, seed, tol, zero_floor);
}

ProportionalityRecord fit_proportionality(const ComplexMatrix& phi_psi_q,
                                          const ComplexMatrix& phi_lam_q) {
  const double denom = hs_inner(phi_psi_q, phi_psi_q).real();
  ProportionalityRecord rec;
  rec.c = hs_inner(phi_psi_q, phi_lam_q).real() / denom;
  rec.residual = hs_norm(phi_lam_q - rec.c * phi_psi_q);
  return rec;
}

ProportionalityReport summarize_proportionality(std::vector<ProportionalityRecord> records,
                                                std::size_t skipped) {
  ProportionalityReport report;
  report.records = std::move(records);
  report.skipped = skipped;
  if (report.records.empty()) return report;

  double sum = 0.0;
  report.min_c = report.records.front().c;
  for (const auto& r : report.records) {
    sum += r.c;
    report.min_c = std::min(report.min_c, r.c);
    report.max_residual = std::max(report.max_residual, r.residual);
  }
  report.mean_c = sum / static_cast<double>(report.records.size());
  for (const auto& r : report.records) {
    report.max_dispersion = std::max(report.max_dispersion, std::abs(r.c - report.mean_c));
  }
  return report;
}

ProportionalityReport proportionality_profile(const PureState& psi, const LambdaOperator& lam,
                                              std::size_t samples, std::uint64_t seed,
                                              double zero_floor) {
  if (!is_maximally_entangled(psi)) {
    throw ValidationError("proportionality_profile requires a maximally entangled state");
  }
  if (psi.dims() != lam.dims()) {
    throw DimensionError("proportionality_profile: state and Lambda dims differ");
  }
  const PhiMap phi_psi = phi_from_pure_state(psi);
  const PhiMap phi_lam = phi_from_lambda(lam);

  Rng rng = make_rng(seed);
  std::vector<ProportionalityRecord> records;
  std::size_t skipped = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Projector q = random_rank1_projector(psi.dims().b, rng);
    const ComplexMatrix a = phi_psi.apply(q.matrix());
    if (a.trace().real() <= zero_floor) {
      ++skipped;
      continue;
    }
    records.push_back(fit_proportionality(a, phi_lam.apply(q.matrix())));
  }
  return summarize_proportionality(std::move(records), skipped);
}

Lemma3Report verify_lemma3(const PhiMap& phi, std::size_t pairs, std::uint64_t seed,
                           double tol) {
  Lemma3Report report;
  report.pairs = pairs;
  report.tolerance = tol;
  const std::size_t db = phi.dims().b;

  std::vector<Complex> lhs;
  std::vector<Complex> rhs;
  lhs.reserve(pairs);
  rhs.reserve(pairs);
  Rng rng = make_rng(seed);
  for (std::size_t s = 0; s < pairs; ++s) {
    ComplexMatrix a = random_ginibre(db, db, rng);
    ComplexMatrix b = random_ginibre(db, db, rng);
    a /= hs_norm(a);
    b /= hs_norm(b);
    const ComplexMatrix a_dag = a.adjoint();
    lhs.push_back((phi.apply(a_dag) * phi.apply(b)).trace());
    rhs.push_back(hs_inner(a, b));
  }

  Complex num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t s = 0; s < pairs; ++s) {
    num += std::conj(rhs[s]) * lhs[s];
    den += std::norm(rhs[s]);
  }
  const Complex c = den > 0.0 ? num / den : Complex{0.0, 0.0};
  for (std::size_t s = 0; s < pairs; ++s) {
    report.max_deviation = std::max(report.max_deviation, std::abs(lhs[s] - c * rhs[s]));
  }
  report.factor = c.real();
  report.is_hs_conformal = report.max_deviation <= tol && report.factor > 0.0;
  return report;
}

Lemma3Report verify_lemma3(const PureState& psi, std::size_t pairs, std::uint64_t seed,
                           double tol) {
  return verify_lemma3(phi_from_pure_state(psi), pairs, seed, tol);
}

ConformalDefect conformal_defect(const PhiMap& phi) {
  const ComplexMatrix gram = phi.matrix().adjoint() * phi.matrix();
  ConformalDefect out;
  out.factor = gram.trace().real() / static_cast<double>(gram.rows());
  out.deviation = max_abs(gram - out.factor * ComplexMatrix::Identity(gram.rows(), gram.cols()));
  return out;
}

std::vector<Projector> informationally_complete_set(std::size_t n) {
  std::vector<Projector> set;
  set.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) set.push_back(Projector::basis(n, i));
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n));
      v(static_cast<Eigen::Index>(i)) = r;
      v(static_cast<Eigen::Index>(j)) = r;
      set.push_back(Projector::from_ket(v));
      v(static_cast<Eigen::Index>(j)) = Complex(0.0, r);
      set.push_back(Projector::from_ket(v));
    }
  }
  return set;
}

LambdaOperator reconstruct_lambda(const ProductOracle& oracle, std::size_t n,
                                  std::uint64_t check_seed, std::size_t check_pairs) {
  if (n < 1) {
    throw ValidationError("reconstruct_lambda requires n >= 1");
  }
  const std::vector<Projector> frame = informationally_complete_set(n);
  const auto count = static_cast<Eigen::Index>(frame.size());
  const Eigen::Index unknowns = count * count;

  // Row (a, b): Tr(Lambda E_a (x) E_b) = sum_ij conj((E_a (x) E_b)_ij) Lambda_ij
  Eigen::MatrixXcd system(unknowns, unknowns);
  Eigen::VectorXcd rhs(unknowns);
  for (Eigen::Index a = 0; a < count; ++a) {
    for (Eigen::Index b = 0; b < count; ++b) {
      const auto& pa = frame[static_cast<std::size_t>(a)];
      const auto& pb = frame[static_cast<std::size_t>(b)];
      const ComplexMatrix f = kron(pa.matrix(), pb.matrix());
      system.row(a * count + b) = vectorize(f).conjugate().transpose();
      rhs(a * count + b) = oracle(pa, pb);
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(system);
  if (lu.rank() < unknowns) {
    throw SingularSystemError("reconstruct_lambda: measurement system is singular");
  }
  const Eigen::VectorXcd solution = lu.solve(rhs);
  ComplexMatrix lam = unvectorize(solution, n * n, n * n);
  require_finite(lam);

  const ComplexMatrix sym = (lam + lam.adjoint()) / 2.0;
  if (max_abs(lam - sym) > 1e-8) {
    throw ValidationError("reconstruct_lambda: oracle is not consistent with a self-adjoint Lambda");
  }
  const double trace = sym.trace().real();
  if (std::abs(trace - 1.0) > 1e-6) {
    throw ValidationError("reconstruct_lambda: oracle is inconsistent (trace " +
                          std::to_string(trace) + ")");
  }
  LambdaOperator out({n, n}, sym / trace);

  Rng rng = make_rng(check_seed, 0x7265636fULL);
  for (std::size_t s = 0; s < check_pairs; ++s) {
    const Projector p = random_rank1_projector(n, rng);
    const Projector q = random_rank1_projector(n, rng);
    if (std::abs(out.expectation(p, q) - oracle(p, q)) > 1e-6) {
      throw ValidationError("reconstruct_lambda: oracle is not linear in product projections");
    }
  }
  return out;
}

} // namespace nogo
