#include "nogo/nogo_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "nogo/lp.hpp"
#include "nogo/random.hpp"

namespace nogo {

namespace {

constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kDirectionStream = 2;
constexpr std::uint64_t kTestStream = 3;

} // namespace

void DecompositionProblem::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw ValidationError("decomposition weight eta must lie strictly inside (0, 1)");
  }
  const std::size_t dim = target.dims().total();
  if (samples < dim * dim) {
    throw ValidationError("need at least " + std::to_string(dim * dim) +
                          " product samples (dim^2)");
  }
  if (direction) {
    const HermitianMatrix h(*direction);
    if (h.dim() != dim) {
      throw DimensionError("perturbation direction has the wrong size");
    }
    if (std::abs(h.trace()) > 1e-10) {
      throw ValidationError("perturbation direction must be traceless");
    }
  }
}

ProductConstraints sample_product_constraints(const DensityOperator& rho, std::size_t samples,
                                              std::uint64_t seed) {
  ProductConstraints out;
  out.target.reserve(samples);
  out.kets.reserve(samples);
  Rng rng = make_rng(seed, kSampleStream);
  const ComplexMatrix& m = rho.matrix();
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexVector x = random_ket(rho.dims().a, rng);
    const ComplexVector y = random_ket(rho.dims().b, rng);
    ComplexVector v(x.size() * y.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) v.segment(i * y.size(), y.size()) = x(i) * y;
    out.target.push_back(std::max(0.0, v.dot(m * v).real()));
    out.kets.push_back(std::move(v));
  }
  return out;
}

ComplexMatrix random_traceless_direction(std::size_t dim, std::uint64_t seed) {
  Rng rng = make_rng(seed, kDirectionStream);
  ComplexMatrix h = random_hermitian(dim, rng);
  const Complex mean = h.trace() / static_cast<double>(dim);
  h -= mean * ComplexMatrix::Identity(h.rows(), h.cols());
  return h / hs_norm(h);
}

FeasibilityCertificate max_perturbation(const DecompositionProblem& p) {
  p.validate();
  const std::size_t dim = p.target.dims().total();
  const ComplexMatrix delta =
      p.direction ? *p.direction : random_traceless_direction(dim, p.seed);
  const HermitianMatrix h(delta);

  const ProductConstraints cons = sample_product_constraints(p.target, p.samples, p.seed);

  // r + (1 - eta) t d >= 0  and  r - eta t d >= 0  for every sample
  double t_max = std::numeric_limits<double>::infinity();
  std::vector<double> dvals(p.samples);
  for (std::size_t s = 0; s < p.samples; ++s) {
    const double r = cons.target[s];
    const double d = cons.kets[s].dot(h.matrix() * cons.kets[s]).real();
    dvals[s] = d;
    if (d < 0.0) {
      t_max = std::min(t_max, r / ((1.0 - p.eta) * -d));
    } else if (d > 0.0) {
      t_max = std::min(t_max, r / (p.eta * d));
    }
  }
  if (!std::isfinite(t_max)) {
    throw ValidationError("degenerate sample: no constraint bounds the perturbation; "
                          "increase the sample count");
  }

  FeasibilityCertificate cert;
  cert.t_max = t_max;
  cert.direction = h;
  cert.samples = p.samples;
  cert.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < p.samples; ++s) {
    const double r = cons.target[s];
    cert.min_residual = std::min({cert.min_residual, r + (1.0 - p.eta) * t_max * dvals[s],
                                  r - p.eta * t_max * dvals[s]});
  }
  return cert;
}

double recheck_certificate(const DecompositionProblem& p, const FeasibilityCertificate& c) {
  const ComplexMatrix l1 = p.target.matrix() + (1.0 - p.eta) * c.t_max * c.direction.matrix();
  const ComplexMatrix l2 = p.target.matrix() - p.eta * c.t_max * c.direction.matrix();
  Rng rng = make_rng(p.seed, kSampleStream);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < p.samples; ++s) {
    const Projector pa = random_rank1_projector(p.target.dims().a, rng);
    const Projector qb = random_rank1_projector(p.target.dims().b, rng);
    const ComplexMatrix pq = kron(pa.matrix(), qb.matrix());
    lowest = std::min({lowest, hs_inner(pq, l1).real(), hs_inner(pq, l2).real()});
  }
  return lowest;
}

std::vector<ComplexMatrix> traceless_hermitian_basis(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = j + 1; k < d; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(j, k) = r;
      sym(k, j) = r;
      basis.push_back(sym);
      ComplexMatrix anti = ComplexMatrix::Zero(d, d);
      anti(j, k) = Complex(0.0, -r);
      anti(k, j) = Complex(0.0, r);
      basis.push_back(anti);
    }
  for (Eigen::Index l = 1; l < d; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(d, d);
    const double norm = std::sqrt(static_cast<double>(l * (l + 1)));
    for (Eigen::Index m = 0; m < l; ++m) diag(m, m) = 1.0 / norm;
    diag(l, l) = -static_cast<double>(l) / norm;
    basis.push_back(diag);
  }
  return basis;
}

BasisLpCertificate max_perturbation_lp(const DecompositionProblem& p) {
  p.validate();
  const std::size_t dim = p.target.dims().total();
  const std::vector<ComplexMatrix> basis = traceless_hermitian_basis(dim);
  const auto k_count = static_cast<Eigen::Index>(basis.size());
  const ProductConstraints cons = sample_product_constraints(p.target, p.samples, p.seed);
  const auto n = static_cast<Eigen::Index>(p.samples);

  // Primal: max u.x  s.t.  G x <= h, x free, with rows
  //   -(1 - eta) d_s . x <= r_s   and   eta d_s . x <= r_s.
  // Dual (standard form): min h.y  s.t.  G^T y = u, y >= 0.
  lp::StandardForm dual;
  dual.a.resize(k_count, 2 * n);
  dual.c.resize(2 * n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto& v = cons.kets[static_cast<std::size_t>(s)];
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const double d = v.dot(basis[static_cast<std::size_t>(k)] * v).real();
      dual.a(k, s) = -(1.0 - p.eta) * d;
      dual.a(k, n + s) = p.eta * d;
    }
    dual.c(s) = cons.target[static_cast<std::size_t>(s)];
    dual.c(n + s) = cons.target[static_cast<std::size_t>(s)];
  }

  BasisLpCertificate cert;
  cert.samples = p.samples;
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (double sign : {1.0, -1.0}) {
      dual.b = Eigen::VectorXd::Zero(k_count);
      dual.b(k) = sign;
      double value = 0.0;
      try {
        value = lp::solve(dual).objective;
      } catch (const InfeasibleError&) {
        throw ValidationError("degenerate sample: perturbation along a basis axis is "
                              "unbounded; increase the sample count");
      }
      cert.axis_max.push_back(value);
      if (value > cert.best) {
        cert.best = value;
        cert.best_axis = cert.axis_max.size() - 1;
      }
    }
  }
  return cert;
}

namespace {

Eigen::MatrixXcd vectorized_columns(const std::vector<ComplexMatrix>& ops) {
  Eigen::MatrixXcd out(ops.front().size(), static_cast<Eigen::Index>(ops.size()));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = vectorize(ops[i]);
  }
  return out;
}

} // namespace

ConstancyReport verify_constancy_chain(const PureState& psi, const LambdaOperator& lam,
                                       const std::vector<Projector>& basis,
                                       std::size_t test_samples, std::uint64_t seed, double tol) {
  if (!is_maximally_entangled(psi)) {
    throw ValidationError("verify_constancy_chain requires a maximally entangled state");
  }
  if (psi.dims() != lam.dims()) {
    throw DimensionError("verify_constancy_chain: state and Lambda dims differ");
  }
  const std::size_t db = psi.dims().b;
  std::vector<ComplexMatrix> inputs;
  for (const auto& q : basis) {
    if (q.dim() != db) throw DimensionError("basis projector on the wrong space");
    inputs.push_back(q.matrix());
  }
  if (inputs.empty()) throw ValidationError("basis is empty");
  const Eigen::MatrixXcd v = vectorized_columns(inputs);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(v);
  if (lu.rank() < static_cast<Eigen::Index>(db * db)) {
    throw ValidationError("basis does not span the operator space");
  }

  const PhiMap phi_psi = phi_from_pure_state(psi);
  const PhiMap phi_lam = phi_from_lambda(lam);

  ConstancyReport report;
  std::vector<ProportionalityRecord> records;
  std::vector<ComplexMatrix> targets;
  for (const auto& q : inputs) {
    const ComplexMatrix a = phi_psi.apply(q);
    const ProportionalityRecord rec = fit_proportionality(a, phi_lam.apply(q));
    report.basis_c.push_back(rec.c);
    records.push_back(rec);
    targets.push_back(rec.c * a);
  }
  report.basis_profile = summarize_proportionality(records, 0);
  report.test_profile = proportionality_profile(psi, lam, test_samples,
                                                seed ^ (kTestStream << 32));

  std::vector<double> all_c = report.basis_c;
  for (const auto& r : report.test_profile.records) all_c.push_back(r.c);
  double sum = 0.0;
  for (double c : all_c) sum += c;
  report.mean_c = sum / static_cast<double>(all_c.size());
  double worst_from_one = 0.0;
  for (double c : all_c) {
    report.max_dispersion = std::max(report.max_dispersion, std::abs(c - report.mean_c));
    worst_from_one = std::max(worst_from_one, std::abs(c - 1.0));
  }
  report.max_residual =
      std::max(report.basis_profile.max_residual, report.test_profile.max_residual);
  report.proportional = report.max_residual <= tol;
  report.c_is_one = report.proportional && worst_from_one <= tol;

  // Phi_rec V = W  =>  V^T Phi_rec^T = W^T
  const Eigen::MatrixXcd w = vectorized_columns(targets);
  const Eigen::MatrixXcd vt = v.transpose();
  const Eigen::MatrixXcd rec_t = vt.completeOrthogonalDecomposition().solve(w.transpose());
  const PhiMap phi_rec(psi.dims(), rec_t.transpose());
  report.reconstruction_error = hs_norm(operator_from_phi(phi_rec) - lam.matrix());
  report.distance_to_state = hs_norm(lam.matrix() - psi.projector());
  return report;
}

BasisImageReport basis_image_conditioning(const PureState& psi,
                                          const std::vector<ComplexMatrix>& basis) {
  if (basis.empty()) throw ValidationError("basis is empty");
  const PhiMap phi = phi_from_pure_state(psi);
  std::vector<ComplexMatrix> images;
  for (const auto& b : basis) images.push_back(phi.apply(b));

  const auto condition = [](const std::vector<ComplexMatrix>& ops, double& smallest) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectorized_columns(ops));
    const Eigen::VectorXd& sv = svd.singularValues();
    smallest = sv(sv.size() - 1);
    const double ratio = sv(0) / smallest;
    return ratio * ratio;
  };

  BasisImageReport report;
  double input_smallest = 0.0;
  report.input_condition = condition(basis, input_smallest);
  report.gram_condition = condition(images, report.smallest_singular);
  const std::size_t da = psi.dims().a;
  report.is_basis = basis.size() == da * da && report.smallest_singular > 1e-10;
  return report;
}

std::vector<ComplexMatrix> matrix_unit_basis(std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n);
  std::vector<ComplexMatrix> out;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      out.push_back(e);
    }
  return out;
}

} // namespace nogo
