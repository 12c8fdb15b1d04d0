#pragma once

// Independent reference computations and model generators shared by the unit
// and acceptance tests. Nothing here calls the library routine it is used to
// check; oracles are written from the defining formulas with explicit loops.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nogo/hv_models.hpp"
#include "nogo/linalg.hpp"
#include "nogo/random.hpp"
#include "nogo/states.hpp"

namespace oracle {

using nogo::Complex;
using nogo::ComplexMatrix;
using nogo::ComplexVector;

inline constexpr double kPi = 3.14159265358979323846;

/// Tr(rho P (x) Q) by explicit index sums.
inline double born(const ComplexMatrix& rho, const ComplexMatrix& p, const ComplexMatrix& q) {
  const auto da = p.rows();
  const auto db = q.rows();
  Complex acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index k = 0; k < db; ++k)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index l = 0; l < db; ++l)
          acc += rho(j * db + l, i * db + k) * p(i, j) * q(k, l);
  return acc.real();
}

/// Tr_B(|psi><psi| (1 (x) Q)) from the amplitude matrix M (psi = sum M_ab |a>|b>):
/// result_ij = sum_{b, b'} M_ib conj(M_jb') Q_b'b.
inline ComplexMatrix phi_of_state(const ComplexMatrix& amps, const ComplexMatrix& q) {
  const auto da = amps.rows();
  const auto db = amps.cols();
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index b = 0; b < db; ++b)
        for (Eigen::Index bp = 0; bp < db; ++bp)
          out(i, j) += amps(i, b) * std::conj(amps(j, bp)) * q(bp, b);
  return out;
}

/// Gram matrix Tr(Phi(E_kl)^dagger Phi(E_k'l')) over all matrix units.
inline ComplexMatrix hs_gram_of_units(const ComplexMatrix& amps) {
  const auto db = amps.cols();
  std::vector<ComplexMatrix> images;
  for (Eigen::Index k = 0; k < db; ++k)
    for (Eigen::Index l = 0; l < db; ++l) {
      ComplexMatrix e = ComplexMatrix::Zero(db, db);
      e(k, l) = 1.0;
      images.push_back(phi_of_state(amps, e));
    }
  const auto m = static_cast<Eigen::Index>(images.size());
  ComplexMatrix g(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      g(r, c) = (images[static_cast<std::size_t>(r)].adjoint() *
                 images[static_cast<std::size_t>(c)])
                    .trace();
    }
  return g;
}

/// Brute-force HS conformal factor: the Gram matrix over matrix units must be
/// c times the identity; returns c. `defect` receives max |G - c I|.
inline double hs_factor_brute_force(const ComplexMatrix& amps, double* defect = nullptr) {
  const ComplexMatrix g = hs_gram_of_units(amps);
  const double c = g(0, 0).real();
  if (defect) {
    *defect = (g - c * ComplexMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  }
  return c;
}

/// Plain bisection for 2 cos(x/2) = 2 - (2/3) sin(x/2) on (lo, hi).
inline double leggett_crossing(double lo = 0.5, double hi = 3.0) {
  const auto f = [](double x) {
    return 2.0 * std::cos(x / 2.0) - (2.0 - 2.0 / 3.0 * std::sin(x / 2.0));
  };
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

/// Random unit-trace Hermitian operator (not positive in general).
inline ComplexMatrix random_unit_trace_hermitian(std::size_t dim, nogo::Rng& rng) {
  std::normal_distribution<double> g;
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix h(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) h(i, j) = Complex(g(rng), g(rng));
  h = (h + h.adjoint()).eval() / 2.0;
  h -= (h.trace() / static_cast<double>(dim)) * ComplexMatrix::Identity(d, d);
  return h / (2.0 * std::sqrt(static_cast<double>(dim))) +
         ComplexMatrix::Identity(d, d) / static_cast<double>(dim);
}

/// Random density matrix of full rank.
inline ComplexMatrix random_density(std::size_t dim, nogo::Rng& rng) {
  const ComplexMatrix g = nogo::random_ginibre(dim, dim, rng);
  const ComplexMatrix r = g * g.adjoint();
  return r / r.trace().real();
}

} // namespace oracle

namespace models {

using JointFn = std::function<Eigen::MatrixXd(std::size_t lambda, const nogo::MeasurementContext&,
                                              const nogo::MeasurementContext&)>;

/// Hidden-variable model given by a callable; used to generate families.
class FunctionModel final : public nogo::HVModel {
public:
  FunctionModel(nogo::DensityOperator rho, std::vector<double> weights, JointFn fn,
                std::string family)
      : rho_(std::move(rho)), weights_(std::move(weights)), fn_(std::move(fn)),
        family_(std::move(family)) {}

  const nogo::DensityOperator& state() const override { return rho_; }
  const std::vector<double>& weights() const override { return weights_; }
  Eigen::MatrixXd joint(std::size_t lambda, const nogo::MeasurementContext& a,
                        const nogo::MeasurementContext& b) const override {
    return fn_(lambda, a, b);
  }
  std::string family() const override { return family_; }

private:
  nogo::DensityOperator rho_;
  std::vector<double> weights_;
  JointFn fn_;
  std::string family_;
};

inline nogo::DensityOperator mixed_state(std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n * n);
  return {{n, n}, nogo::ComplexMatrix::Identity(d, d) / static_cast<double>(d)};
}

inline std::vector<double> random_weights(std::size_t count, nogo::Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> w(count);
  double sum = 0.0;
  for (auto& x : w) sum += (x = u(rng));
  for (auto& x : w) x /= sum;
  return w;
}

/// Contexts on C^n that all contain |0><0| (as outcome 0), labelled 0..count-1.
inline std::vector<nogo::MeasurementContext> contexts_sharing_e0(std::size_t n,
                                                                 std::size_t count,
                                                                 nogo::Rng& rng) {
  std::vector<nogo::MeasurementContext> out;
  const auto d = static_cast<Eigen::Index>(n);
  for (std::size_t c = 0; c < count; ++c) {
    nogo::ComplexMatrix u = nogo::ComplexMatrix::Identity(d, d);
    if (c > 0) u.block(1, 1, d - 1, d - 1) = nogo::random_unitary(n - 1, rng);
    out.push_back(nogo::MeasurementContext::from_basis(u, static_cast<std::uint32_t>(c)));
  }
  return out;
}

/// Strictly positive probability vector.
inline Eigen::VectorXd random_distribution(Eigen::Index size, nogo::Rng& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = u(rng);
  return v / v.sum();
}

/// Outcome-independent tabular model: p = pA (x) pB per (lambda, contexts).
/// With probability `signal_rate` Alice's (or Bob's) marginal depends on the
/// far context; otherwise each side's marginal depends only on its own
/// context.
inline nogo::TabularModel random_oi_model(const nogo::Scenario& s, std::size_t n,
                                          double signal_rate, nogo::Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t hidden = 1 + rng() % 3;
  nogo::TabularModel m(mixed_state(n), random_weights(hidden, rng), s.alice.size(),
                       s.bob.size());
  const bool alice_signals = coin(rng) < signal_rate;
  const bool bob_signals = coin(rng) < signal_rate;
  const auto nn = static_cast<Eigen::Index>(n);
  for (std::size_t l = 0; l < hidden; ++l) {
    std::vector<Eigen::VectorXd> pa, pb;
    for (std::size_t a = 0; a < s.alice.size(); ++a) pa.push_back(random_distribution(nn, rng));
    for (std::size_t b = 0; b < s.bob.size(); ++b) pb.push_back(random_distribution(nn, rng));
    for (std::size_t a = 0; a < s.alice.size(); ++a)
      for (std::size_t b = 0; b < s.bob.size(); ++b) {
        const Eigen::VectorXd x = alice_signals ? random_distribution(nn, rng) : pa[a];
        const Eigen::VectorXd y = bob_signals ? random_distribution(nn, rng) : pb[b];
        m.set(l, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
              x * y.transpose());
      }
  }
  return m;
}

/// Density matrix of a random pure state, partially transposed on B: unit
/// trace, non-negative on products, usually not positive semidefinite.
inline nogo::ComplexMatrix random_transposed_pure(std::size_t n, nogo::Rng& rng) {
  const nogo::ComplexVector v = nogo::random_ket(n * n, rng);
  return nogo::partial_transpose(v * v.adjoint(), {n, n});
}

/// p(P_j, Q_k) = Tr(L P_j (x) Q_k) for an operator L with product positivity.
inline Eigen::MatrixXd operator_joint(const nogo::ComplexMatrix& lam,
                                      const nogo::MeasurementContext& a,
                                      const nogo::MeasurementContext& b) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k) {
      p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          std::max(0.0, oracle::born(lam, a.outcomes[j].matrix(), b.outcomes[k].matrix()));
    }
  return p / p.sum();
}

/// Vector of Tr(sigma P_j) over a context's outcomes.
inline Eigen::VectorXd frame_values(const nogo::ComplexMatrix& sigma,
                                    const nogo::MeasurementContext& c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t j = 0; j < c.size(); ++j) {
    v(static_cast<Eigen::Index>(j)) = (sigma * c.outcomes[j].matrix()).trace().real();
  }
  return v;
}

/// A mixed population of finite models for the marginal-plus-CPI implies
/// joint non-contextuality property:
///  kind 0: per-lambda product-positive operators (noncontextual);
///  kind 1: per-lambda product frame functions (noncontextual, OI);
///  kind 2: frame-function marginals with a context-dependent coupling on
///          the joint (marginals fixed, joints contextual);
///  kind 3: frame-function marginals where Alice's marginal drifts with
///          Bob's context (signalling).
inline std::unique_ptr<nogo::HVModel> random_prop2_model(std::size_t n, int kind,
                                                         nogo::Rng& rng) {
  const std::size_t hidden = 1 + rng() % 3;
  auto weights = random_weights(hidden, rng);
  std::vector<nogo::ComplexMatrix> first, second;
  for (std::size_t l = 0; l < hidden; ++l) {
    if (kind == 0) {
      first.push_back(std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5
                          ? random_transposed_pure(n, rng)
                          : oracle::random_density(n * n, rng));
    } else {
      first.push_back(oracle::random_density(n, rng));
      second.push_back(oracle::random_density(n, rng));
    }
  }
  std::uniform_real_distribution<double> u(0.2, 1.0);
  const double strength = u(rng);

  JointFn fn;
  if (kind == 0) {
    fn = [first](std::size_t l, const nogo::MeasurementContext& a,
                 const nogo::MeasurementContext& b) { return operator_joint(first[l], a, b); };
  } else {
    fn = [first, second, kind, strength](std::size_t l, const nogo::MeasurementContext& a,
                                         const nogo::MeasurementContext& b) {
      Eigen::VectorXd pa = frame_values(first[l], a);
      const Eigen::VectorXd pb = frame_values(second[l], b);
      if (kind == 3 && b.label % 2 == 1) {
        // move weight between Alice's first two outcomes
        const double shift = strength * 0.5 * std::min(pa(0), pa(1));
        pa(0) += shift;
        pa(1) -= shift;
      }
      Eigen::MatrixXd p = pa * pb.transpose();
      if (kind == 2 && b.label % 2 == 1) {
        // zero-marginal coupling on the 2x2 corner, scaled to keep p >= 0
        const double room = std::min({p(0, 0), p(0, 1), p(1, 0), p(1, 1)});
        const double e = strength * room;
        p(0, 0) += e;
        p(1, 1) += e;
        p(0, 1) -= e;
        p(1, 0) -= e;
      }
      return p;
    };
  }
  return std::make_unique<FunctionModel>(mixed_state(n), weights, fn,
                                         "generated-" + std::to_string(kind));
}

} // namespace models
