#include "doctest.h"

#include <cmath>

#include "nogo/influence.hpp"
#include "support.hpp"

using namespace nogo;

namespace {

ComplexMatrix density_of(const PureState& s) { return DensityOperator(s).matrix(); }

} // namespace

TEST_CASE("LambdaOperator validation") {
  CHECK_THROWS_AS(LambdaOperator({2, 2}, ComplexMatrix::Identity(4, 4)), ValidationError);
  CHECK_THROWS_AS(LambdaOperator({2, 3}, ComplexMatrix::Identity(4, 4) / 4.0), DimensionError);
  // non-positive but product-positive operators are accepted
  const LambdaOperator pt({2, 2}, partial_transpose(density_of(singlet()), {2, 2}));
  CHECK(min_product_expectation(pt, 2000, 3) >= -1e-12);
}

TEST_CASE("vectorize round trip") {
  Rng rng = make_rng(2);
  const ComplexMatrix x = random_ginibre(2, 3, rng);
  CHECK(max_abs(unvectorize(vectorize(x), 2, 3) - x) == 0.0);
}

TEST_CASE("phi_from_lambda examples") {
  Rng rng = make_rng(7);
  const ComplexMatrix ra = oracle::random_density(2, rng);
  const ComplexMatrix rb = oracle::random_density(3, rng);
  const PhiMap prod = phi_from_lambda(LambdaOperator({2, 3}, kron(ra, rb)));
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix q = random_hermitian(3, rng);
    CHECK(max_abs(prod.apply(q) - ra * (rb * q).trace()) < 1e-12);
  }

  for (std::size_t n : {2u, 3u, 4u}) {
    const auto d = static_cast<Eigen::Index>(n);
    const PhiMap m = phi_from_lambda(LambdaOperator(max_entangled(n)));
    CHECK(max_abs(m.apply(ComplexMatrix::Identity(d, d)) -
                  ComplexMatrix::Identity(d, d) / static_cast<double>(n)) < 1e-14);
    CHECK(m.normalization() == doctest::Approx(1.0));
  }

  const PhiMap mixed = phi_from_lambda(LambdaOperator(models::mixed_state(3)));
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix q = random_hermitian(3, rng);
    CHECK(max_abs(mixed.apply(q) - ComplexMatrix::Identity(3, 3) * q.trace() / 9.0) < 1e-14);
  }
}

TEST_CASE("phi_from_lambda satisfies the defining duality") {
  Rng rng = make_rng(11);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix lam = oracle::random_unit_trace_hermitian(6, rng);
    const PhiMap phi = phi_from_lambda(LambdaOperator({2, 3}, lam));
    const ComplexMatrix p = random_rank1_projector(2, rng).matrix();
    const ComplexMatrix q = random_rank1_projector(3, rng).matrix();
    CHECK(std::abs((p * phi.apply(q)).trace().real() - oracle::born(lam, p, q)) < 1e-12);
  }
}

TEST_CASE("phi_from_pure_state matches the index-sum oracle and phi_from_lambda") {
  Rng rng = make_rng(13);
  for (std::size_t da : {2u, 3u})
    for (std::size_t db : {2u, 3u}) {
      const PureState psi({da, db}, random_ket(da * db, rng));
      const PhiMap a = phi_from_pure_state(psi);
      const PhiMap b = phi_from_lambda(LambdaOperator(psi));
      for (int t = 0; t < 5; ++t) {
        const ComplexMatrix q = random_ginibre(db, db, rng);
        const ComplexMatrix expected = oracle::phi_of_state(psi.amplitude_matrix(), q);
        CHECK(max_abs(a.apply(q) - expected) < 1e-12);
        CHECK(max_abs(b.apply(q) - expected) < 1e-12);
      }
    }
}

TEST_CASE("phi_from_pure_state examples") {
  ComplexVector x(2), y(3);
  x << Complex(0.6, 0.0), Complex(0.0, 0.8);
  y << Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0);
  const PhiMap prod = phi_from_pure_state(product_state(x, y));
  Rng rng = make_rng(14);
  const ComplexMatrix q = random_hermitian(3, rng);
  CHECK(max_abs(prod.apply(q) - x * x.adjoint() * (y.adjoint() * q * y)(0, 0)) < 1e-12);

  const ComplexMatrix s0 = phi_from_pure_state(singlet()).apply(Projector::basis(2, 0).matrix());
  CHECK(s0.trace().real() == doctest::Approx(0.5));
  const auto e = eig_hermitian(HermitianMatrix(s0));
  CHECK(std::abs(e.values(0)) < 1e-14);

  const ComplexMatrix m1 = phi_from_pure_state(max_entangled(3)).apply(Projector::basis(3, 1).matrix());
  CHECK(max_abs(m1 - Projector::basis(3, 1).matrix() / 3.0) < 1e-14);
}

TEST_CASE("operator_from_phi inverts phi_from_lambda") {
  Rng rng = make_rng(15);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix lam = oracle::random_unit_trace_hermitian(6, rng);
    const PhiMap phi = phi_from_lambda(LambdaOperator({2, 3}, lam));
    CHECK(max_abs(operator_from_phi(phi) - lam) < 1e-14);
  }
}

TEST_CASE("verify_lemma1 examples") {
  const Lemma1Report s = verify_lemma1(singlet(), 1000, 1);
  CHECK(s.passed);
  CHECK(s.max_ratio <= 1e-10);

  ComplexVector a(2), b(2);
  a << 1.0, 0.0;
  b << 0.6, 0.8;
  CHECK(verify_lemma1(product_state(a, b), 200, 2).passed);

  const PhiMap mixed = phi_from_lambda(LambdaOperator(models::mixed_state(2)));
  const Lemma1Report m = verify_lemma1(mixed, 100, 3);
  CHECK_FALSE(m.passed);
  CHECK(m.max_ratio == doctest::Approx(0.5));
}

TEST_CASE("proportionality_profile examples") {
  const PureState m2 = max_entangled(2);
  const ProportionalityReport self = proportionality_profile(m2, LambdaOperator(m2), 200, 4);
  CHECK(self.max_residual < 1e-12);
  CHECK(self.mean_c == doctest::Approx(1.0));
  CHECK(self.max_dispersion < 1e-12);

  const ProportionalityReport other = proportionality_profile(m2, LambdaOperator(singlet()), 200, 4);
  CHECK(other.max_residual > 0.1);

  const LambdaOperator pt({2, 2}, partial_transpose(density_of(singlet()), {2, 2}));
  const ProportionalityReport r = proportionality_profile(m2, pt, 50, 5);
  CHECK(r.records.size() + r.skipped == 50);
}

TEST_CASE("fit_proportionality recovers the factor") {
  Rng rng = make_rng(16);
  const ComplexMatrix x = random_hermitian(3, rng);
  const ProportionalityRecord r = fit_proportionality(x, 2.5 * x);
  CHECK(r.c == doctest::Approx(2.5));
  CHECK(r.residual < 1e-12);
}

TEST_CASE("verify_lemma3 factor equals the brute-force oracle") {
  for (std::size_t n : {2u, 3u, 4u}) {
    const PureState psi = max_entangled(n);
    double defect = 1.0;
    const double expected = oracle::hs_factor_brute_force(psi.amplitude_matrix(), &defect);
    CHECK(defect < 1e-14);
    CHECK(expected == doctest::Approx(1.0 / static_cast<double>(n * n)).epsilon(1e-13));
    const Lemma3Report r = verify_lemma3(psi, 200, 21);
    CHECK(r.is_hs_conformal);
    CHECK(std::abs(r.factor - expected) <= 1e-10);
    CHECK(r.max_deviation <= 1e-10);
    const ConformalDefect c = conformal_defect(phi_from_pure_state(psi));
    CHECK(std::abs(c.factor - expected) <= 1e-12);
  }
}

TEST_CASE("verify_lemma3 rejects unequal Schmidt weights") {
  const PureState u = schmidt_form_state({std::sqrt(0.8), std::sqrt(0.2)});
  double defect = 0.0;
  oracle::hs_factor_brute_force(u.amplitude_matrix(), &defect);
  CHECK(defect > 1e-3);
  const Lemma3Report r = verify_lemma3(u, 200, 22);
  CHECK_FALSE(r.is_hs_conformal);
  CHECK(r.max_deviation > 1e-3);
}

TEST_CASE("informationally_complete_set spans the operator space") {
  for (std::size_t n : {2u, 3u, 4u}) {
    const auto set = informationally_complete_set(n);
    REQUIRE(set.size() == n * n);
    Eigen::MatrixXcd cols(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(n * n));
    for (std::size_t i = 0; i < set.size(); ++i) {
      cols.col(static_cast<Eigen::Index>(i)) = vectorize(set[i].matrix());
    }
    CHECK(Eigen::FullPivLU<Eigen::MatrixXcd>(cols).rank() == static_cast<Eigen::Index>(n * n));
  }
}

TEST_CASE("reconstruct_lambda round trips") {
  const auto born_oracle = [](const ComplexMatrix& lam) {
    return [lam](const Projector& p, const Projector& q) {
      return oracle::born(lam, p.matrix(), q.matrix());
    };
  };
  const ComplexMatrix s = density_of(singlet());
  CHECK(hs_norm(reconstruct_lambda(born_oracle(s), 2).matrix() - s) <= 1e-8);

  const ComplexMatrix mixed = ComplexMatrix::Identity(9, 9) / 9.0;
  CHECK(hs_norm(reconstruct_lambda(born_oracle(mixed), 3).matrix() - mixed) <= 1e-8);

  const ComplexMatrix pt = partial_transpose(s, {2, 2});
  CHECK(hs_norm(reconstruct_lambda(born_oracle(pt), 2).matrix() - pt) <= 1e-8);

  Rng rng = make_rng(23);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix lam = oracle::random_unit_trace_hermitian(9, rng);
    CHECK(hs_norm(reconstruct_lambda(born_oracle(lam), 3, 5).matrix() - lam) <= 1e-8);
  }
}

TEST_CASE("reconstruct_lambda rejects an inconsistent oracle") {
  // Not of the form Tr(L P (x) Q): depends on P through |P_00|^2.
  const auto bad = [](const Projector& p, const Projector& q) {
    return std::norm(p.matrix()(0, 0)) * q.matrix()(0, 0).real();
  };
  CHECK_THROWS_AS(reconstruct_lambda(bad, 2, 1, 16), ValidationError);
}

TEST_CASE("min_image_eigenvalue is non-negative for states") {
  CHECK(min_image_eigenvalue(phi_from_pure_state(singlet()), 200, 3) >= -1e-12);
  const LambdaOperator pt({2, 2}, partial_transpose(density_of(singlet()), {2, 2}));
  CHECK(min_image_eigenvalue(phi_from_lambda(pt), 200, 3) >= -1e-12);
}
