#pragma once

// Leggett-type models for two qubits:
//
//   p(alpha, beta) = 1/4 (1 + alpha eta a.mu + beta eta b.nu + alpha beta C),
//
// the averaged correlation inequality over three measurement planes, the
// singlet prediction, and an LP that maximizes the inequality's left-hand
// side over discretized models.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "nogo/errors.hpp"

namespace nogo::leggett {

/// Unit vector in R^3.
class BlochVector {
public:
  static constexpr double kTolerance = 1e-12;

  BlochVector() = default;
  /// Validates unit norm.
  BlochVector(double x, double y, double z);
  /// Normalizes a nonzero vector.
  static BlochVector normalized(double x, double y, double z);

  [[nodiscard]] double x() const { return v_[0]; }
  [[nodiscard]] double y() const { return v_[1]; }
  [[nodiscard]] double z() const { return v_[2]; }
  [[nodiscard]] const std::array<double, 3>& components() const { return v_; }
  [[nodiscard]] double dot(const BlochVector& o) const {
    return v_[0] * o.v_[0] + v_[1] * o.v_[1] + v_[2] * o.v_[2];
  }
  [[nodiscard]] BlochVector operator-() const { return {-v_[0], -v_[1], -v_[2]}; }

private:
  std::array<double, 3> v_{0.0, 0.0, 1.0};
};

/// Hidden state: Bloch vectors of both marginals and a purity eta in (0, 1].
struct LeggettLambda {
  BlochVector mu;
  BlochVector nu;
  double eta = 1.0;

  LeggettLambda() = default;
  LeggettLambda(BlochVector mu_, BlochVector nu_, double eta_ = 1.0);
};

struct MeasurementPlane {
  BlochVector a;
  BlochVector b;
  BlochVector b_prime;
};

/// Three mutually orthogonal planes; in each, b and b' are separated by phi
/// and a bisects them.
class DirectionTriple {
public:
  DirectionTriple(std::array<MeasurementPlane, 3> planes, double phi);

  /// Planes xy, yz, zx with b_i - b'_i along x, y, z respectively.
  static DirectionTriple standard(double phi);

  [[nodiscard]] const std::array<MeasurementPlane, 3>& planes() const { return planes_; }
  [[nodiscard]] double phi() const { return phi_; }

private:
  std::array<MeasurementPlane, 3> planes_;
  double phi_;
};

using CorrelationFn =
    std::function<double(const LeggettLambda&, const BlochVector& a, const BlochVector& b)>;

/// C = (eta a.mu)(eta b.nu): the outcome-independent choice.
double product_correlation(const LeggettLambda& lam, const BlochVector& a, const BlochVector& b);

/// Singlet correlation -a.b.
double singlet_correlation(const BlochVector& a, const BlochVector& b);

struct CBounds {
  double lo = -1.0;
  double hi = 1.0;
};

/// Range of C keeping all four outcome probabilities non-negative:
/// [|u + v| - 1, 1 - |u - v|] with u = eta a.mu, v = eta b.nu.
CBounds c_bounds(const LeggettLambda& lam, const BlochVector& a, const BlochVector& b);

/// The four outcome probabilities for a given C, indexed [alpha][beta] with
/// index 0 meaning +1.
std::array<std::array<double, 2>, 2> leggett_distribution(const LeggettLambda& lam, double c,
                                                          const BlochVector& a,
                                                          const BlochVector& b);

/// Thrown when C makes some outcome probability negative.
class PositivityError : public Error {
public:
  PositivityError(const std::string& what, int alpha, int beta)
      : Error(what), alpha_(alpha), beta_(beta) {}
  [[nodiscard]] int alpha() const { return alpha_; }
  [[nodiscard]] int beta() const { return beta_; }

private:
  int alpha_;
  int beta_;
};

/// p(alpha, beta) with alpha, beta in {+1, -1}.
double leggett_joint(const LeggettLambda& lam, const CorrelationFn& c, const BlochVector& a,
                     const BlochVector& b, int alpha, int beta);

/// (1/3) sum_i |C(a_i, b_i) + C(a_i, b'_i)| with singlet correlations.
double quantum_lhs(const DirectionTriple& d);

/// 2 - (2/3)|sin(phi/2)|, phi in [0, 2 pi).
double leggett_bound(double phi);

struct ViolationRegion {
  double phi_low = 0.0;
  double phi_star = 0.0;
};

/// Root of 2 cos(phi/2) = 2 - (2/3) sin(phi/2) on (0, pi), bisected to 1e-12.
ViolationRegion violation_region();

/// Fibonacci lattice of `count` points; a nonzero seed applies a seeded
/// random rotation to the whole lattice.
std::vector<BlochVector> fibonacci_sphere(std::size_t count, std::uint64_t seed = 0);

enum class NuPairing {
  Antipodal, // nu = -mu
  Equal,     // nu = mu
  Product,   // every (mu, nu) pair of the grid
};

struct LpModel {
  std::vector<LeggettLambda> lambdas;
  std::vector<double> weights;
  /// Per lambda, C(a_i, b_i) and C(a_i, b'_i) for i = 0..2.
  std::vector<std::array<double, 6>> correlations;
  std::array<int, 3> signs{1, 1, 1};
};

struct LpResult {
  double value = 0.0; // (1/3) sum_i |<C_i> + <C'_i>|
  double bound = 0.0; // leggett_bound(phi)
  double slack = 0.0; // bound - value
  std::size_t grid_points = 0;
  LpModel model;
};

/// Maximizes the averaged correlation sum over weights on the grid and
/// per-lambda C within c_bounds, with flat average marginals. Each sign
/// branch of the absolute values is an LP; the best branch is returned.
LpResult max_lhs_lp(const DirectionTriple& d, const std::vector<BlochVector>& grid, double eta,
                    NuPairing pairing = NuPairing::Antipodal);

} // namespace nogo::leggett
