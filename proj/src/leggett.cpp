#include "nogo/leggett.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nogo/lp.hpp"
#include "nogo/random.hpp"

namespace nogo::leggett {

BlochVector::BlochVector(double x, double y, double z) : v_{x, y, z} {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kTolerance) {
    throw ValidationError("Bloch vector must have unit norm");
  }
}

BlochVector BlochVector::normalized(double x, double y, double z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("cannot normalize a zero or non-finite Bloch vector");
  }
  return {x / norm, y / norm, z / norm};
}

LeggettLambda::LeggettLambda(BlochVector mu_, BlochVector nu_, double eta_)
    : mu(mu_), nu(nu_), eta(eta_) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw ValidationError("eta must lie in (0, 1]");
  }
}

namespace {

std::array<double, 3> sub(const BlochVector& p, const BlochVector& q) {
  return {p.x() - q.x(), p.y() - q.y(), p.z() - q.z()};
}

std::array<double, 3> add(const BlochVector& p, const BlochVector& q) {
  return {p.x() + q.x(), p.y() + q.y(), p.z() + q.z()};
}

double dot3(const std::array<double, 3>& p, const std::array<double, 3>& q) {
  return p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
}

std::array<double, 3> cross3(const std::array<double, 3>& p, const std::array<double, 3>& q) {
  return {p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]};
}

} // namespace

DirectionTriple::DirectionTriple(std::array<MeasurementPlane, 3> planes, double phi)
    : planes_(planes), phi_(phi) {
  constexpr double tol = 1e-10;
  for (const auto& pl : planes_) {
    if (std::abs(pl.b.dot(pl.b_prime) - std::cos(phi)) > tol) {
      throw ValidationError("direction triple: angle between b and b' differs from phi");
    }
    const auto s = add(pl.b, pl.b_prime);
    const auto& a = pl.a.components();
    if (std::sqrt(dot3(cross3(a, s), cross3(a, s))) > tol) {
      throw ValidationError("direction triple: a is not parallel to b + b'");
    }
  }
  if (std::abs(std::sin(phi / 2.0)) > tol) {
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        const auto di = sub(planes_[i].b, planes_[i].b_prime);
        const auto dj = sub(planes_[j].b, planes_[j].b_prime);
        if (std::abs(dot3(di, dj)) > tol) {
          throw ValidationError("direction triple: b - b' differences are not orthogonal");
        }
      }
  }
}

DirectionTriple DirectionTriple::standard(double phi) {
  const double c = std::cos(phi / 2.0);
  const double s = std::sin(phi / 2.0);
  // (bisector d, difference axis e) per plane
  const std::array<std::pair<std::array<double, 3>, std::array<double, 3>>, 3> axes{{
      {{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}},
      {{0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}},
      {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}},
  }};
  std::array<MeasurementPlane, 3> planes;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& [d, e] = axes[i];
    planes[i].a = BlochVector(d[0], d[1], d[2]);
    planes[i].b = BlochVector::normalized(c * d[0] + s * e[0], c * d[1] + s * e[1],
                                          c * d[2] + s * e[2]);
    planes[i].b_prime = BlochVector::normalized(c * d[0] - s * e[0], c * d[1] - s * e[1],
                                                c * d[2] - s * e[2]);
  }
  return {planes, phi};
}

double product_correlation(const LeggettLambda& lam, const BlochVector& a, const BlochVector& b) {
  return lam.eta * a.dot(lam.mu) * lam.eta * b.dot(lam.nu);
}

double singlet_correlation(const BlochVector& a, const BlochVector& b) { return -a.dot(b); }

CBounds c_bounds(const LeggettLambda& lam, const BlochVector& a, const BlochVector& b) {
  const double u = lam.eta * a.dot(lam.mu);
  const double v = lam.eta * b.dot(lam.nu);
  return {std::abs(u + v) - 1.0, 1.0 - std::abs(u - v)};
}

std::array<std::array<double, 2>, 2> leggett_distribution(const LeggettLambda& lam, double c,
                                                          const BlochVector& a,
                                                          const BlochVector& b) {
  const double u = lam.eta * a.dot(lam.mu);
  const double v = lam.eta * b.dot(lam.nu);
  std::array<std::array<double, 2>, 2> p{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double alpha = i == 0 ? 1.0 : -1.0;
      const double beta = j == 0 ? 1.0 : -1.0;
      p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          0.25 * (1.0 + alpha * u + beta * v + alpha * beta * c);
    }
  return p;
}

double leggett_joint(const LeggettLambda& lam, const CorrelationFn& c, const BlochVector& a,
                     const BlochVector& b, int alpha, int beta) {
  if ((alpha != 1 && alpha != -1) || (beta != 1 && beta != -1)) {
    throw ValidationError("outcomes must be +1 or -1");
  }
  const double corr = c(lam, a, b);
  const auto p = leggett_distribution(lam, corr, a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] < -1e-12) {
        const int sa = i == 0 ? 1 : -1;
        const int sb = j == 0 ? 1 : -1;
        throw PositivityError("correlation C = " + std::to_string(corr) +
                                  " makes p(" + std::to_string(sa) + "," + std::to_string(sb) +
                                  ") negative",
                              sa, sb);
      }
    }
  return p[alpha == 1 ? 0 : 1][beta == 1 ? 0 : 1];
}

double quantum_lhs(const DirectionTriple& d) {
  double sum = 0.0;
  for (const auto& pl : d.planes()) {
    sum += std::abs(singlet_correlation(pl.a, pl.b) + singlet_correlation(pl.a, pl.b_prime));
  }
  return sum / 3.0;
}

double leggett_bound(double phi) {
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
    throw ValidationError("leggett_bound: phi must lie in [0, 2 pi)");
  }
  return 2.0 - (2.0 / 3.0) * std::abs(std::sin(phi / 2.0));
}

ViolationRegion violation_region() {
  const auto gap = [](double phi) {
    return 2.0 * std::cos(phi / 2.0) - (2.0 - (2.0 / 3.0) * std::sin(phi / 2.0));
  };
  // gap > 0 just above 0 and gap(pi) = -4/3
  double lo = std::numbers::pi / 8.0;
  double hi = std::numbers::pi;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  return {0.0, 0.5 * (lo + hi)};
}

std::vector<BlochVector> fibonacci_sphere(std::size_t count, std::uint64_t seed) {
  if (count < 1) {
    throw ValidationError("fibonacci_sphere: need at least one point");
  }
  std::array<std::array<double, 3>, 3> rot{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  if (seed != 0) {
    Rng rng = make_rng(seed, 0x666962ULL);
    std::normal_distribution<double> normal;
    double q[4];
    double n2 = 0.0;
    for (double& qi : q) {
      qi = normal(rng);
      n2 += qi * qi;
    }
    const double n = std::sqrt(n2);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    rot = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
            {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
            {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  }

  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<BlochVector> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double theta = golden * static_cast<double>(i);
    const std::array<double, 3> p{r * std::cos(theta), r * std::sin(theta), z};
    std::array<double, 3> q{};
    for (std::size_t k = 0; k < 3; ++k) q[k] = dot3(rot[k], p);
    points.push_back(BlochVector::normalized(q[0], q[1], q[2]));
  }
  return points;
}

namespace {

std::vector<LeggettLambda> pair_grid(const std::vector<BlochVector>& grid, double eta,
                                     NuPairing pairing) {
  std::vector<LeggettLambda> out;
  switch (pairing) {
  case NuPairing::Antipodal:
    for (const auto& m : grid) out.emplace_back(m, -m, eta);
    break;
  case NuPairing::Equal:
    for (const auto& m : grid) out.emplace_back(m, m, eta);
    break;
  case NuPairing::Product:
    for (const auto& m : grid)
      for (const auto& n : grid) out.emplace_back(m, n, eta);
    break;
  }
  return out;
}

} // namespace

LpResult max_lhs_lp(const DirectionTriple& d, const std::vector<BlochVector>& grid, double eta,
                    NuPairing pairing) {
  const std::vector<LeggettLambda> lambdas = pair_grid(grid, eta, pairing);
  const auto count = static_cast<Eigen::Index>(lambdas.size());
  const auto& planes = d.planes();

  // Bounds on the six correlations for every lambda.
  std::vector<std::array<CBounds, 6>> bounds(lambdas.size());
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    for (std::size_t i = 0; i < 3; ++i) {
      bounds[l][2 * i] = c_bounds(lambdas[l], planes[i].a, planes[i].b);
      bounds[l][2 * i + 1] = c_bounds(lambdas[l], planes[i].a, planes[i].b_prime);
    }
  }

  lp::StandardForm problem;
  problem.a = Eigen::MatrixXd::Zero(7, count);
  problem.b = Eigen::VectorXd::Zero(7);
  problem.b(0) = 1.0;
  for (Eigen::Index l = 0; l < count; ++l) {
    const auto& lam = lambdas[static_cast<std::size_t>(l)];
    problem.a(0, l) = 1.0;
    for (int k = 0; k < 3; ++k) {
      problem.a(1 + k, l) = lam.eta * lam.mu.components()[static_cast<std::size_t>(k)];
      problem.a(4 + k, l) = lam.eta * lam.nu.components()[static_cast<std::size_t>(k)];
    }
  }

  LpResult best;
  best.value = -1.0;
  best.bound = leggett_bound(std::fmod(d.phi(), 2.0 * std::numbers::pi));
  best.grid_points = grid.size();

  for (int branch = 0; branch < 8; ++branch) {
    const std::array<int, 3> signs{branch & 1 ? -1 : 1, branch & 2 ? -1 : 1,
                                   branch & 4 ? -1 : 1};
    // With the signs fixed, C sits at hi (sign +) or lo (sign -) for every lambda.
    problem.c = Eigen::VectorXd::Zero(count);
    std::vector<std::array<double, 6>> chosen(lambdas.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      double g = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        const int s = signs[i];
        for (std::size_t k = 2 * i; k < 2 * i + 2; ++k) {
          chosen[l][k] = s > 0 ? bounds[l][k].hi : bounds[l][k].lo;
          g += s * chosen[l][k];
        }
      }
      problem.c(static_cast<Eigen::Index>(l)) = -g / 3.0;
    }

    lp::Solution sol;
    try {
      sol = lp::solve(problem);
    } catch (const InfeasibleError&) {
      throw InfeasibleError("max_lhs_lp: flat-marginal constraint is infeasible on this grid");
    }

    std::array<double, 6> avg{};
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      for (std::size_t k = 0; k < 6; ++k) avg[k] += sol.x(static_cast<Eigen::Index>(l)) * chosen[l][k];
    }
    double value = 0.0;
    for (std::size_t i = 0; i < 3; ++i) value += std::abs(avg[2 * i] + avg[2 * i + 1]);
    value /= 3.0;

    if (value > best.value) {
      best.value = value;
      best.model.lambdas = lambdas;
      best.model.weights.assign(sol.x.data(), sol.x.data() + sol.x.size());
      best.model.correlations = std::move(chosen);
      best.model.signs = signs;
    }
  }
  best.slack = best.bound - best.value;
  return best;
}

} // namespace nogo::leggett
