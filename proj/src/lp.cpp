#include "nogo/lp.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace nogo::lp {

namespace {

// Row-major tableau [constraints | rhs] plus a separate reduced-cost row whose
// last entry holds minus the current objective.
class Tableau {
public:
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Tableau(Matrix t, Eigen::RowVectorXd cost, std::vector<Eigen::Index> basis)
      : t_(std::move(t)), cost_(std::move(cost)), basis_(std::move(basis)) {}

  Matrix& body() { return t_; }
  Eigen::RowVectorXd& cost() { return cost_; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  [[nodiscard]] Eigen::Index rhs_col() const { return t_.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index s) {
    t_.row(r) /= t_(r, s);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, s);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    const double f = cost_(s);
    if (f != 0.0) cost_ -= f * t_.row(r);
    basis_[static_cast<std::size_t>(r)] = s;
  }

  // Runs simplex iterations over columns [0, active_cols). Returns false when
  // the objective is unbounded below.
  bool optimize(Eigen::Index active_cols, const Options& opt, std::size_t& iterations) {
    std::size_t degenerate = 0;
    while (true) {
      if (iterations >= opt.max_iterations) {
        throw ConvergenceError("simplex exceeded " + std::to_string(opt.max_iterations) +
                               " iterations");
      }
      const bool bland = degenerate >= opt.degenerate_limit;

      Eigen::Index enter = -1;
      double best = -opt.tolerance;
      for (Eigen::Index j = 0; j < active_cols; ++j) {
        if (cost_(j) < best) {
          enter = j;
          if (bland) break;
          best = cost_(j);
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < t_.rows(); ++i) {
        const double aij = t_(i, enter);
        if (aij <= opt.tolerance) continue;
        const double q = t_(i, rhs_col()) / aij;
        if (q < ratio - 1e-12 ||
            (q <= ratio + 1e-12 && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          ratio = q;
          leave = i;
        }
      }
      if (leave < 0) return false;

      degenerate = ratio <= opt.tolerance ? degenerate + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
  }

private:
  Matrix t_;
  Eigen::RowVectorXd cost_;
  std::vector<Eigen::Index> basis_;
};

struct RawSolution {
  Solution solution;
  std::vector<Eigen::Index> rows;  // constraint rows kept after phase 1
  std::vector<Eigen::Index> basis; // basic column per kept row
};

RawSolution solve_with_rhs(const StandardForm& problem, const Eigen::VectorXd& rhs,
                           const Options& options) {
  const Eigen::Index m = problem.a.rows();
  const Eigen::Index n = problem.a.cols();

  // Phase 1: [A | I | b] with b >= 0, minimize the sum of artificials.
  Tableau::Matrix t = Tableau::Matrix::Zero(m, n + m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = rhs(i) < 0.0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * problem.a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * rhs(i);
  }
  Eigen::RowVectorXd phase1 = Eigen::RowVectorXd::Zero(n + m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    phase1.head(n) -= t.row(i).head(n);
    phase1(n + m) -= t(i, n + m);
  }
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  Tableau tab(std::move(t), std::move(phase1), std::move(basis));
  std::size_t iterations = 0;
  tab.optimize(n, options, iterations);

  const double scale = 1.0 + rhs.cwiseAbs().sum();
  if (-tab.cost()(n + m) > options.tolerance * scale) {
    throw InfeasibleError("linear program is infeasible (phase-1 residual " +
                          std::to_string(-tab.cost()(n + m)) + ")");
  }

  // Drive remaining artificials out of the basis; drop redundant rows.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < n) {
      keep.push_back(i);
      continue;
    }
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.body()(i, j)) > options.tolerance) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
      keep.push_back(i);
    }
  }

  // Phase 2 on the original columns.
  const auto rows = static_cast<Eigen::Index>(keep.size());
  Tableau::Matrix t2(rows, n + 1);
  std::vector<Eigen::Index> basis2(keep.size());
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index i = keep[static_cast<std::size_t>(r)];
    t2.row(r).head(n) = tab.body().row(i).head(n);
    t2(r, n) = tab.body()(i, n + m);
    basis2[static_cast<std::size_t>(r)] = tab.basis()[static_cast<std::size_t>(i)];
  }
  Eigen::RowVectorXd cost = Eigen::RowVectorXd::Zero(n + 1);
  cost.head(n) = problem.c.transpose();
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double cb = problem.c(basis2[static_cast<std::size_t>(r)]);
    if (cb != 0.0) cost -= cb * t2.row(r);
  }

  Tableau tab2(std::move(t2), std::move(cost), std::move(basis2));
  if (!tab2.optimize(n, options, iterations)) {
    throw UnboundedError("linear program is unbounded");
  }

  RawSolution raw;
  raw.solution.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < rows; ++r) {
    raw.solution.x(tab2.basis()[static_cast<std::size_t>(r)]) =
        std::max(0.0, tab2.body()(r, n));
  }
  raw.solution.objective = problem.c.dot(raw.solution.x);
  raw.solution.iterations = iterations;
  raw.rows = std::move(keep);
  raw.basis = tab2.basis();
  return raw;
}

// Re-solves B x_B = b for the final basis of a perturbed run. Reduced costs
// do not depend on b, so a non-negative x_B is optimal for the exact problem.
bool recover_exact(const StandardForm& problem, const RawSolution& raw, const Options& options,
                   Solution& out) {
  const auto k = static_cast<Eigen::Index>(raw.rows.size());
  if (k != problem.a.rows()) return false;
  Eigen::MatrixXd basis_cols(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    basis_cols.col(j) = problem.a.col(raw.basis[static_cast<std::size_t>(j)]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_cols);
  if (lu.rank() < k) return false;
  const Eigen::VectorXd xb = lu.solve(problem.b);
  const double scale = 1.0 + problem.b.cwiseAbs().maxCoeff();
  if (xb.minCoeff() < -options.tolerance * scale) return false;
  out.x = Eigen::VectorXd::Zero(problem.a.cols());
  for (Eigen::Index j = 0; j < k; ++j) {
    out.x(raw.basis[static_cast<std::size_t>(j)]) = std::max(0.0, xb(j));
  }
  if ((problem.a * out.x - problem.b).cwiseAbs().maxCoeff() > options.tolerance * scale) {
    return false;
  }
  out.objective = problem.c.dot(out.x);
  out.iterations = raw.solution.iterations;
  return true;
}

} // namespace

Solution solve(const StandardForm& problem, const Options& options) {
  const Eigen::Index m = problem.a.rows();
  const Eigen::Index n = problem.a.cols();
  if (problem.b.size() != m || problem.c.size() != n) {
    throw DimensionError("lp::solve: inconsistent problem dimensions");
  }

  if (options.perturbation > 0.0 && m > 0) {
    // Deterministic positive offsets break the ties of degenerate vertices.
    const double size = 1.0 + problem.b.cwiseAbs().maxCoeff();
    Eigen::VectorXd rhs = problem.b;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double u = std::fmod(0.6180339887498949 * static_cast<double>(i + 1), 1.0);
      rhs(i) += options.perturbation * size * (0.5 + 0.5 * u);
    }
    try {
      Solution out;
      if (recover_exact(problem, solve_with_rhs(problem, rhs, options), options, out)) {
        return out;
      }
    } catch (const InfeasibleError&) {
    } catch (const UnboundedError&) {
    }
  }
  return solve_with_rhs(problem, problem.b, options).solution;
}

} // namespace nogo::lp
