#include "nogo/hv_models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "nogo/random.hpp"

namespace nogo {

// ---------------------------------------------------------------------------
// Contexts and scenarios

MeasurementContext::MeasurementContext(std::vector<Projector> outcomes_, std::size_t focus_,
                                       std::uint32_t label_)
    : outcomes(std::move(outcomes_)), focus(focus_), label(label_) {
  if (outcomes.empty()) {
    throw ValidationError("measurement context needs at least one outcome");
  }
  if (focus >= outcomes.size()) {
    throw ValidationError("measurement context focus index out of range");
  }
  const auto d = static_cast<Eigen::Index>(outcomes.front().dim());
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < outcomes.size(); ++j) {
    if (outcomes[j].dim() != outcomes.front().dim()) {
      throw DimensionError("measurement context mixes projector dimensions");
    }
    sum += outcomes[j].matrix();
    for (std::size_t k = j + 1; k < outcomes.size(); ++k) {
      if (max_abs(outcomes[j].matrix() * outcomes[k].matrix()) > kTolerance) {
        throw ValidationError("measurement context outcomes are not orthogonal");
      }
    }
  }
  if (max_abs(sum - ComplexMatrix::Identity(d, d)) > kTolerance) {
    throw ValidationError("measurement context outcomes do not sum to the identity");
  }
}

MeasurementContext MeasurementContext::from_basis(const ComplexMatrix& unitary,
                                                  std::uint32_t label, std::size_t focus) {
  std::vector<Projector> outcomes;
  for (Eigen::Index k = 0; k < unitary.cols(); ++k) {
    outcomes.push_back(Projector::from_ket(unitary.col(k)));
  }
  return {std::move(outcomes), focus, label};
}

Scenario Scenario::all_pairs(std::vector<MeasurementContext> alice,
                             std::vector<MeasurementContext> bob) {
  Scenario s{std::move(alice), std::move(bob), {}};
  for (std::size_t i = 0; i < s.alice.size(); ++i)
    for (std::size_t j = 0; j < s.bob.size(); ++j) s.pairs.emplace_back(i, j);
  return s;
}

MeasurementContext qubit_context(const leggett::BlochVector& d, std::uint32_t label) {
  const ComplexMatrix n = d.x() * pauli_x() + d.y() * pauli_y() + d.z() * pauli_z();
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return {{Projector((id + n) / 2.0, 1), Projector((id - n) / 2.0, 1)}, 0, label};
}

leggett::BlochVector bloch_direction(const MeasurementContext& ctx) {
  if (ctx.dim() != 2 || ctx.size() != 2) {
    throw DimensionError("bloch_direction needs a two-outcome qubit context");
  }
  const ComplexMatrix& p = ctx.outcomes[0].matrix();
  // P = (1 + a.sigma)/2  =>  a_k = Tr(P sigma_k)
  return leggett::BlochVector::normalized((p * pauli_x()).trace().real(),
                                          (p * pauli_y()).trace().real(),
                                          (p * pauli_z()).trace().real());
}

std::vector<MeasurementContext> standard_contexts(std::size_t n, std::size_t random_bases,
                                                  std::uint64_t seed) {
  if (n < 2) {
    throw ValidationError("standard_contexts requires n >= 2");
  }
  const auto d = static_cast<Eigen::Index>(n);
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<MeasurementContext> out;
  std::uint32_t label = 0;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  out.push_back(MeasurementContext::from_basis(id, label++));

  if (n == 2) {
    out.push_back(qubit_context(leggett::BlochVector(1.0, 0.0, 0.0), label++));
    out.push_back(qubit_context(leggett::BlochVector(0.0, 1.0, 0.0), label++));
    ComplexMatrix swapped(2, 2);
    swapped << 0.0, 1.0, 1.0, 0.0;
    out.push_back(MeasurementContext::from_basis(swapped, label++));
  } else {
    ComplexMatrix u1 = id;
    u1.block(1, 1, 2, 2) << r, r, r, -r;
    out.push_back(MeasurementContext::from_basis(u1, label++));
    ComplexMatrix u2 = id;
    u2.block(0, 0, 2, 2) << r, r, r, -r;
    out.push_back(MeasurementContext::from_basis(u2, label++));
  }

  Rng rng = make_rng(seed, 0x63747873ULL);
  for (std::size_t k = 0; k < random_bases; ++k) {
    out.push_back(MeasurementContext::from_basis(random_unitary(n, rng), label++));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Models

void validate_weights(const std::vector<double>& weights) {
  if (weights.empty()) {
    throw ValidationError("hidden-variable space is empty");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("hidden-variable weights must be finite and non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw ValidationError("hidden-variable weights must sum to 1");
  }
}

namespace {

std::vector<double> uniform_weights(std::size_t count) {
  return std::vector<double>(count, 1.0 / static_cast<double>(count));
}

DensityOperator maximally_mixed(Dims dims) {
  const auto d = static_cast<Eigen::Index>(dims.total());
  return {dims, ComplexMatrix::Identity(d, d) / static_cast<double>(d)};
}

Eigen::MatrixXd flat_joint(const MeasurementContext& a, const MeasurementContext& b) {
  const auto na = static_cast<Eigen::Index>(a.size());
  const auto nb = static_cast<Eigen::Index>(b.size());
  return Eigen::MatrixXd::Constant(na, nb, 1.0 / static_cast<double>(na * nb));
}

} // namespace

QuantumTrivialModel::QuantumTrivialModel(DensityOperator rho, std::size_t hidden_count)
    : rho_(std::move(rho)), weights_(uniform_weights(std::max<std::size_t>(hidden_count, 1))) {}

Eigen::MatrixXd QuantumTrivialModel::joint(std::size_t /*lambda*/, const MeasurementContext& a,
                                           const MeasurementContext& b) const {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          born_joint(rho_, a.outcomes[j], b.outcomes[k]);
  return p;
}

LeggettModel::LeggettModel(std::vector<leggett::LeggettLambda> lambdas,
                           std::vector<double> weights, leggett::CorrelationFn correlation,
                           std::string family)
    : rho_(singlet()), lambdas_(std::move(lambdas)), weights_(std::move(weights)),
      correlation_(std::move(correlation)), family_(std::move(family)) {
  if (lambdas_.size() != weights_.size()) {
    throw DimensionError("Leggett model: one weight per hidden state required");
  }
  validate_weights(weights_);
}

LeggettModel LeggettModel::on_grid(std::size_t points, double eta,
                                   leggett::CorrelationFn correlation, std::uint64_t seed) {
  std::vector<leggett::LeggettLambda> lambdas;
  for (const auto& m : leggett::fibonacci_sphere(points, seed)) lambdas.emplace_back(m, -m, eta);
  const std::string family = eta < 1.0 ? "eta-leggett" : "leggett";
  return {std::move(lambdas), uniform_weights(points), std::move(correlation), family};
}

Eigen::MatrixXd LeggettModel::joint(std::size_t lambda, const MeasurementContext& a,
                                    const MeasurementContext& b) const {
  const leggett::BlochVector da = bloch_direction(a);
  const leggett::BlochVector db = bloch_direction(b);
  Eigen::MatrixXd p(2, 2);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      p(j, k) = leggett::leggett_joint(lambdas_[lambda], correlation_, da, db, j == 0 ? 1 : -1,
                                       k == 0 ? 1 : -1);
  return p;
}

PlantedSignallingModel::PlantedSignallingModel(Dims dims, double epsilon)
    : dims_(dims), epsilon_(epsilon), rho_(maximally_mixed(dims)), weights_{1.0} {
  if (dims.a < 2 || epsilon < 0.0 || epsilon > 1.0 / static_cast<double>(dims.a)) {
    throw ValidationError("planted signalling: need dim_a >= 2 and 0 <= epsilon <= 1/dim_a");
  }
}

Eigen::MatrixXd PlantedSignallingModel::joint(std::size_t /*lambda*/,
                                              const MeasurementContext& a,
                                              const MeasurementContext& b) const {
  Eigen::MatrixXd p = flat_joint(a, b);
  if (b.label != 0) {
    const double shift = epsilon_ / static_cast<double>(b.size());
    p.row(0).array() += shift;
    p.row(1).array() -= shift;
  }
  return p;
}

PlantedContextualJointModel::PlantedContextualJointModel(Dims dims, double epsilon)
    : dims_(dims), epsilon_(epsilon), rho_(maximally_mixed(dims)), weights_{1.0} {
  if (dims.a < 2 || dims.b < 2 || epsilon < 0.0 ||
      epsilon > 1.0 / static_cast<double>(dims.total())) {
    throw ValidationError(
        "planted contextual joint: need dims >= 2 and 0 <= epsilon <= 1/(dim_a dim_b)");
  }
}

Eigen::MatrixXd PlantedContextualJointModel::joint(std::size_t /*lambda*/,
                                                   const MeasurementContext& a,
                                                   const MeasurementContext& b) const {
  Eigen::MatrixXd p = flat_joint(a, b);
  if (b.label != 0) {
    p(0, 0) += epsilon_;
    p(1, 1) += epsilon_;
    p(0, 1) -= epsilon_;
    p(1, 0) -= epsilon_;
  }
  return p;
}

TabularModel::TabularModel(DensityOperator rho, std::vector<double> weights,
                           std::size_t alice_labels, std::size_t bob_labels)
    : rho_(std::move(rho)), weights_(std::move(weights)), alice_labels_(alice_labels),
      bob_labels_(bob_labels), table_(weights_.size() * alice_labels * bob_labels) {
  validate_weights(weights_);
}

std::size_t TabularModel::slot(std::size_t lambda, std::uint32_t a, std::uint32_t b) const {
  if (lambda >= weights_.size() || a >= alice_labels_ || b >= bob_labels_) {
    throw DimensionError("tabular model: index out of range");
  }
  return (lambda * alice_labels_ + a) * bob_labels_ + b;
}

void TabularModel::set(std::size_t lambda, std::uint32_t alice_label, std::uint32_t bob_label,
                       Eigen::MatrixXd probabilities) {
  const std::size_t k = slot(lambda, alice_label, bob_label);
  if (probabilities.size() == 0 || !probabilities.allFinite() ||
      probabilities.minCoeff() < -1e-12 || std::abs(probabilities.sum() - 1.0) > 1e-10) {
    throw ValidationError("tabular model: entry is not a probability distribution");
  }
  table_[k] = std::move(probabilities);
}

Eigen::MatrixXd TabularModel::joint(std::size_t lambda, const MeasurementContext& a,
                                    const MeasurementContext& b) const {
  const Eigen::MatrixXd& p = table_[slot(lambda, a.label, b.label)];
  if (p.rows() != static_cast<Eigen::Index>(a.size()) ||
      p.cols() != static_cast<Eigen::Index>(b.size())) {
    throw DimensionError("tabular model: missing or mis-shaped entry");
  }
  return p;
}

// ---------------------------------------------------------------------------
// Checkers

std::string condition_name(Condition c) {
  switch (c) {
  case Condition::OI: return "OI";
  case Condition::PI: return "PI";
  case Condition::CPI: return "CPI";
  case Condition::Reproduction: return "REPRODUCTION";
  case Condition::Triviality: return "TRIVIALITY";
  case Condition::MarginalNC: return "MARGINAL-NC";
  case Condition::JointNC: return "JOINT-NC";
  }
  return "UNKNOWN";
}

namespace {

// table[lambda][pair]
using ModelTable = std::vector<std::vector<Eigen::MatrixXd>>;

ModelTable tabulate(const HVModel& m, const Scenario& s) {
  validate_weights(m.weights());
  ModelTable table(m.hidden_count());
  for (std::size_t l = 0; l < m.hidden_count(); ++l) {
    table[l].reserve(s.pairs.size());
    for (const auto& [ia, ib] : s.pairs) {
      Eigen::MatrixXd p = m.joint(l, s.alice.at(ia), s.bob.at(ib));
      if (p.minCoeff() < -1e-12 || p.maxCoeff() > 1.0 + 1e-12) {
        throw ValidationError("model probability outside [0, 1]");
      }
      if (std::abs(p.sum() - 1.0) > 1e-10) {
        throw ValidationError("model outcome probabilities do not sum to 1");
      }
      table[l].push_back(std::move(p));
    }
  }
  return table;
}

// Identifies equal projectors across the contexts of one side.
std::vector<std::vector<std::size_t>> projector_ids(const std::vector<MeasurementContext>& ctxs) {
  std::vector<const Projector*> distinct;
  std::vector<std::vector<std::size_t>> ids(ctxs.size());
  for (std::size_t c = 0; c < ctxs.size(); ++c) {
    for (const auto& p : ctxs[c].outcomes) {
      std::size_t id = distinct.size();
      for (std::size_t k = 0; k < distinct.size(); ++k) {
        if (distinct[k]->dim() == p.dim() &&
            max_abs(distinct[k]->matrix() - p.matrix()) <= MeasurementContext::kTolerance) {
          id = k;
          break;
        }
      }
      if (id == distinct.size()) distinct.push_back(&p);
      ids[c].push_back(id);
    }
  }
  return ids;
}

// Tracks the extreme values of one quantity over a group; the spread is the
// largest pairwise difference.
struct SpreadTracker {
  double lo = 0.0;
  double hi = 0.0;
  Witness at_lo;
  Witness at_hi;
  std::size_t count = 0;

  void add(double v, const Witness& w) {
    if (count == 0 || v < lo) {
      lo = v;
      at_lo = w;
    }
    if (count == 0 || v > hi) {
      hi = v;
      at_hi = w;
    }
    ++count;
  }
};

class Worst {
public:
  Worst(Condition c, double tol) { report_.condition = c; report_.tolerance = tol; }

  void offer(double violation, const Witness& w) {
    // strict comparison keeps the first witness among ties
    if (!seen_ || violation > report_.violation) {
      report_.violation = violation;
      report_.witness = w;
      seen_ = true;
    }
  }

  void offer(const SpreadTracker& t) {
    if (t.count < 2) return;
    ++report_.comparisons;
    Witness w = t.at_hi;
    w.other_pair = t.at_lo.pair;
    offer(t.hi - t.lo, w);
  }

  ConditionReport& report() { return report_; }

  ConditionReport finish() {
    report_.passed = report_.violation <= report_.tolerance;
    return report_;
  }

private:
  ConditionReport report_;
  bool seen_ = false;
};

Eigen::VectorXd alice_marginal(const Eigen::MatrixXd& p) { return p.rowwise().sum(); }
Eigen::VectorXd bob_marginal(const Eigen::MatrixXd& p) { return p.colwise().sum().transpose(); }

Witness witness(std::size_t l, std::size_t pair, std::size_t j = Witness::kNone,
                std::size_t k = Witness::kNone) {
  Witness w;
  w.lambda = l;
  w.pair = pair;
  w.outcome_a = j;
  w.outcome_b = k;
  return w;
}

// Born-rule table shared by the reproduction and triviality checks.
std::vector<Eigen::MatrixXd> quantum_table(const HVModel& m, const Scenario& s) {
  QuantumTrivialModel q(m.state());
  std::vector<Eigen::MatrixXd> out;
  for (const auto& [ia, ib] : s.pairs) out.push_back(q.joint(0, s.alice.at(ia), s.bob.at(ib)));
  return out;
}

} // namespace

ConditionReport check_oi(const HVModel& m, const Scenario& s, double tol) {
  const ModelTable t = tabulate(m, s);
  Worst worst(Condition::OI, tol);
  for (std::size_t l = 0; l < t.size(); ++l) {
    for (std::size_t pi = 0; pi < s.pairs.size(); ++pi) {
      const Eigen::MatrixXd& p = t[l][pi];
      const Eigen::VectorXd pa = alice_marginal(p);
      const Eigen::VectorXd pb = bob_marginal(p);
      for (Eigen::Index j = 0; j < p.rows(); ++j)
        for (Eigen::Index k = 0; k < p.cols(); ++k) {
          ++worst.report().comparisons;
          worst.offer(std::abs(p(j, k) - pa(j) * pb(k)),
                      witness(l, pi, static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
        }
    }
  }
  return worst.finish();
}

namespace {

// Pair indices grouped by the context index on one side.
std::map<std::size_t, std::vector<std::size_t>> group_pairs(const Scenario& s, Side side) {
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t pi = 0; pi < s.pairs.size(); ++pi) {
    const auto [ia, ib] = s.pairs[pi];
    groups[side == Side::A ? ia : ib].push_back(pi);
  }
  return groups;
}

std::size_t far_context(const Scenario& s, std::size_t pair, Side near) {
  return near == Side::A ? s.pairs[pair].second : s.pairs[pair].first;
}

} // namespace

ConditionReport check_pi(const HVModel& m, const Scenario& s, double tol) {
  for (Side near : {Side::A, Side::B}) {
    for (const auto& [ctx, pairs] : group_pairs(s, near)) {
      std::set<std::size_t> partners;
      for (std::size_t pi : pairs) partners.insert(far_context(s, pi, near));
      if (partners.size() < 2) {
        throw InconclusiveCheck("PI: a context has fewer than two far-side contexts");
      }
    }
  }
  const ModelTable t = tabulate(m, s);
  Worst worst(Condition::PI, tol);
  for (std::size_t l = 0; l < t.size(); ++l) {
    for (Side near : {Side::A, Side::B}) {
      for (const auto& [ctx, pairs] : group_pairs(s, near)) {
        const std::size_t outcomes = near == Side::A ? s.alice[ctx].size() : s.bob[ctx].size();
        for (std::size_t j = 0; j < outcomes; ++j) {
          SpreadTracker tr;
          for (std::size_t pi : pairs) {
            const Eigen::VectorXd marg =
                near == Side::A ? alice_marginal(t[l][pi]) : bob_marginal(t[l][pi]);
            tr.add(marg(static_cast<Eigen::Index>(j)),
                   near == Side::A ? witness(l, pi, j) : witness(l, pi, Witness::kNone, j));
          }
          worst.offer(tr);
        }
      }
    }
  }
  return worst.finish();
}

ConditionReport check_cpi(const HVModel& m, const Scenario& s, double tol, double cond_floor) {
  const ModelTable t = tabulate(m, s);
  const auto alice_ids = projector_ids(s.alice);
  const auto bob_ids = projector_ids(s.bob);
  Worst worst(Condition::CPI, tol);

  for (Side near : {Side::A, Side::B}) {
    // (near context, far projector id) -> (pair, far outcome index)
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>>
        groups;
    for (std::size_t pi = 0; pi < s.pairs.size(); ++pi) {
      const auto [ia, ib] = s.pairs[pi];
      const std::size_t near_ctx = near == Side::A ? ia : ib;
      const auto& far_ids = near == Side::A ? bob_ids[ib] : alice_ids[ia];
      for (std::size_t k = 0; k < far_ids.size(); ++k) {
        groups[{near_ctx, far_ids[k]}].emplace_back(pi, k);
      }
    }

    for (std::size_t l = 0; l < t.size(); ++l) {
      for (const auto& [key, entries] : groups) {
        std::set<std::size_t> far_ctxs;
        for (const auto& e : entries) far_ctxs.insert(far_context(s, e.first, near));
        if (far_ctxs.size() < 2) continue;

        const std::size_t near_ctx = key.first;
        const std::size_t outcomes =
            near == Side::A ? s.alice[near_ctx].size() : s.bob[near_ctx].size();
        std::vector<SpreadTracker> trackers(outcomes);
        for (const auto& [pi, k] : entries) {
          const Eigen::MatrixXd& p = t[l][pi];
          const auto kk = static_cast<Eigen::Index>(k);
          const double cond = near == Side::A ? p.col(kk).sum() : p.row(kk).sum();
          if (cond < cond_floor) {
            ++worst.report().skipped;
            continue;
          }
          for (std::size_t j = 0; j < outcomes; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double joint = near == Side::A ? p(jj, kk) : p(kk, jj);
            trackers[j].add(joint / cond,
                            near == Side::A ? witness(l, pi, j, k) : witness(l, pi, k, j));
          }
        }
        for (const auto& tr : trackers) worst.offer(tr);
      }
    }
  }
  if (worst.report().comparisons == 0) {
    throw InconclusiveCheck("CPI: no far contexts share a projector with non-negligible "
                            "probability; nothing to compare");
  }
  return worst.finish();
}

ConditionReport check_reproduction(const HVModel& m, const Scenario& s, double tol) {
  const ModelTable t = tabulate(m, s);
  const auto q = quantum_table(m, s);
  const auto& w = m.weights();
  Worst worst(Condition::Reproduction, tol);
  for (std::size_t pi = 0; pi < s.pairs.size(); ++pi) {
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(q[pi].rows(), q[pi].cols());
    for (std::size_t l = 0; l < t.size(); ++l) avg += w[l] * t[l][pi];
    for (Eigen::Index j = 0; j < avg.rows(); ++j)
      for (Eigen::Index k = 0; k < avg.cols(); ++k) {
        ++worst.report().comparisons;
        Witness wit = witness(Witness::kNone, pi, static_cast<std::size_t>(j),
                              static_cast<std::size_t>(k));
        worst.offer(std::abs(avg(j, k) - q[pi](j, k)), wit);
      }
  }
  return worst.finish();
}

ConditionReport check_triviality(const HVModel& m, const Scenario& s, double tol) {
  const ModelTable t = tabulate(m, s);
  const auto q = quantum_table(m, s);
  Worst worst(Condition::Triviality, tol);
  for (std::size_t l = 0; l < t.size(); ++l)
    for (std::size_t pi = 0; pi < s.pairs.size(); ++pi)
      for (Eigen::Index j = 0; j < q[pi].rows(); ++j)
        for (Eigen::Index k = 0; k < q[pi].cols(); ++k) {
          ++worst.report().comparisons;
          worst.offer(std::abs(t[l][pi](j, k) - q[pi](j, k)),
                      witness(l, pi, static_cast<std::size_t>(j), static_cast<std::size_t>(k)));
        }
  return worst.finish();
}

ConditionReport check_marginal_noncontextuality(const HVModel& m, const Scenario& s, double tol) {
  const ModelTable t = tabulate(m, s);
  const auto alice_ids = projector_ids(s.alice);
  const auto bob_ids = projector_ids(s.bob);
  Worst worst(Condition::MarginalNC, tol);

  for (Side near : {Side::A, Side::B}) {
    std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> groups;
    for (std::size_t pi = 0; pi < s.pairs.size(); ++pi) {
      const auto [ia, ib] = s.pairs[pi];
      const auto& ids = near == Side::A ? alice_ids[ia] : bob_ids[ib];
      for (std::size_t j = 0; j < ids.size(); ++j) groups[ids[j]].emplace_back(pi, j);
    }
    for (std::size_t l = 0; l < t.size(); ++l) {
      for (const auto& [id, entries] : groups) {
        SpreadTracker tr;
        for (const auto& [pi, j] : entries) {
          const Eigen::VectorXd marg =
              near == Side::A ? alice_marginal(t[l][pi]) : bob_marginal(t[l][pi]);
          tr.add(marg(static_cast<Eigen::Index>(j)),
                 near == Side::A ? witness(l, pi, j) : witness(l, pi, Witness::kNone, j));
        }
        worst.offer(tr);
      }
    }
  }
  return worst.finish();
}

ConditionReport check_joint_noncontextuality(const HVModel& m, const Scenario& s, double tol) {
  const ModelTable t = tabulate(m, s);
  const auto alice_ids = projector_ids(s.alice);
  const auto bob_ids = projector_ids(s.bob);
  Worst worst(Condition::JointNC, tol);

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>>
      groups;
  for (std::size_t pi = 0; pi < s.pairs.size(); ++pi) {
    const auto [ia, ib] = s.pairs[pi];
    for (std::size_t j = 0; j < alice_ids[ia].size(); ++j)
      for (std::size_t k = 0; k < bob_ids[ib].size(); ++k)
        groups[{alice_ids[ia][j], bob_ids[ib][k]}].emplace_back(pi, j, k);
  }
  for (std::size_t l = 0; l < t.size(); ++l) {
    for (const auto& [key, entries] : groups) {
      SpreadTracker tr;
      for (const auto& [pi, j, k] : entries) {
        tr.add(t[l][pi](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)),
               witness(l, pi, j, k));
      }
      worst.offer(tr);
    }
  }
  return worst.finish();
}

} // namespace nogo
