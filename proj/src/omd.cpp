#include "hypogd/omd.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "hypogd/errors.hpp"
#include "hypogd/kernels.hpp"

namespace hypogd {

StepSizeRule StepSizeRule::fixed(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("StepSizeRule: eta must be positive");
  StepSizeRule r;
  r.kind = Kind::fixed;
  r.eta = eta;
  return r;
}

StepSizeRule StepSizeRule::theorem6(double g2, double beta, long T) {
  if (!(g2 > 0.0) || T < 1) throw std::invalid_argument("theorem6: bad parameters");
  if (beta < 1.0) throw std::invalid_argument("theorem6: requires beta >= 1");
  StepSizeRule r;
  r.kind = Kind::theorem6;
  r.grad_bound = g2;
  r.beta = beta;
  r.horizon = T;
  return r;
}

StepSizeRule StepSizeRule::theorem7(double ginf, double beta, int d, long T) {
  if (!(ginf > 0.0) || d < 1 || T < 1)
    throw std::invalid_argument("theorem7: bad parameters");
  if (beta > 1.0) throw std::invalid_argument("theorem7: requires beta <= 1");
  StepSizeRule r;
  r.kind = Kind::theorem7;
  r.grad_bound = ginf;
  r.beta = beta;
  r.dim = d;
  r.horizon = T;
  return r;
}

StepSizeRule StepSizeRule::theorem19(double ginf, double gamma, double tau,
                                     int m, int n, long T) {
  if (!(ginf > 0.0) || !(tau > 0.0) || m < 1 || n < 1 || T < 1)
    throw std::invalid_argument("theorem19: bad parameters");
  if (gamma > 1.0) throw std::invalid_argument("theorem19: requires gamma <= 1");
  StepSizeRule r;
  r.kind = Kind::theorem19;
  r.grad_bound = ginf;
  r.gamma = gamma;
  r.tau = tau;
  r.rows = m;
  r.cols = n;
  r.horizon = T;
  return r;
}

double tuned_eta(const StepSizeRule& rule) {
  switch (rule.kind) {
    case StepSizeRule::Kind::fixed:
      return rule.eta;
    case StepSizeRule::Kind::theorem6:
      return (1.0 / rule.grad_bound) *
             std::sqrt(1.0 / (rule.beta * (rule.beta + 1.0) *
                              static_cast<double>(rule.horizon)));
    case StepSizeRule::Kind::theorem7:
      return (1.0 / rule.grad_bound) *
             std::sqrt(std::log(3.0 / rule.beta) /
                       (2.0 * static_cast<double>(rule.horizon) *
                        (1.0 + rule.beta * rule.dim)));
    case StepSizeRule::Kind::theorem19: {
      const int l = std::min(rule.rows, rule.cols);
      return (1.0 / (2.0 * rule.grad_bound)) *
             std::sqrt(std::log(3.0 / rule.gamma) /
                       (static_cast<double>(rule.horizon) * (1.0 + rule.gamma * l)));
    }
  }
  return 0.0;
}

Eigen::VectorXd hu_step(const Eigen::VectorXd& w, const Eigen::VectorXd& g,
                        double eta, const HypentropyParams& params) {
  if (w.size() != g.size()) throw std::invalid_argument("hu_step: size mismatch");
  Eigen::VectorXd out(w.size());
  const double max_dual = kernels::hu_update(
      w.data(), g.data(), out.data(), static_cast<std::size_t>(w.size()), eta,
      params.beta);
  if (max_dual > OverflowGuardError::kGuard) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double z = std::asinh(w[i] / params.beta) - eta * g[i];
      if (std::abs(z) > OverflowGuardError::kGuard)
        throw OverflowGuardError(static_cast<std::size_t>(i), z);
    }
  }
  return out;
}

Eigen::VectorXd comparator_best_fixed(const ConstraintSet& set,
                                      const Eigen::VectorXd& gbar) {
  if (gbar.isZero(0.0)) return Eigen::VectorXd::Zero(gbar.size());
  switch (set.kind) {
    case ConstraintSet::Kind::l2_ball:
      return -set.radius / gbar.norm() * gbar;
    case ConstraintSet::Kind::l1_ball: {
      Eigen::Index j = 0;
      double best = -1.0;
      for (Eigen::Index i = 0; i < gbar.size(); ++i) {
        if (std::abs(gbar[i]) > best) { // strict: lowest index wins ties
          best = std::abs(gbar[i]);
          j = i;
        }
      }
      Eigen::VectorXd w = Eigen::VectorXd::Zero(gbar.size());
      w[j] = -set.radius * (gbar[j] > 0.0 ? 1.0 : -1.0);
      return w;
    }
    case ConstraintSet::Kind::simplex: {
      Eigen::Index j = 0;
      gbar.minCoeff(&j);
      Eigen::VectorXd w = Eigen::VectorXd::Zero(gbar.size());
      w[j] = set.radius;
      return w;
    }
    case ConstraintSet::Kind::unconstrained:
      throw std::invalid_argument(
          "comparator_best_fixed: unbounded on an unconstrained domain");
  }
  return Eigen::VectorXd::Zero(gbar.size());
}

Eigen::MatrixXd comparator_best_fixed(double trace_radius,
                                      const Eigen::MatrixXd& gbar) {
  if (gbar.isZero(0.0)) return Eigen::MatrixXd::Zero(gbar.rows(), gbar.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gbar,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  return -trace_radius * svd.matrixU().col(0) * svd.matrixV().col(0).transpose();
}

namespace {

double linear_comparator_loss(const ConstraintSet& set, const Eigen::VectorXd& gbar) {
  switch (set.kind) {
    case ConstraintSet::Kind::l2_ball:
      return -set.radius * gbar.norm();
    case ConstraintSet::Kind::l1_ball:
      return -set.radius * gbar.lpNorm<Eigen::Infinity>();
    case ConstraintSet::Kind::simplex:
      return set.radius * gbar.minCoeff();
    case ConstraintSet::Kind::unconstrained:
      throw std::invalid_argument("linear comparator needs a bounded domain");
  }
  return 0.0;
}

Eigen::VectorXd initial_iterate(const Potential& pot, const ConstraintSet& set, int d) {
  if (pot.kind() == PotentialKind::entropy) {
    if (set.kind != ConstraintSet::Kind::simplex)
      throw std::invalid_argument("entropy OMD runs over the simplex");
    return Eigen::VectorXd::Constant(d, set.radius / d);
  }
  // mirror maps of the other potentials vanish at the origin, so 0 is the
  // divergence minimizer of every centrally symmetric set
  return Eigen::VectorXd::Zero(d);
}

} // namespace

RegretLedger omd_run(const OnlineProblem& problem, const Potential& pot,
                     const StepSizeRule& rule) {
  if (problem.horizon < 1 || problem.dim < 1)
    throw std::invalid_argument("omd_run: bad problem shape");
  const double eta = tuned_eta(rule);
  const int T = problem.horizon;

  RegretLedger ledger;
  ledger.per_round_losses.reserve(T);
  ledger.cumulative_gradient = Eigen::VectorXd::Zero(problem.dim);
  if (problem.linear_losses) ledger.regret_curve.reserve(T);

  Eigen::VectorXd w = initial_iterate(pot, problem.domain, problem.dim);
  double cumulative_loss = 0.0;
  for (int t = 0; t < T; ++t) {
    auto [loss, g] = problem.oracle(t, w);
    ledger.per_round_losses.push_back(loss);
    cumulative_loss += loss;
    ledger.cumulative_gradient += g;

    if (problem.linear_losses) {
      ledger.comparator_loss =
          linear_comparator_loss(problem.domain, ledger.cumulative_gradient);
      ledger.regret_curve.push_back(cumulative_loss - ledger.comparator_loss);
    }

    Eigen::VectorXd dual = pot.mirror(w);
    kernels::axpy(-eta, g.data(), dual.data(), static_cast<std::size_t>(dual.size()));
    if (pot.kind() == PotentialKind::hypentropy ||
        pot.kind() == PotentialKind::entropy) {
      const double m = kernels::max_abs(dual.data(), static_cast<std::size_t>(dual.size()));
      if (m > OverflowGuardError::kGuard) {
        Eigen::Index j = 0;
        dual.cwiseAbs().maxCoeff(&j);
        throw OverflowGuardError(static_cast<std::size_t>(j), dual[j]);
      }
    }
    const Eigen::VectorXd y = pot.mirror_inv(dual);
    w = project(pot, problem.domain, y);
  }
  return ledger;
}

RegretLedger shu_run(const MatrixOnlineProblem& problem,
                     const HypentropyParams& params, const StepSizeRule& rule) {
  if (problem.horizon < 1 || problem.rows < 1 || problem.cols < 1)
    throw std::invalid_argument("shu_run: bad problem shape");
  const double eta = tuned_eta(rule);
  const int T = problem.horizon;

  RegretLedger ledger;
  ledger.per_round_losses.reserve(T);
  ledger.cumulative_gradient_matrix =
      Eigen::MatrixXd::Zero(problem.rows, problem.cols);
  if (problem.linear_losses) ledger.regret_curve.reserve(T);

  WeightMatrix w(Eigen::MatrixXd::Zero(problem.rows, problem.cols));
  double cumulative_loss = 0.0;
  for (int t = 0; t < T; ++t) {
    auto [loss, g] = problem.oracle(t, w);
    ledger.per_round_losses.push_back(loss);
    cumulative_loss += loss;
    ledger.cumulative_gradient_matrix += g;

    if (problem.linear_losses) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(ledger.cumulative_gradient_matrix);
      ledger.comparator_loss =
          -problem.trace_radius * svd.singularValues()[0];
      ledger.regret_curve.push_back(cumulative_loss - ledger.comparator_loss);
    }

    WeightMatrix half = shu_step(w, g, eta, params);
    w = problem.trace_radius > 0.0
            ? project_trace_ball(half, problem.trace_radius, params)
            : std::move(half);
  }
  return ledger;
}

double check_three_point(const Potential& pot, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  const double lhs = bregman_div(pot, x, z);
  const double rhs = bregman_div(pot, x, y) + bregman_div(pot, y, z) -
                     (pot.mirror(z) - pot.mirror(y)).dot(x - y);
  return std::abs(lhs - rhs);
}

} // namespace hypogd
