#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hypogd/potentials.hpp"
#include "hypogd/projections.hpp"
#include "hypogd/spectral.hpp"

namespace hypogd {

/// Per-round loss oracle: (round, iterate) -> (loss value, gradient).
/// Oracles must be deterministic functions of (round, iterate, captured seed).
using VectorLossOracle =
    std::function<std::pair<double, Eigen::VectorXd>(int, const Eigen::VectorXd&)>;
using MatrixLossOracle =
    std::function<std::pair<double, Eigen::MatrixXd>(int, const WeightMatrix&)>;

struct OnlineProblem {
  ConstraintSet domain;
  int horizon = 0;
  int dim = 0;
  VectorLossOracle oracle;
  /// When the losses are linear (oracle gradients independent of the
  /// iterate), the exact comparator min_{w in set} <gbar, w> is used.
  bool linear_losses = false;
};

struct MatrixOnlineProblem {
  double trace_radius = 0.0; // 0 disables projection
  int horizon = 0;
  int rows = 0, cols = 0;
  MatrixLossOracle oracle;
  bool linear_losses = false;
};

/// Losses, gradients and regret bookkeeping for one run.
struct RegretLedger {
  std::vector<double> per_round_losses;
  Eigen::VectorXd cumulative_gradient;        // vector runs
  Eigen::MatrixXd cumulative_gradient_matrix; // matrix runs
  double comparator_loss = 0.0;
  std::vector<double> regret_curve; // filled per prefix for linear losses
  double final_regret() const {
    return regret_curve.empty() ? 0.0 : regret_curve.back();
  }
};

/// Tuned learning-rate rules. The theorem rules evaluate the paper's closed
/// forms; preconditions (beta >= 1 for the additive rate, beta <= 1 resp.
/// gamma <= 1 for the multiplicative ones) are enforced.
struct StepSizeRule {
  enum class Kind { fixed, theorem6, theorem7, theorem19 };
  Kind kind = Kind::fixed;
  double eta = 0.0;                        // fixed
  double grad_bound = 0.0;                 // G2 or Ginf
  double beta = 0.0, gamma = 0.0, tau = 0.0;
  int dim = 0, rows = 0, cols = 0;
  long horizon = 0;

  static StepSizeRule fixed(double eta);
  static StepSizeRule theorem6(double g2, double beta, long T);
  static StepSizeRule theorem7(double ginf, double beta, int d, long T);
  static StepSizeRule theorem19(double ginf, double gamma, double tau, int m,
                                int n, long T);
};

double tuned_eta(const StepSizeRule& rule);

/// Generic online mirror descent (dual step through the mirror map, then
/// Bregman projection). w1 = 0 for hypentropy / squared-Euclidean / p-norm
/// (their mirror maps vanish at 0); uniform point for entropy over the
/// simplex.
RegretLedger omd_run(const OnlineProblem& problem, const Potential& pot,
                     const StepSizeRule& rule);

/// SHU specialization over the trace-norm ball.
RegretLedger shu_run(const MatrixOnlineProblem& problem,
                     const HypentropyParams& params, const StepSizeRule& rule);

/// One unprojected HU step beta*sinh(asinh(w/beta) - eta*g).
Eigen::VectorXd hu_step(const Eigen::VectorXd& w, const Eigen::VectorXd& g,
                        double eta, const HypentropyParams& params);

/// argmin over the set of <gbar, w>; zero gradient returns the zero vector.
Eigen::VectorXd comparator_best_fixed(const ConstraintSet& set,
                                      const Eigen::VectorXd& gbar);
Eigen::MatrixXd comparator_best_fixed(double trace_radius,
                                      const Eigen::MatrixXd& gbar);

/// |D(x||z) - D(x||y) - D(y||z) + <grad(z)-grad(y), x-y>| (three-point identity).
double check_three_point(const Potential& pot, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const Eigen::VectorXd& z);

} // namespace hypogd
