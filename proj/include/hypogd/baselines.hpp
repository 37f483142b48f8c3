#pragma once

#include <Eigen/Core>

#include "hypogd/potentials.hpp"
#include "hypogd/projections.hpp"

namespace hypogd {

/// EG+- state: doubled positive/negative weights with w = u - v. The weights
/// are kept in log domain; exp(-eta*gbar) spans hundreds of orders of
/// magnitude over long horizons.
struct EgpmState {
  Eigen::VectorXd log_u, log_v;
  double beta = 0.0;
  Eigen::VectorXd cumulative_gradient;

  static EgpmState init(int d, double beta);

  Eigen::VectorXd u() const { return log_u.array().exp(); }
  Eigen::VectorXd v() const { return log_v.array().exp(); }
  /// u - v evaluated without cancellation.
  Eigen::VectorXd weights() const;
  /// ||(u, v)||_1
  double mass() const;
};

/// Multiplicative update then normalization of the total mass to beta*d.
EgpmState egpm_step(const EgpmState& state, const Eigen::VectorXd& g, double eta);

/// Multiplicative update only; conserves u_i*v_i = beta^2/4 per coordinate.
EgpmState egpm_unnormalized_step(const EgpmState& state, const Eigen::VectorXd& g,
                                 double eta);

/// Adaptive-beta HU: maps through the previous round's mirror, subtracts the
/// gradient, and maps back through the new beta_t = beta*d / sum cosh(eta*gbar).
struct AdaptiveBetaState {
  Eigen::VectorXd w;
  double beta_t = 0.0;
  Eigen::VectorXd cumulative_gradient;

  static AdaptiveBetaState init(int d, double beta);
};

AdaptiveBetaState adaptive_hu_step(const AdaptiveBetaState& state,
                                   const Eigen::VectorXd& g, double eta,
                                   double beta, int d);

/// Dual step through the p-norm mirror, inverse through the q-exponent map.
Eigen::VectorXd pnorm_step(const Eigen::VectorXd& w, const Eigen::VectorXd& g,
                           double eta, const PNormParams& params);
/// Same maps applied to singular values through the SVD.
Eigen::MatrixXd schatten_pnorm_step(const Eigen::MatrixXd& w,
                                    const Eigen::MatrixXd& g, double eta,
                                    const PNormParams& params);

Eigen::VectorXd gd_step(const Eigen::VectorXd& w, const Eigen::VectorXd& g,
                        double eta);
Eigen::VectorXd gd_step(const Eigen::VectorXd& w, const Eigen::VectorXd& g,
                        double eta, const ConstraintSet& set);

} // namespace hypogd
