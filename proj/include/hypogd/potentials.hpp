#pragma once

#include <Eigen/Core>

#include "hypogd/errors.hpp"

namespace hypogd {

/// Interpolation temperature of the hyperbolic-entropy potential.
struct HypentropyParams {
  double beta;
  explicit HypentropyParams(double beta);
};

/// p-norm potential exponents; q is the dual exponent, 1/p + 1/q = 1.
struct PNormParams {
  double p;
  double q;
  explicit PNormParams(double p);
};

enum class PotentialKind { hypentropy, squared_euclidean, entropy, pnorm };

/// A potential (regularizer) together with its mirror map, inverse mirror
/// map, second derivative and Fenchel conjugate.
///
/// hypentropy, squared_euclidean and entropy are sums of per-coordinate
/// scalar maps (value1/grad1/...); pnorm is not separable and exposes the
/// vector-level maps only.
class Potential {
public:
  static Potential hypentropy(double beta);
  static Potential squared_euclidean();
  static Potential entropy();
  static Potential pnorm(double p);

  PotentialKind kind() const { return kind_; }
  bool separable() const { return kind_ != PotentialKind::pnorm; }
  double beta() const;   // hypentropy only
  double p() const;      // pnorm only
  double q() const;      // pnorm only

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd mirror(const Eigen::VectorXd& x) const;
  Eigen::VectorXd mirror_inv(const Eigen::VectorXd& z) const;
  Eigen::VectorXd second_deriv(const Eigen::VectorXd& x) const;
  double conjugate(const Eigen::VectorXd& z) const;

  // scalar maps, separable kinds only
  double value1(double x) const;
  double grad1(double x) const;
  double grad_inv1(double z) const;
  double second1(double x) const;

private:
  Potential(PotentialKind kind, double beta, double p);
  PotentialKind kind_;
  double beta_ = 0.0;
  double p_ = 0.0;
  double q_ = 0.0;
};

// Hypentropy operations on vectors (free-function forms used by the
// algorithms; Potential::hypentropy delegates to these).
double hyp_value(const Eigen::VectorXd& x, const HypentropyParams& params);
Eigen::VectorXd hyp_grad(const Eigen::VectorXd& x, const HypentropyParams& params);
Eigen::VectorXd hyp_grad_inv(const Eigen::VectorXd& z, const HypentropyParams& params);
Eigen::VectorXd hyp_second_deriv(const Eigen::VectorXd& x, const HypentropyParams& params);
double hyp_conjugate(const Eigen::VectorXd& z, const HypentropyParams& params);

Eigen::VectorXd pnorm_mirror(const Eigen::VectorXd& w, const PNormParams& params);
Eigen::VectorXd pnorm_mirror_inv(const Eigen::VectorXd& z, const PNormParams& params);

/// D_phi(x || y) = phi(x) - phi(y) - <grad phi(y), x - y>, evaluated through
/// the closed form of each potential's divergence.
double bregman_div(const Potential& pot, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

/// Constraint sets with a closed-form hypentropy diameter bound.
enum class DiameterSet { l2_unit, l1_unit, trace_ball };

/// Upper bound on sup_x D(x || 0) over the set: 2/beta for the unit 2-ball,
/// log(3/beta) for the unit 1-ball (beta <= 1), tau*log(3*tau/beta) for the
/// trace ball (beta <= tau).
double diameter_bound(DiameterSet set, const HypentropyParams& params,
                      double tau = 0.0);

} // namespace hypogd
