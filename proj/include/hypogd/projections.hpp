#pragma once

#include <Eigen/Core>

#include "hypogd/potentials.hpp"

namespace hypogd {

struct ConstraintSet {
  enum class Kind { unconstrained, l1_ball, l2_ball, simplex };

  Kind kind = Kind::unconstrained;
  double radius = 0.0; // ball radius or simplex mass

  static ConstraintSet unconstrained() { return {Kind::unconstrained, 0.0}; }
  static ConstraintSet l1_ball(double r);
  static ConstraintSet l2_ball(double r);
  static ConstraintSet simplex(double mass);

  bool contains(const Eigen::VectorXd& w, double slack = 1e-10) const;
};

struct RootFindConfig {
  double abs_tolerance = 1e-12;
  int max_iterations = 200;
};

/// Bregman projection argmin_{w in set} D_pot(w || y). Returns y unchanged
/// when it is already feasible.
///
/// Supported pairs: any potential with Unconstrained; hypentropy with
/// L1Ball/L2Ball; squared_euclidean with any set (reduces to
/// euclidean_project); entropy with Simplex (multiplicative normalization).
/// The p-norm divergence has no closed-form ball projection and is rejected.
Eigen::VectorXd project(const Potential& pot, const ConstraintSet& set,
                        const Eigen::VectorXd& y, const RootFindConfig& cfg = {});

/// Nearest point of the set in the 2-norm.
Eigen::VectorXd euclidean_project(const ConstraintSet& set, const Eigen::VectorXd& y);

namespace detail {
/// Hypentropy L1 soft-threshold given precomputed duals a_i = asinh(y_i/beta):
/// w_i = beta*sinh((|a_i|-theta)_+)*sign(a_i) with ||w(theta)||_1 = radius.
Eigen::VectorXd hyp_l1_from_duals(const Eigen::VectorXd& duals, double beta,
                                  double radius, const RootFindConfig& cfg);
} // namespace detail

} // namespace hypogd
