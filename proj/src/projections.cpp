#include "hypogd/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "hypogd/errors.hpp"
#include "hypogd/kernels.hpp"

namespace hypogd {

ConstraintSet ConstraintSet::l1_ball(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("l1_ball: radius must be positive");
  return {Kind::l1_ball, r};
}
ConstraintSet ConstraintSet::l2_ball(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("l2_ball: radius must be positive");
  return {Kind::l2_ball, r};
}
ConstraintSet ConstraintSet::simplex(double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("simplex: mass must be positive");
  return {Kind::simplex, mass};
}

bool ConstraintSet::contains(const Eigen::VectorXd& w, double slack) const {
  const double tol = slack * std::max(1.0, radius);
  switch (kind) {
    case Kind::unconstrained:
      return true;
    case Kind::l1_ball:
      return w.lpNorm<1>() <= radius + tol;
    case Kind::l2_ball:
      return w.norm() <= radius + tol;
    case Kind::simplex:
      return w.minCoeff() >= -tol && std::abs(w.sum() - radius) <= tol;
  }
  return false;
}

namespace detail {

Eigen::VectorXd hyp_l1_from_duals(const Eigen::VectorXd& duals, double beta,
                                  double radius, const RootFindConfig& cfg) {
  const Eigen::Index d = duals.size();
  const Eigen::ArrayXd mag = duals.array().abs();
  Eigen::ArrayXd clamped(d), sh(d), ch(d);

  // h(theta) = sum_i beta*sinh((|a_i|-theta)_+) is convex and decreasing, so
  // Newton from theta=0 approaches the root monotonically from the left; a
  // bisection bracket guards the floating-point corner cases.
  auto eval = [&](double theta, double& h, double& hp) {
    clamped = (mag - theta).max(0.0);
    const auto n = static_cast<std::size_t>(d);
    kernels::vsinh(clamped.data(), sh.data(), n);
    kernels::vcosh(clamped.data(), ch.data(), n);
    const double inactive = static_cast<double>((clamped == 0.0).count());
    h = beta * kernels::sum(sh.data(), n);
    hp = -beta * (kernels::sum(ch.data(), n) - inactive);
  };

  const double tol = std::max(cfg.abs_tolerance, 1e-15 * radius);
  double lo = 0.0, hi = mag.maxCoeff();
  double theta = 0.0, h = 0.0, hp = 0.0;
  eval(theta, h, hp);
  if (h <= radius + tol) {
    // already inside (caller normally checks first)
  } else {
    bool converged = false;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      if (std::abs(h - radius) <= tol) { converged = true; break; }
      if (h > radius) lo = theta; else hi = theta;
      double next = hp < 0.0 ? theta - (h - radius) / hp : 0.5 * (lo + hi);
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
      theta = next;
      eval(theta, h, hp);
      if (hi - lo <= 1e-16 * (1.0 + hi)) { converged = true; break; }
    }
    if (!converged && std::abs(h - radius) > tol)
      throw ConvergenceError("hypentropy L1 projection stalled", std::abs(h - radius));
  }

  Eigen::VectorXd w(d);
  for (Eigen::Index i = 0; i < d; ++i)
    w[i] = clamped[i] == 0.0 ? 0.0 : std::copysign(beta * sh[i], duals[i]);
  return w;
}

namespace {

// Per-coordinate root of asinh(w/beta) + lam*w = c, monotone in w.
double solve_coordinate(double c, double lam, double beta, double init) {
  if (c == 0.0) return 0.0;
  const double target_w = beta * std::sinh(std::min(std::abs(c), 700.0));
  const double lo = 0.0, hi = target_w; // root lies between 0 and |y|
  double w = std::min(std::max(std::abs(init), lo), hi);
  for (int it = 0; it < 64; ++it) {
    const double f = std::asinh(w / beta) + lam * w - std::abs(c);
    const double fp = 1.0 / std::sqrt(w * w + beta * beta) + lam;
    const double step = f / fp;
    double next = w - step;
    if (next < lo || next > hi) next = f > 0.0 ? 0.5 * (lo + w) : 0.5 * (w + hi);
    if (std::abs(step) <= 1e-16 * (1.0 + w)) { w = next; break; }
    w = next;
  }
  return std::copysign(w, c);
}

Eigen::VectorXd hyp_l2_project(const Eigen::VectorXd& y, double beta,
                               double radius, const RootFindConfig& cfg) {
  const Eigen::Index d = y.size();
  Eigen::VectorXd c(d);
  kernels::hyp_dual(y.data(), c.data(), static_cast<std::size_t>(d), beta);

  Eigen::VectorXd w = y;
  // s(lam) = ||w(lam)||_2 - radius is decreasing; dw_i/dlam = -w_i/(phi'' + lam)
  auto eval = [&](double lam, double& s, double& sp) {
    for (Eigen::Index i = 0; i < d; ++i)
      w[i] = solve_coordinate(c[i], lam, beta, w[i]);
    const double norm = w.norm();
    s = norm - radius;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
      acc += w[i] * (-w[i] / (1.0 / std::sqrt(w[i] * w[i] + beta * beta) + lam));
    sp = norm > 0.0 ? acc / norm : 0.0;
  };

  const double tol = std::max(cfg.abs_tolerance, 1e-15 * radius);
  double lo = 0.0, hi = 1.0, s = 0.0, sp = 0.0;
  eval(hi, s, sp);
  int expand = 0;
  while (s > 0.0 && expand++ < 200) {
    lo = hi;
    hi *= 2.0;
    eval(hi, s, sp);
  }
  double lam = hi;
  bool converged = std::abs(s) <= tol;
  for (int it = 0; it < cfg.max_iterations && !converged; ++it) {
    if (s > 0.0) lo = lam; else hi = lam;
    double next = sp < 0.0 ? lam - s / sp : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    lam = next;
    eval(lam, s, sp);
    converged = std::abs(s) <= tol || (hi - lo) <= 1e-16 * (1.0 + hi);
  }
  if (!converged)
    throw ConvergenceError("hypentropy L2 projection stalled", std::abs(s));
  return w;
}

} // namespace
} // namespace detail

Eigen::VectorXd euclidean_project(const ConstraintSet& set, const Eigen::VectorXd& y) {
  if (!y.allFinite())
    throw std::domain_error("euclidean_project: non-finite input");
  switch (set.kind) {
    case ConstraintSet::Kind::unconstrained:
      return y;
    case ConstraintSet::Kind::l2_ball: {
      const double n = y.norm();
      return n <= set.radius ? y : Eigen::VectorXd(y * (set.radius / n));
    }
    case ConstraintSet::Kind::l1_ball: {
      if (y.lpNorm<1>() <= set.radius) return y;
      // soft threshold: theta from the sorted magnitudes
      std::vector<double> mag(y.data(), y.data() + y.size());
      for (auto& v : mag) v = std::abs(v);
      std::sort(mag.begin(), mag.end(), std::greater<>());
      double prefix = 0.0, theta = 0.0;
      for (std::size_t k = 0; k < mag.size(); ++k) {
        prefix += mag[k];
        const double cand = (prefix - set.radius) / static_cast<double>(k + 1);
        if (k + 1 == mag.size() || mag[k + 1] <= cand) { theta = cand; break; }
      }
      Eigen::VectorXd w(y.size());
      for (Eigen::Index i = 0; i < y.size(); ++i)
        w[i] = std::copysign(std::max(std::abs(y[i]) - theta, 0.0), y[i]);
      return w;
    }
    case ConstraintSet::Kind::simplex: {
      std::vector<double> v(y.data(), y.data() + y.size());
      std::sort(v.begin(), v.end(), std::greater<>());
      double prefix = 0.0, theta = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) {
        prefix += v[k];
        const double cand = (prefix - set.radius) / static_cast<double>(k + 1);
        if (v[k] - cand > 0.0) theta = cand;
      }
      return (y.array() - theta).max(0.0).matrix();
    }
  }
  return y;
}

Eigen::VectorXd project(const Potential& pot, const ConstraintSet& set,
                        const Eigen::VectorXd& y, const RootFindConfig& cfg) {
  if (!y.allFinite()) throw std::domain_error("project: non-finite input");
  if (set.kind == ConstraintSet::Kind::unconstrained) return y;
  if (set.kind != ConstraintSet::Kind::simplex && set.contains(y, 0.0)) return y;

  switch (pot.kind()) {
    case PotentialKind::squared_euclidean:
      return euclidean_project(set, y);
    case PotentialKind::hypentropy: {
      const double beta = pot.beta();
      if (set.kind == ConstraintSet::Kind::l1_ball) {
        Eigen::VectorXd duals(y.size());
        kernels::hyp_dual(y.data(), duals.data(),
                          static_cast<std::size_t>(y.size()), beta);
        return detail::hyp_l1_from_duals(duals, beta, set.radius, cfg);
      }
      if (set.kind == ConstraintSet::Kind::l2_ball)
        return detail::hyp_l2_project(y, beta, set.radius, cfg);
      throw std::invalid_argument("project: hypentropy supports L1/L2 balls");
    }
    case PotentialKind::entropy: {
      if (set.kind != ConstraintSet::Kind::simplex)
        throw std::invalid_argument("project: entropy supports the simplex");
      if (y.minCoeff() <= 0.0)
        throw std::domain_error("project: entropy needs positive coordinates");
      return y * (set.radius / y.sum());
    }
    case PotentialKind::pnorm:
      throw std::invalid_argument(
          "project: the p-norm divergence has no closed-form ball projection; "
          "p-norm runs are unconstrained");
  }
  return y;
}

} // namespace hypogd
