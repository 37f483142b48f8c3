#include "hypogd/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hypogd/baselines.hpp"
#include "hypogd/omd.hpp"
#include "hypogd/potentials.hpp"
#include "hypogd/projections.hpp"
#include "hypogd/rng.hpp"
#include "hypogd/spectral.hpp"

namespace hypogd {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Collector {
  std::vector<PropertyResult> results;

  /// pass iff observed <= tol; slack = tol - observed
  void upper(const std::string& name, double observed, double tol) {
    results.push_back({name, observed <= tol, tol - observed,
                       "observed " + fmt(observed) + ", tol " + fmt(tol)});
  }
  /// pass iff observed >= bound; slack = observed - bound
  void lower(const std::string& name, double observed, double bound) {
    results.push_back({name, observed >= bound, observed - bound,
                       "observed " + fmt(observed) + ", bound " + fmt(bound)});
  }
  void count_zero(const std::string& name, int violations, double min_slack) {
    results.push_back({name, violations == 0, min_slack,
                       std::to_string(violations) + " violations, min slack " +
                           fmt(min_slack)});
  }
};

Eigen::VectorXd random_vec(Rng& rng, int d, double lo, double hi) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

Eigen::VectorXd random_in_l2(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  v *= std::pow(rng.uniform01(), 1.0 / d) / v.norm();
  return v;
}

Eigen::VectorXd random_in_l1(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.normal();
  v *= rng.uniform01() / v.lpNorm<1>();
  return v;
}

Eigen::MatrixXd random_mat(Rng& rng, int m, int n) {
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  return a;
}

Eigen::MatrixXd random_orthogonal(Rng& rng, int d) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_mat(rng, d, d));
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  return q;
}

double rel_err(double a, double b) {
  const double den = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / den;
}

double max_rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, rel_err(a[i], b[i]));
  return m;
}

double normwise_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double den = std::max({a.lpNorm<Eigen::Infinity>(),
                               b.lpNorm<Eigen::Infinity>(), 1e-300});
  return (a - b).lpNorm<Eigen::Infinity>() / den;
}

// ---------------------------------------------------------------------------
// potentials

void verify_potentials(Collector& col, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 101);

  { // mutual inverse pair, all betas
    double worst = 0.0;
    for (double beta : {0.01, 1.0, 100.0}) {
      const HypentropyParams params(beta);
      for (int trial = 0; trial < 100; ++trial) {
        const Eigen::VectorXd x = random_vec(rng, 16, -5.0, 5.0);
        worst = std::max(worst, max_rel_err(hyp_grad_inv(hyp_grad(x, params), params), x));
      }
    }
    col.upper("potentials/inverse_pair", worst, 1e-12);
  }

  { // gradient vs central finite differences, step 1e-5
    double worst = 0.0;
    const double h = 1e-5;
    for (double beta : {0.01, 1.0, 100.0}) {
      const HypentropyParams params(beta);
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd x = random_vec(rng, 8, -2.0, 2.0);
        const Eigen::VectorXd g = hyp_grad(x, params);
        const int i = static_cast<int>(rng.uniform_int(8));
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (hyp_value(xp, params) - hyp_value(xm, params)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - g[i]));
      }
    }
    col.upper("potentials/grad_finite_diff", worst, 1e-6);
  }

  { // second derivative range (0, 1/beta]
    double worst = -std::numeric_limits<double>::infinity();
    for (double beta : {0.02, 1.0, 30.0}) {
      const HypentropyParams params(beta);
      for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd x = random_vec(rng, 8, -10.0, 10.0);
        const Eigen::VectorXd s = hyp_second_deriv(x, params);
        worst = std::max(worst, s.maxCoeff() - 1.0 / beta);
        if (s.minCoeff() <= 0.0) worst = std::max(worst, 1.0);
      }
    }
    col.upper("potentials/second_deriv_range", worst, 0.0);
  }

  { // Lemma: (1+beta)^-1 strong convexity over B2
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (double beta : {0.1, 1.0, 10.0}) {
      const HypentropyParams params(beta);
      for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::VectorXd x = random_in_l2(rng, 20);
        const double slack =
            hyp_second_deriv(x, params).minCoeff() - 1.0 / (1.0 + beta);
        min_slack = std::min(min_slack, slack);
        if (slack < 0.0) ++violations;
      }
    }
    col.count_zero("potentials/strong_convexity_l2", violations, min_slack);
  }

  { // Lemma: (1+beta*d)^-1 strong convexity over B1
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    const int d = 20;
    for (double beta : {0.02, 0.5}) {
      const HypentropyParams params(beta);
      for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::VectorXd x = random_in_l1(rng, d);
        Eigen::VectorXd y = random_vec(rng, d, -1.0, 1.0);
        y /= y.lpNorm<1>();
        const Eigen::VectorXd h = hyp_second_deriv(x, params);
        const double quad = (y.array().square() * h.array()).sum();
        const double slack = quad - 1.0 / (1.0 + beta * d);
        min_slack = std::min(min_slack, slack);
        if (slack < 0.0) ++violations;
      }
    }
    col.count_zero("potentials/strong_convexity_l1", violations, min_slack);
  }

  { // divergence nonnegativity + identity of indiscernibles
    double worst = 0.0;
    const Potential pots[] = {Potential::hypentropy(0.7), Potential::squared_euclidean(),
                              Potential::entropy(), Potential::pnorm(5.4)};
    for (const Potential& pot : pots) {
      const bool positive = pot.kind() == PotentialKind::entropy;
      for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd x = positive ? random_vec(rng, 6, 0.05, 3.0)
                                           : random_vec(rng, 6, -3.0, 3.0);
        const Eigen::VectorXd y = positive ? random_vec(rng, 6, 0.05, 3.0)
                                           : random_vec(rng, 6, -3.0, 3.0);
        worst = std::max(worst, -bregman_div(pot, x, y));
        worst = std::max(worst, std::abs(bregman_div(pot, x, x)));
      }
    }
    col.upper("potentials/divergence_nonneg", worst, 1e-12);
  }

  { // closed-form divergence vs definitional three-term expansion
    double worst = 0.0;
    const Potential pot = Potential::hypentropy(1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::VectorXd x = random_vec(rng, 6, -3.0, 3.0);
      const Eigen::VectorXd y = random_vec(rng, 6, -3.0, 3.0);
      const double definitional =
          pot.value(x) - pot.value(y) - pot.mirror(y).dot(x - y);
      worst = std::max(worst, std::abs(bregman_div(pot, x, y) - definitional));
    }
    col.upper("potentials/divergence_crosscheck", worst, 1e-12);
  }

  { // diameter bounds, Eqs. for B2 and B1
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (double beta : {0.1, 0.9}) {
      const HypentropyParams params(beta);
      const Potential pot = Potential::hypentropy(beta);
      const double bound2 = diameter_bound(DiameterSet::l2_unit, params);
      const double bound1 = diameter_bound(DiameterSet::l1_unit, params);
      for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::VectorXd x2 = random_in_l2(rng, 12);
        const Eigen::VectorXd x1 = random_in_l1(rng, 12);
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(12);
        const double s2 = bound2 - bregman_div(pot, x2, zero);
        const double s1 = bound1 - bregman_div(pot, x1, zero);
        min_slack = std::min({min_slack, s1, s2});
        if (s1 < 0.0 || s2 < 0.0) ++violations;
      }
    }
    col.count_zero("potentials/diameter_bounds", violations, min_slack);
  }

  { // GD limit: beta >> x
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd x = random_vec(rng, 8, -2.0, 2.0);
      const double beta = 1e4 * x.lpNorm<Eigen::Infinity>() * rng.uniform(1.0, 10.0);
      const HypentropyParams params(beta);
      const Eigen::VectorXd g = hyp_grad(x, params);
      const double err = (g - x / beta).lpNorm<Eigen::Infinity>();
      worst = std::max(worst, err / (1e-6 * x.lpNorm<Eigen::Infinity>() / beta));
    }
    col.upper("potentials/gd_limit", worst, 1.0);
  }

  { // EG limit: beta << x, positive orthant
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd x = random_vec(rng, 8, 0.5, 3.0);
      const double beta = 1e-4 * x.minCoeff() * rng.uniform(0.1, 1.0);
      const HypentropyParams params(beta);
      const Eigen::VectorXd g = hyp_grad(x, params);
      for (int i = 0; i < 8; ++i)
        worst = std::max(worst, std::abs(g[i] - std::log(2.0 * x[i] / beta)));
    }
    col.upper("potentials/eg_limit", worst, 1e-6);
  }

  { // Fenchel-Young: gap >= 0 with equality at z = grad(x); the beta*cosh
    // convention makes the constant offset phi*(0) + phi(0) identically 0
    double worst_gap = 0.0, worst_eq = 0.0;
    const HypentropyParams params(0.8);
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::VectorXd x = random_vec(rng, 6, -3.0, 3.0);
      const Eigen::VectorXd z = random_vec(rng, 6, -3.0, 3.0);
      const double gap = hyp_value(x, params) + hyp_conjugate(z, params) - x.dot(z);
      worst_gap = std::max(worst_gap, -gap);
      const Eigen::VectorXd zstar = hyp_grad(x, params);
      const double eq =
          hyp_value(x, params) + hyp_conjugate(zstar, params) - x.dot(zstar);
      worst_eq = std::max(worst_eq, std::abs(eq));
    }
    col.upper("potentials/fenchel_young_gap", worst_gap, 1e-12);
    col.upper("potentials/fenchel_young_equality", worst_eq, 1e-12);
  }

  { // p-norm mirror / inverse are mutual inverses (p = 5.4)
    double worst = 0.0;
    const PNormParams params(5.4);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd w = random_vec(rng, 10, -2.0, 2.0);
      worst = std::max(worst,
                       max_rel_err(pnorm_mirror_inv(pnorm_mirror(w, params), params), w));
    }
    col.upper("potentials/pnorm_roundtrip", worst, 1e-9);
  }
}

// ---------------------------------------------------------------------------
// projections

void verify_projections(Collector& col, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 202);
  const int d = 8;

  struct Case {
    Potential pot;
    ConstraintSet set;
  };
  const Case cases[] = {
      {Potential::hypentropy(0.1), ConstraintSet::l1_ball(1.0)},
      {Potential::hypentropy(1.0), ConstraintSet::l1_ball(2.5)},
      {Potential::hypentropy(0.5), ConstraintSet::l2_ball(1.0)},
      {Potential::hypentropy(2.0), ConstraintSet::l2_ball(0.7)},
      {Potential::squared_euclidean(), ConstraintSet::l1_ball(1.0)},
      {Potential::squared_euclidean(), ConstraintSet::l2_ball(1.0)},
  };

  double worst_feas = 0.0, worst_idem = 0.0, worst_opt = 0.0, worst_pyth = 0.0;
  for (const Case& c : cases) {
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd y = random_vec(rng, d, -3.0, 3.0);
      const Eigen::VectorXd w = project(c.pot, c.set, y);

      const double feas = c.set.kind == ConstraintSet::Kind::l1_ball
                              ? w.lpNorm<1>() - c.set.radius
                              : w.norm() - c.set.radius;
      worst_feas = std::max(worst_feas, feas);

      worst_idem = std::max(
          worst_idem, (project(c.pot, c.set, w) - w).lpNorm<Eigen::Infinity>());

      if (!c.set.contains(y, 0.0)) {
        const double dw = bregman_div(c.pot, w, y);
        for (int cand = 0; cand < 1000; ++cand) {
          Eigen::VectorXd f = random_vec(rng, d, -1.0, 1.0);
          f *= c.set.radius * rng.uniform01() /
               (c.set.kind == ConstraintSet::Kind::l1_ball ? f.lpNorm<1>() : f.norm());
          worst_opt = std::max(worst_opt, dw - bregman_div(c.pot, f, y));
        }
        // generalized Pythagorean inequality at sampled feasible z
        for (int cand = 0; cand < 50; ++cand) {
          Eigen::VectorXd z = random_vec(rng, d, -1.0, 1.0);
          z *= c.set.radius * rng.uniform01() /
               (c.set.kind == ConstraintSet::Kind::l1_ball ? z.lpNorm<1>() : z.norm());
          const double lhs = bregman_div(c.pot, z, y);
          const double rhs = bregman_div(c.pot, z, w) + bregman_div(c.pot, w, y);
          worst_pyth = std::max(worst_pyth, rhs - lhs);
        }
      }
    }
  }
  col.upper("projections/feasibility", worst_feas, 1e-10);
  col.upper("projections/idempotence", worst_idem, 1e-10);
  col.upper("projections/sampled_optimality", worst_opt, 1e-8);
  col.upper("projections/pythagorean", worst_pyth, 1e-8);

  { // KKT structure of the hypentropy L1 projection: one theta fits all
    double worst = 0.0;
    const double beta = 0.3;
    const Potential pot = Potential::hypentropy(beta);
    const ConstraintSet set = ConstraintSet::l1_ball(1.0);
    const HypentropyParams params(beta);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd y = random_vec(rng, d, -3.0, 3.0);
      if (set.contains(y, 0.0)) continue;
      const Eigen::VectorXd w = project(pot, set, y);
      double theta = -1.0;
      for (int i = 0; i < d; ++i) {
        if (w[i] == 0.0) continue;
        const double ti = (std::asinh(y[i] / beta) - std::asinh(w[i] / beta)) /
                          (w[i] > 0.0 ? 1.0 : -1.0);
        if (theta < 0.0) theta = ti;
        worst = std::max(worst, std::abs(ti - theta));
        worst = std::max(worst, -ti); // theta must be >= 0
      }
    }
    col.upper("projections/l1_kkt_structure", worst, 1e-8);
  }

  { // euclidean projections: KKT residual of the L1 soft threshold
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::VectorXd y = random_vec(rng, d, -2.0, 2.0);
      const ConstraintSet set = ConstraintSet::l1_ball(1.0);
      const Eigen::VectorXd w = euclidean_project(set, y);
      if (y.lpNorm<1>() <= 1.0) {
        worst = std::max(worst, (w - y).lpNorm<Eigen::Infinity>());
        continue;
      }
      worst = std::max(worst, std::abs(w.lpNorm<1>() - 1.0));
      double theta = -1.0;
      for (int i = 0; i < d; ++i) {
        if (w[i] == 0.0) continue;
        const double ti = std::abs(y[i]) - std::abs(w[i]);
        if (theta < 0.0) theta = ti;
        worst = std::max(worst, std::abs(ti - theta));
      }
    }
    col.upper("projections/euclidean_l1_kkt", worst, 1e-10);
  }

  { // entropy projection onto the simplex is plain rescaling
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd y = random_vec(rng, d, 0.01, 4.0);
      const Eigen::VectorXd w =
          project(Potential::entropy(), ConstraintSet::simplex(1.0), y);
      worst = std::max(worst, (w - y / y.sum()).lpNorm<Eigen::Infinity>());
      worst = std::max(worst, std::abs(w.sum() - 1.0));
    }
    col.upper("projections/entropy_simplex", worst, 1e-12);
  }
}

// ---------------------------------------------------------------------------
// spectral

void verify_spectral(Collector& col, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 303);
  const SpectralPotential pot{Potential::hypentropy(1.0)};
  const HypentropyParams params(1.0);

  { // orthogonal invariance of the spectral value and the Schatten norms
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::MatrixXd x = random_mat(rng, 3, 4);
      const Eigen::MatrixXd u = random_orthogonal(rng, 3);
      const Eigen::MatrixXd v = random_orthogonal(rng, 4);
      const WeightMatrix a(x), b(u * x * v.transpose());
      worst = std::max(worst, std::abs(spectral_value(pot, a) - spectral_value(pot, b)));
      worst = std::max(worst, std::abs(a.trace_norm() - b.trace_norm()));
      worst = std::max(worst, std::abs(a.spectral_norm() - b.spectral_norm()));
    }
    col.upper("spectral/orthogonal_invariance", worst, 1e-9);
  }

  { // diagonal reduction: spectral ops equal vector ops on the diagonal
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::VectorXd diag = random_vec(rng, 3, -2.0, 2.0);
      Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 5);
      for (int i = 0; i < 3; ++i) x(i, i) = diag[i];
      const WeightMatrix wm(x);
      // min(3,5) = 3 singular values, all equal to |diag_i|
      const double expect = hyp_value(diag, params);
      worst = std::max(worst, std::abs(spectral_value(pot, wm) - expect));

      const Eigen::MatrixXd g = spectral_grad(pot, wm);
      const Eigen::VectorXd gv = hyp_grad(diag, params);
      Eigen::MatrixXd gexpect = Eigen::MatrixXd::Zero(3, 5);
      for (int i = 0; i < 3; ++i) gexpect(i, i) = gv[i];
      worst = std::max(worst, (g - gexpect).lpNorm<Eigen::Infinity>());

      const Eigen::VectorXd gdiag = random_vec(rng, 3, -1.0, 1.0);
      Eigen::MatrixXd gm = Eigen::MatrixXd::Zero(3, 5);
      for (int i = 0; i < 3; ++i) gm(i, i) = gdiag[i];
      const WeightMatrix next = shu_step(wm, gm, 0.3, params);
      const Eigen::VectorXd expect_next =
          hu_step(diag, gdiag, 0.3, params);
      Eigen::MatrixXd mexpect = Eigen::MatrixXd::Zero(3, 5);
      for (int i = 0; i < 3; ++i) mexpect(i, i) = expect_next[i];
      worst = std::max(worst, (next.entries() - mexpect).lpNorm<Eigen::Infinity>());
    }
    col.upper("spectral/diagonal_reduction", worst, 1e-9);
  }

  { // gradient vs directional finite differences (singular value gaps > 0.1)
    double worst = 0.0;
    const double t = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd sig(3);
      sig << rng.uniform(2.2, 2.8), rng.uniform(1.1, 1.7), rng.uniform(0.15, 0.6);
      const Eigen::MatrixXd u = random_orthogonal(rng, 3);
      const Eigen::MatrixXd v = random_orthogonal(rng, 4);
      const Eigen::MatrixXd x =
          u * sig.asDiagonal() * v.topLeftCorner(4, 3).transpose();
      const Eigen::MatrixXd h = random_mat(rng, 3, 4) / 3.0;
      const double analytic =
          (spectral_grad(pot, WeightMatrix(x)).array() * h.array()).sum();
      const double fd = (spectral_value(pot, WeightMatrix(x + t * h)) -
                         spectral_value(pot, WeightMatrix(x - t * h))) /
                        (2.0 * t);
      worst = std::max(worst, std::abs(analytic - fd) / std::max(1.0, std::abs(fd)));
    }
    col.upper("spectral/grad_finite_diff", worst, 1e-5);
  }

  { // conjugate lifting: sampled Fenchel lower bounds never exceed the lift
    double worst = 0.0, worst_eq = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd z = random_mat(rng, 3, 4);
      const WeightMatrix zm(z);
      double lifted = 0.0;
      for (Eigen::Index i = 0; i < zm.sigma().size(); ++i)
        lifted += params.beta * std::cosh(zm.sigma()[i]);
      for (int cand = 0; cand < 200; ++cand) {
        const Eigen::MatrixXd x = random_mat(rng, 3, 4) * 2.0;
        const double lower = (x.array() * z.array()).sum() -
                             spectral_value(pot, WeightMatrix(x));
        worst = std::max(worst, lower - lifted);
      }
      // supremum attained at X* = beta*sinh-lift of Z
      Eigen::VectorXd sh(zm.sigma().size());
      for (Eigen::Index i = 0; i < sh.size(); ++i)
        sh[i] = params.beta * std::sinh(zm.sigma()[i]);
      const WeightMatrix xstar(zm.u(), sh, zm.v());
      const double at_star = (xstar.entries().array() * z.array()).sum() -
                             spectral_value(pot, xstar);
      worst_eq = std::max(worst_eq, std::abs(at_star - lifted));
    }
    col.upper("spectral/conjugate_lift_bound", worst, 1e-6);
    col.upper("spectral/conjugate_lift_equality", worst_eq, 1e-8);
  }

  { // symmetrization: eigenvalues are +-sigma and the zero-shifted potential
    // doubles
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
      const Eigen::MatrixXd x = random_mat(rng, 2, 3);
      const WeightMatrix wm(x);
      const Eigen::MatrixXd s = symmetrize(x);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
      const Eigen::VectorXd lam = eig.eigenvalues();
      // shifted scalar phi(x) - phi(0); even, vanishes at 0
      auto shifted = [&](double v) {
        return v * std::asinh(v / params.beta) -
               std::sqrt(v * v + params.beta * params.beta) + params.beta;
      };
      double sym_val = 0.0;
      for (Eigen::Index i = 0; i < lam.size(); ++i) sym_val += shifted(lam[i]);
      double direct = 0.0;
      for (Eigen::Index i = 0; i < wm.sigma().size(); ++i)
        direct += shifted(wm.sigma()[i]);
      worst = std::max(worst, std::abs(sym_val - 2.0 * direct));

      // eigenvalue multiset is {+-sigma_i} plus zeros
      Eigen::VectorXd pos = lam.tail(wm.sigma().size()).reverse();
      worst = std::max(worst, (pos - wm.sigma()).lpNorm<Eigen::Infinity>());
    }
    col.upper("spectral/symmetrization", worst, 1e-9);
  }

  { // trace-ball projection: feasibility, idempotence, sampled optimality
    double worst_feas = 0.0, worst_idem = 0.0, worst_opt = 0.0;
    const double tau = 1.0;
    for (int trial = 0; trial < 25; ++trial) {
      const Eigen::MatrixXd x = random_mat(rng, 2, 2) * 2.0;
      const WeightMatrix wm(x);
      const WeightMatrix pw = project_trace_ball(wm, tau, params);
      worst_feas = std::max(worst_feas, pw.trace_norm() - tau);
      worst_idem = std::max(worst_idem,
                            (project_trace_ball(pw, tau, params).entries() -
                             pw.entries())
                                .lpNorm<Eigen::Infinity>());
      if (wm.trace_norm() <= tau) continue;
      // Bregman objective via the lifted divergence on singular values
      const Potential scalar = Potential::hypentropy(params.beta);
      auto div = [&](const WeightMatrix& a) {
        // D(A || X) with joint diagonalization not available; use the
        // definitional form through spectral_value/spectral_grad
        return spectral_value(pot, a) - spectral_value(pot, wm) -
               (spectral_grad(pot, wm).array() * (a.entries() - x).array()).sum();
      };
      (void)scalar;
      const double dproj = div(pw);
      for (int cand = 0; cand < 400; ++cand) {
        Eigen::MatrixXd f = random_mat(rng, 2, 2);
        const WeightMatrix fm(f * (tau * rng.uniform01() / WeightMatrix(f).trace_norm()));
        worst_opt = std::max(worst_opt, dproj - div(fm));
      }
    }
    col.upper("spectral/trace_projection_feasibility", worst_feas, 1e-10);
    col.upper("spectral/trace_projection_idempotence", worst_idem, 1e-10);
    col.upper("spectral/trace_projection_optimality", worst_opt, 1e-8);
  }

  { // Theorem-style strong convexity sampler over the trace ball
    const StrongConvexityReport rep =
        check_spectral_strong_convexity(1.0, 0.1, 3, 5, 500, seed);
    col.count_zero("spectral/strong_convexity_trace", rep.violations, rep.min_slack);
  }

  { // shu_step identities: zero gradient, zero iterate
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd x = random_mat(rng, 3, 4);
      const WeightMatrix wm(x);
      const WeightMatrix same = shu_step(wm, Eigen::MatrixXd::Zero(3, 4), 0.5, params);
      worst = std::max(worst, (same.entries() - x).lpNorm<Eigen::Infinity>());

      const Eigen::MatrixXd g = random_mat(rng, 3, 4);
      const WeightMatrix from_zero =
          shu_step(WeightMatrix(Eigen::MatrixXd::Zero(3, 4)), g, 0.5, params);
      // beta*sinh(-eta*G) as a matrix function of -eta*G
      const WeightMatrix gd(Eigen::MatrixXd(-0.5 * g));
      Eigen::VectorXd sh(gd.sigma().size());
      for (Eigen::Index i = 0; i < sh.size(); ++i)
        sh[i] = params.beta * std::sinh(gd.sigma()[i]);
      const WeightMatrix expect(gd.u(), sh, gd.v());
      worst = std::max(worst,
                       (from_zero.entries() - expect.entries()).lpNorm<Eigen::Infinity>());
    }
    col.upper("spectral/shu_step_identities", worst, 1e-9);
  }
}

// ---------------------------------------------------------------------------
// regret

void verify_regret(Collector& col, std::uint64_t seed) {
  { // Theorem: additive regret <= 4*G2*sqrt(T) for beta >= 1 over B2
    double worst = -std::numeric_limits<double>::infinity();
    const int d = 50, T = 2000;
    const double beta = 1.0;
    for (std::uint64_t s = 0; s < 3; ++s) {
      OnlineProblem problem;
      problem.domain = ConstraintSet::l2_ball(1.0);
      problem.horizon = T;
      problem.dim = d;
      problem.linear_losses = true;
      problem.oracle = [d, seed, s](int t, const Eigen::VectorXd& w) {
        Rng rng = Rng::stream(seed + s, 40000 + static_cast<std::uint64_t>(t));
        Eigen::VectorXd g(d);
        const double scale = 1.0 / std::sqrt(static_cast<double>(d));
        for (int i = 0; i < d; ++i) g[i] = rng.bernoulli(0.5) ? scale : -scale;
        return std::make_pair(g.dot(w), g);
      };
      const RegretLedger ledger =
          omd_run(problem, Potential::hypentropy(beta),
                  StepSizeRule::theorem6(1.0, beta, T));
      worst = std::max(worst, ledger.final_regret());
    }
    col.upper("regret/theorem_additive_bound", worst, 4.0 * std::sqrt(double(T)));
  }

  { // Theorem: multiplicative regret over B1 with beta = 1/d
    double worst = -std::numeric_limits<double>::infinity();
    const int d = 100, T = 2000;
    const double beta = 1.0 / d;
    for (std::uint64_t s = 0; s < 3; ++s) {
      OnlineProblem problem;
      problem.domain = ConstraintSet::l1_ball(1.0);
      problem.horizon = T;
      problem.dim = d;
      problem.linear_losses = true;
      problem.oracle = [d, seed, s](int t, const Eigen::VectorXd& w) {
        Rng rng = Rng::stream(seed + s, 50000 + static_cast<std::uint64_t>(t));
        Eigen::VectorXd g(d);
        for (int i = 0; i < d; ++i) g[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
        return std::make_pair(g.dot(w), g);
      };
      const RegretLedger ledger =
          omd_run(problem, Potential::hypentropy(beta),
                  StepSizeRule::theorem7(1.0, beta, d, T));
      worst = std::max(worst, ledger.final_regret());
    }
    const double bound =
        3.0 * std::sqrt(T * (1.0 + beta * d) * std::log(3.0 / beta));
    col.upper("regret/theorem_multiplicative_bound", worst, bound);
  }

  { // Theorem: trace-norm regret for SHU
    double worst = -std::numeric_limits<double>::infinity();
    const int m = 4, n = 6, T = 500;
    const double tau = 1.0, gamma = 0.25, beta = gamma * tau;
    for (std::uint64_t s = 0; s < 2; ++s) {
      MatrixOnlineProblem problem;
      problem.trace_radius = tau;
      problem.horizon = T;
      problem.rows = m;
      problem.cols = n;
      problem.linear_losses = true;
      problem.oracle = [m, n, seed, s](int t, const WeightMatrix& w) {
        Rng rng = Rng::stream(seed + s, 60000 + static_cast<std::uint64_t>(t));
        Eigen::MatrixXd g = random_mat(rng, m, n);
        g /= WeightMatrix(g).spectral_norm();
        return std::make_pair((g.array() * w.entries().array()).sum(), g);
      };
      const RegretLedger ledger =
          shu_run(problem, HypentropyParams(beta),
                  StepSizeRule::theorem19(1.0, gamma, tau, m, n, T));
      worst = std::max(worst, ledger.final_regret());
    }
    const double bound = 4.0 * tau *
                         std::sqrt(T * (1.0 + gamma * std::min(m, n)) *
                                   std::log(3.0 / gamma));
    col.upper("regret/theorem_trace_bound", worst, bound);
  }

  { // general OMD bound: regret <= D/eta + eta/(2 mu) * sum ||g||_*^2
    const int d = 30, T = 1000;
    const double beta = 0.5;
    const double eta = 0.01;
    OnlineProblem problem;
    problem.domain = ConstraintSet::l2_ball(1.0);
    problem.horizon = T;
    problem.dim = d;
    problem.linear_losses = true;
    double sum_gsq = 0.0;
    problem.oracle = [d, seed, &sum_gsq](int t, const Eigen::VectorXd& w) {
      Rng rng = Rng::stream(seed, 70000 + static_cast<std::uint64_t>(t));
      Eigen::VectorXd g(d);
      for (int i = 0; i < d; ++i) g[i] = rng.uniform(-1.0, 1.0);
      g /= g.norm();
      sum_gsq += g.squaredNorm();
      return std::make_pair(g.dot(w), g);
    };
    const RegretLedger ledger =
        omd_run(problem, Potential::hypentropy(beta), StepSizeRule::fixed(eta));
    const double diameter = diameter_bound(DiameterSet::l2_unit, HypentropyParams(beta));
    const double mu = 1.0 / (1.0 + beta);
    const double bound = diameter / eta + eta / (2.0 * mu) * sum_gsq;
    col.upper("regret/omd_general_bound", ledger.final_regret(), bound);
  }

  { // the generic loop specialized to hypentropy equals hu_step + project
    Rng rng = Rng::stream(seed, 404);
    const int d = 12, T = 60;
    const double beta = 0.4, eta = 0.15;
    const ConstraintSet set = ConstraintSet::l1_ball(1.0);
    const HypentropyParams params(beta);

    std::vector<Eigen::VectorXd> grads;
    for (int t = 0; t < T; ++t) grads.push_back(random_vec(rng, d, -1.0, 1.0));

    std::vector<Eigen::VectorXd> loop_iterates;
    OnlineProblem problem;
    problem.domain = set;
    problem.horizon = T;
    problem.dim = d;
    problem.linear_losses = true;
    problem.oracle = [&](int t, const Eigen::VectorXd& w) {
      loop_iterates.push_back(w);
      return std::make_pair(grads[t].dot(w), grads[t]);
    };
    omd_run(problem, Potential::hypentropy(beta), StepSizeRule::fixed(eta));

    double worst = 0.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    for (int t = 0; t < T; ++t) {
      worst = std::max(worst, normwise_err(w, loop_iterates[t]));
      w = project(Potential::hypentropy(beta), set, hu_step(w, grads[t], eta, params));
    }
    col.upper("regret/hu_fast_path", worst, 1e-12);
  }

  { // squared-Euclidean OMD reproduces projected gradient descent
    Rng rng = Rng::stream(seed, 405);
    const int d = 10, T = 80;
    const double eta = 0.1;
    const ConstraintSet set = ConstraintSet::l2_ball(1.0);
    std::vector<Eigen::VectorXd> grads;
    for (int t = 0; t < T; ++t) grads.push_back(random_vec(rng, d, -1.0, 1.0));
    std::vector<Eigen::VectorXd> loop_iterates;
    OnlineProblem problem;
    problem.domain = set;
    problem.horizon = T;
    problem.dim = d;
    problem.linear_losses = true;
    problem.oracle = [&](int t, const Eigen::VectorXd& w) {
      loop_iterates.push_back(w);
      return std::make_pair(grads[t].dot(w), grads[t]);
    };
    omd_run(problem, Potential::squared_euclidean(), StepSizeRule::fixed(eta));
    double worst = 0.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    for (int t = 0; t < T; ++t) {
      worst = std::max(worst, (w - loop_iterates[t]).lpNorm<Eigen::Infinity>());
      w = gd_step(w, grads[t], eta, set);
    }
    col.upper("regret/gd_equivalence", worst, 1e-12);
  }

  { // unconstrained HU accumulates dual gradients in closed form
    const int d = 6, T = 50;
    const double beta = 0.8, eta = 0.05;
    Rng rng = Rng::stream(seed, 406);
    const Eigen::VectorXd g = random_vec(rng, d, -1.0, 1.0);
    OnlineProblem problem;
    problem.domain = ConstraintSet::unconstrained();
    problem.horizon = T;
    problem.dim = d;
    Eigen::VectorXd last;
    problem.oracle = [&](int, const Eigen::VectorXd& w) {
      last = w;
      return std::make_pair(g.dot(w), g);
    };
    omd_run(problem, Potential::hypentropy(beta), StepSizeRule::fixed(eta));
    // after T-1 updates the observed iterate is beta*sinh(-(T-1)*eta*g)
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
      const double closed = beta * std::sinh(-(T - 1) * eta * g[i]);
      worst = std::max(worst, rel_err(last[i], closed));
    }
    col.upper("regret/dual_accumulation", worst, 1e-12);
  }

  { // ledger regret curve matches an independent recomputation
    const int d = 20, T = 300;
    OnlineProblem problem;
    problem.domain = ConstraintSet::l2_ball(1.0);
    problem.horizon = T;
    problem.dim = d;
    problem.linear_losses = true;
    std::vector<Eigen::VectorXd> grads;
    problem.oracle = [&, seed](int t, const Eigen::VectorXd& w) {
      Rng rng = Rng::stream(seed, 80000 + static_cast<std::uint64_t>(t));
      Eigen::VectorXd g = random_vec(rng, d, -1.0, 1.0);
      g /= g.norm();
      grads.push_back(g);
      return std::make_pair(g.dot(w), g);
    };
    const RegretLedger ledger = omd_run(problem, Potential::hypentropy(1.0),
                                        StepSizeRule::theorem6(1.0, 1.0, T));
    double worst = 0.0;
    double cum = 0.0;
    Eigen::VectorXd gbar = Eigen::VectorXd::Zero(d);
    for (int t = 0; t < T; ++t) {
      cum += ledger.per_round_losses[t];
      gbar += grads[t];
      const double comparator = -gbar.norm();
      worst = std::max(worst, std::abs(ledger.regret_curve[t] - (cum - comparator)));
    }
    col.upper("regret/ledger_recompute", worst, 0.0);
  }

  { // three-point identity residuals
    Rng rng = Rng::stream(seed, 407);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::VectorXd x = random_vec(rng, 8, -2.0, 2.0);
      const Eigen::VectorXd y = random_vec(rng, 8, -2.0, 2.0);
      const Eigen::VectorXd z = random_vec(rng, 8, -2.0, 2.0);
      worst = std::max(worst, check_three_point(Potential::hypentropy(0.5), x, y, z));
      const Eigen::VectorXd xp = random_vec(rng, 8, 0.05, 2.0);
      const Eigen::VectorXd yp = random_vec(rng, 8, 0.05, 2.0);
      const Eigen::VectorXd zp = random_vec(rng, 8, 0.05, 2.0);
      worst = std::max(worst, check_three_point(Potential::entropy(), xp, yp, zp));
    }
    col.upper("regret/three_point_identity", worst, 1e-10);
  }
}

// ---------------------------------------------------------------------------
// equivalence

void verify_equivalence(Collector& col, std::uint64_t seed) {
  const int T = 100;

  { // normalized EG+- vs adaptive-beta HU; unnormalized vs unprojected HU
    double worst22 = 0.0, worst23 = 0.0, worst_mass = 0.0, worst_prod = 0.0;
    for (int d : {1, 5, 50}) {
      for (double eta : {0.01, 0.5}) {
        for (double beta : {0.02, 1.0}) {
          EgpmState eg_norm = EgpmState::init(d, beta);
          EgpmState eg_raw = EgpmState::init(d, beta);
          AdaptiveBetaState ahu = AdaptiveBetaState::init(d, beta);
          Eigen::VectorXd hu_w = Eigen::VectorXd::Zero(d);
          const HypentropyParams params(beta);
          Rng rng = Rng::stream(seed, 90000 + static_cast<std::uint64_t>(d * 100) +
                                          static_cast<std::uint64_t>(eta * 1000) +
                                          static_cast<std::uint64_t>(beta * 10));
          for (int t = 0; t < T; ++t) {
            Eigen::VectorXd g(d);
            for (int i = 0; i < d; ++i) g[i] = rng.uniform(-1.0, 1.0);
            eg_norm = egpm_step(eg_norm, g, eta);
            ahu = adaptive_hu_step(ahu, g, eta, beta, d);
            worst22 = std::max(worst22, normwise_err(eg_norm.weights(), ahu.w));
            worst_mass = std::max(
                worst_mass, std::abs(eg_norm.mass() - beta * d) / (beta * d));

            eg_raw = egpm_unnormalized_step(eg_raw, g, eta);
            hu_w = hu_step(hu_w, g, eta, params);
            worst23 = std::max(worst23, normwise_err(eg_raw.weights(), hu_w));
            const Eigen::VectorXd u = eg_raw.u(), v = eg_raw.v();
            for (int i = 0; i < d; ++i)
              worst_prod = std::max(
                  worst_prod,
                  std::abs(u[i] * v[i] - beta * beta / 4.0) / (beta * beta / 4.0));
          }
        }
      }
    }
    col.upper("equivalence/egpm_adaptive_hu", worst22, 1e-10);
    col.upper("equivalence/egpm_unnormalized_hu", worst23, 1e-10);
    col.upper("equivalence/egpm_mass_conservation", worst_mass, 1e-12);
    col.upper("equivalence/egpm_product_invariant", worst_prod, 1e-10);
  }

  { // closed form w = grad(phi*)(-eta*gbar) with phi*(x) = log sum cosh, beta = 1/d
    const int d = 10;
    const double beta = 1.0 / d, eta = 0.2;
    EgpmState state = EgpmState::init(d, beta);
    Rng rng = Rng::stream(seed, 91000);
    double worst = 0.0;
    for (int t = 0; t < T; ++t) {
      Eigen::VectorXd g(d);
      for (int i = 0; i < d; ++i) g[i] = rng.uniform(-1.0, 1.0);
      state = egpm_step(state, g, eta);
      const Eigen::VectorXd z = -eta * state.cumulative_gradient;
      double denom = 0.0;
      for (int i = 0; i < d; ++i) denom += std::cosh(z[i]);
      Eigen::VectorXd closed(d);
      for (int i = 0; i < d; ++i) closed[i] = std::sinh(z[i]) / denom;
      worst = std::max(worst, normwise_err(state.weights(), closed));
    }
    col.upper("equivalence/egpm_conjugate_form", worst, 1e-10);
  }

  { // d = 1 reduces to w = beta * tanh(-eta * gbar)
    const double beta = 0.3, eta = 0.2;
    EgpmState state = EgpmState::init(1, beta);
    Rng rng = Rng::stream(seed, 92000);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      Eigen::VectorXd g(1);
      g[0] = rng.uniform(-1.0, 1.0);
      state = egpm_step(state, g, eta);
      const double closed = beta * std::tanh(-eta * state.cumulative_gradient[0]);
      worst = std::max(worst, rel_err(state.weights()[0], closed));
    }
    col.upper("equivalence/egpm_tanh_form", worst, 1e-10);
  }

  { // adaptive HU never needs the beta*d-ball projection (|sinh| <= cosh)
    const int d = 5;
    const double beta = 0.1, eta = 0.5;
    AdaptiveBetaState state = AdaptiveBetaState::init(d, beta);
    Rng rng = Rng::stream(seed, 93000);
    double worst = 0.0;
    for (int t = 0; t < T; ++t) {
      Eigen::VectorXd g(d);
      for (int i = 0; i < d; ++i) g[i] = rng.uniform(-1.0, 1.0);
      state = adaptive_hu_step(state, g, eta, beta, d);
      worst = std::max(worst, state.w.lpNorm<1>() - beta * d);
    }
    col.upper("equivalence/adaptive_hu_no_projection", worst, 1e-12);
  }

  { // p -> 2+ continuity of the p-norm step toward the GD step
    Rng rng = Rng::stream(seed, 94000);
    const Eigen::VectorXd w = random_vec(rng, 8, -1.0, 1.0);
    const Eigen::VectorXd g = random_vec(rng, 8, -1.0, 1.0);
    const double eta = 0.2;
    const Eigen::VectorXd gd = gd_step(w, g, eta);
    const double exact =
        (pnorm_step(w, g, eta, PNormParams(2.0)) - gd).lpNorm<Eigen::Infinity>();
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double p : {2.5, 2.1, 2.01, 2.001}) {
      const double diff =
          (pnorm_step(w, g, eta, PNormParams(p)) - gd).lpNorm<Eigen::Infinity>();
      if (diff > prev + 1e-12) monotone = false;
      prev = diff;
    }
    col.upper("equivalence/pnorm_p2_exact", exact, 1e-12);
    col.upper("equivalence/pnorm_p2_continuity", monotone ? prev : 1.0, 1e-2);
  }
}

} // namespace

std::vector<PropertyResult> verify_suite(const std::string& suite, std::uint64_t seed) {
  Collector col;
  bool known = false;
  if (suite == "potentials" || suite == "all") {
    verify_potentials(col, seed);
    known = true;
  }
  if (suite == "projections" || suite == "all") {
    verify_projections(col, seed);
    known = true;
  }
  if (suite == "spectral" || suite == "all") {
    verify_spectral(col, seed);
    known = true;
  }
  if (suite == "regret" || suite == "all") {
    verify_regret(col, seed);
    known = true;
  }
  if (suite == "equivalence" || suite == "all") {
    verify_equivalence(col, seed);
    known = true;
  }
  if (!known)
    throw std::invalid_argument(
        "unknown suite '" + suite +
        "' (expected potentials|projections|spectral|regret|equivalence|all)");
  return col.results;
}

} // namespace hypogd
