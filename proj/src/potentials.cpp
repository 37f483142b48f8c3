#include "hypogd/potentials.hpp"

#include <cmath>
#include <stdexcept>

#include "hypogd/kernels.hpp"

namespace hypogd {

namespace {

void require_finite(const Eigen::VectorXd& x, const char* who) {
  if (!x.allFinite())
    throw std::domain_error(std::string(who) + ": non-finite input coordinate");
}

void check_guard(const Eigen::VectorXd& z) {
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (std::abs(z[i]) > OverflowGuardError::kGuard)
      throw OverflowGuardError(static_cast<std::size_t>(i), z[i]);
}

} // namespace

HypentropyParams::HypentropyParams(double beta) : beta(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("hypentropy: beta must be positive");
}

PNormParams::PNormParams(double p) : p(p), q(p / (p - 1.0)) {
  if (!(p >= 2.0) || !std::isfinite(p))
    throw std::invalid_argument("pnorm: p must be >= 2");
}

double hyp_value(const Eigen::VectorXd& x, const HypentropyParams& params) {
  require_finite(x, "hyp_value");
  const double b = params.beta;
  Eigen::VectorXd a(x.size());
  kernels::hyp_dual(x.data(), a.data(), static_cast<std::size_t>(x.size()), b);
  double v = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    v += x[i] * a[i] - std::sqrt(x[i] * x[i] + b * b);
  return v;
}

Eigen::VectorXd hyp_grad(const Eigen::VectorXd& x, const HypentropyParams& params) {
  require_finite(x, "hyp_grad");
  Eigen::VectorXd out(x.size());
  kernels::hyp_dual(x.data(), out.data(), static_cast<std::size_t>(x.size()),
                    params.beta);
  return out;
}

Eigen::VectorXd hyp_grad_inv(const Eigen::VectorXd& z, const HypentropyParams& params) {
  require_finite(z, "hyp_grad_inv");
  check_guard(z);
  Eigen::VectorXd out(z.size());
  kernels::hyp_primal(z.data(), out.data(), static_cast<std::size_t>(z.size()),
                      params.beta);
  return out;
}

Eigen::VectorXd hyp_second_deriv(const Eigen::VectorXd& x,
                                 const HypentropyParams& params) {
  require_finite(x, "hyp_second_deriv");
  const double b = params.beta;
  return (x.array().square() + b * b).rsqrt().matrix();
}

double hyp_conjugate(const Eigen::VectorXd& z, const HypentropyParams& params) {
  require_finite(z, "hyp_conjugate");
  check_guard(z);
  Eigen::VectorXd c(z.size());
  kernels::vcosh(z.data(), c.data(), static_cast<std::size_t>(z.size()));
  return params.beta * kernels::sum(c.data(), static_cast<std::size_t>(c.size()));
}

namespace {

// f(v)_i = sign(v_i) |v_i|^{e-1} / ||v||_e^{e-2}; exponent e > 1. The mirror
// map uses e = p, its inverse e = q.
Eigen::VectorXd pnorm_map(const Eigen::VectorXd& v, double e) {
  require_finite(v, "pnorm map");
  if (v.lpNorm<Eigen::Infinity>() == 0.0) return Eigen::VectorXd::Zero(v.size());
  const double norm = std::pow(v.array().abs().pow(e).sum(), 1.0 / e);
  const double denom = std::pow(norm, e - 2.0);
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    out[i] = a == 0.0 ? 0.0 : std::copysign(std::pow(a, e - 1.0) / denom, v[i]);
  }
  return out;
}

} // namespace

Eigen::VectorXd pnorm_mirror(const Eigen::VectorXd& w, const PNormParams& params) {
  return pnorm_map(w, params.p);
}

Eigen::VectorXd pnorm_mirror_inv(const Eigen::VectorXd& z, const PNormParams& params) {
  return pnorm_map(z, params.q);
}

Potential::Potential(PotentialKind kind, double beta, double p)
    : kind_(kind), beta_(beta), p_(p), q_(p > 1.0 ? p / (p - 1.0) : 0.0) {}

Potential Potential::hypentropy(double beta) {
  HypentropyParams params(beta);
  return Potential(PotentialKind::hypentropy, params.beta, 0.0);
}
Potential Potential::squared_euclidean() {
  return Potential(PotentialKind::squared_euclidean, 0.0, 0.0);
}
Potential Potential::entropy() {
  return Potential(PotentialKind::entropy, 0.0, 0.0);
}
Potential Potential::pnorm(double p) {
  PNormParams params(p);
  return Potential(PotentialKind::pnorm, 0.0, params.p);
}

double Potential::beta() const {
  if (kind_ != PotentialKind::hypentropy)
    throw std::invalid_argument("beta() needs a hypentropy potential");
  return beta_;
}
double Potential::p() const {
  if (kind_ != PotentialKind::pnorm)
    throw std::invalid_argument("p() needs a pnorm potential");
  return p_;
}
double Potential::q() const {
  if (kind_ != PotentialKind::pnorm)
    throw std::invalid_argument("q() needs a pnorm potential");
  return q_;
}

double Potential::value1(double x) const {
  switch (kind_) {
    case PotentialKind::hypentropy:
      return x * std::asinh(x / beta_) - std::sqrt(x * x + beta_ * beta_);
    case PotentialKind::squared_euclidean:
      return 0.5 * x * x;
    case PotentialKind::entropy:
      if (x < 0.0) throw std::domain_error("entropy: negative coordinate");
      return x == 0.0 ? 0.0 : x * std::log(x) - x;
    default:
      throw std::invalid_argument("value1: pnorm potential is not separable");
  }
}

double Potential::grad1(double x) const {
  switch (kind_) {
    case PotentialKind::hypentropy:
      return std::asinh(x / beta_);
    case PotentialKind::squared_euclidean:
      return x;
    case PotentialKind::entropy:
      if (x <= 0.0) throw std::domain_error("entropy: gradient needs x > 0");
      return std::log(x);
    default:
      throw std::invalid_argument("grad1: pnorm potential is not separable");
  }
}

double Potential::grad_inv1(double z) const {
  switch (kind_) {
    case PotentialKind::hypentropy:
      if (std::abs(z) > OverflowGuardError::kGuard) throw OverflowGuardError(0, z);
      return beta_ * std::sinh(z);
    case PotentialKind::squared_euclidean:
      return z;
    case PotentialKind::entropy:
      if (std::abs(z) > OverflowGuardError::kGuard) throw OverflowGuardError(0, z);
      return std::exp(z);
    default:
      throw std::invalid_argument("grad_inv1: pnorm potential is not separable");
  }
}

double Potential::second1(double x) const {
  switch (kind_) {
    case PotentialKind::hypentropy:
      return 1.0 / std::sqrt(x * x + beta_ * beta_);
    case PotentialKind::squared_euclidean:
      return 1.0;
    case PotentialKind::entropy:
      if (x <= 0.0) throw std::domain_error("entropy: second derivative needs x > 0");
      return 1.0 / x;
    default:
      throw std::invalid_argument("second1: pnorm potential is not separable");
  }
}

double Potential::value(const Eigen::VectorXd& x) const {
  require_finite(x, "Potential::value");
  switch (kind_) {
    case PotentialKind::hypentropy:
      return hyp_value(x, HypentropyParams(beta_));
    case PotentialKind::squared_euclidean:
      return 0.5 * x.squaredNorm();
    case PotentialKind::entropy: {
      double v = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) v += value1(x[i]);
      return v;
    }
    case PotentialKind::pnorm: {
      const double n = x.lpNorm<Eigen::Infinity>() == 0.0
                           ? 0.0
                           : std::pow(x.array().abs().pow(p_).sum(), 1.0 / p_);
      return 0.5 * n * n;
    }
  }
  return 0.0;
}

Eigen::VectorXd Potential::mirror(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case PotentialKind::hypentropy:
      return hyp_grad(x, HypentropyParams(beta_));
    case PotentialKind::squared_euclidean:
      return x;
    case PotentialKind::entropy: {
      Eigen::VectorXd out(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = grad1(x[i]);
      return out;
    }
    case PotentialKind::pnorm:
      return pnorm_map(x, p_);
  }
  return x;
}

Eigen::VectorXd Potential::mirror_inv(const Eigen::VectorXd& z) const {
  switch (kind_) {
    case PotentialKind::hypentropy:
      return hyp_grad_inv(z, HypentropyParams(beta_));
    case PotentialKind::squared_euclidean:
      return z;
    case PotentialKind::entropy: {
      require_finite(z, "Potential::mirror_inv");
      check_guard(z);
      Eigen::VectorXd out(z.size());
      kernels::vexp(z.data(), out.data(), static_cast<std::size_t>(z.size()));
      return out;
    }
    case PotentialKind::pnorm:
      return pnorm_map(z, q_);
  }
  return z;
}

Eigen::VectorXd Potential::second_deriv(const Eigen::VectorXd& x) const {
  if (!separable())
    throw std::invalid_argument("second_deriv: pnorm potential is not separable");
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = second1(x[i]);
  return out;
}

double Potential::conjugate(const Eigen::VectorXd& z) const {
  switch (kind_) {
    case PotentialKind::hypentropy:
      return hyp_conjugate(z, HypentropyParams(beta_));
    case PotentialKind::squared_euclidean:
      return 0.5 * z.squaredNorm();
    case PotentialKind::entropy: {
      check_guard(z);
      return z.array().exp().sum();
    }
    case PotentialKind::pnorm: {
      // conjugate of 0.5*||.||_p^2 is 0.5*||.||_q^2
      const double n = z.lpNorm<Eigen::Infinity>() == 0.0
                           ? 0.0
                           : std::pow(z.array().abs().pow(q_).sum(), 1.0 / q_);
      return 0.5 * n * n;
    }
  }
  return 0.0;
}

double bregman_div(const Potential& pot, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("bregman_div: dimension mismatch");
  require_finite(x, "bregman_div");
  require_finite(y, "bregman_div");
  switch (pot.kind()) {
    case PotentialKind::hypentropy: {
      // relative hypentropy: sum x*(asinh(x/b)-asinh(y/b)) - sqrt(x^2+b^2) + sqrt(y^2+b^2)
      const double b = pot.beta();
      const auto n = static_cast<std::size_t>(x.size());
      Eigen::VectorXd ax(x.size()), ay(y.size());
      kernels::hyp_dual(x.data(), ax.data(), n, b);
      kernels::hyp_dual(y.data(), ay.data(), n, b);
      double d = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        d += x[i] * (ax[i] - ay[i]) - std::sqrt(x[i] * x[i] + b * b) +
             std::sqrt(y[i] * y[i] + b * b);
      return d;
    }
    case PotentialKind::squared_euclidean:
      return 0.5 * (x - y).squaredNorm();
    case PotentialKind::entropy: {
      // KL with unnormalized masses
      double d = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0 || y[i] <= 0.0)
          throw std::domain_error("bregman_div: entropy domain violation");
        d += (x[i] == 0.0 ? 0.0 : x[i] * std::log(x[i] / y[i])) - x[i] + y[i];
      }
      return d;
    }
    case PotentialKind::pnorm:
      return pot.value(x) - pot.value(y) - pot.mirror(y).dot(x - y);
  }
  return 0.0;
}

double diameter_bound(DiameterSet set, const HypentropyParams& params, double tau) {
  const double b = params.beta;
  switch (set) {
    case DiameterSet::l2_unit:
      return 2.0 / b;
    case DiameterSet::l1_unit:
      if (b > 1.0)
        throw std::invalid_argument("diameter_bound: 1-ball bound needs beta <= 1");
      return std::log(3.0 / b);
    case DiameterSet::trace_ball:
      if (!(tau > 0.0))
        throw std::invalid_argument("diameter_bound: trace ball needs tau > 0");
      if (b > tau)
        throw std::invalid_argument("diameter_bound: trace bound needs beta <= tau");
      return tau * std::log(3.0 * tau / b);
  }
  return 0.0;
}

} // namespace hypogd
