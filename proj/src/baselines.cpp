#include "hypogd/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "hypogd/errors.hpp"
#include "hypogd/kernels.hpp"

namespace hypogd {

namespace {

// Only the positive side can overflow exp; deep-negative logs underflow to 0
// and weights() stays exact through the expm1 form.
void check_log_guard(const Eigen::VectorXd& lu, const Eigen::VectorXd& lv) {
  for (Eigen::Index i = 0; i < lu.size(); ++i) {
    if (lu[i] > OverflowGuardError::kGuard)
      throw OverflowGuardError(static_cast<std::size_t>(i), lu[i]);
    if (lv[i] > OverflowGuardError::kGuard)
      throw OverflowGuardError(static_cast<std::size_t>(i), lv[i]);
  }
}

} // namespace

EgpmState EgpmState::init(int d, double beta) {
  if (d < 1) throw std::invalid_argument("EgpmState: d must be >= 1");
  HypentropyParams params(beta); // validates beta > 0
  EgpmState s;
  s.beta = params.beta;
  s.log_u = Eigen::VectorXd::Constant(d, std::log(beta / 2.0));
  s.log_v = s.log_u;
  s.cumulative_gradient = Eigen::VectorXd::Zero(d);
  return s;
}

Eigen::VectorXd EgpmState::weights() const {
  // u - v = sign(lu - lv) * exp(max(lu,lv)) * (1 - exp(-|lu - lv|))
  Eigen::VectorXd w(log_u.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double hi = std::max(log_u[i], log_v[i]);
    const double diff = log_u[i] - log_v[i];
    w[i] = std::copysign(std::exp(hi) * -std::expm1(-std::abs(diff)), diff);
  }
  return w;
}

double EgpmState::mass() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < log_u.size(); ++i)
    m += std::exp(log_u[i]) + std::exp(log_v[i]);
  return m;
}

EgpmState egpm_unnormalized_step(const EgpmState& state, const Eigen::VectorXd& g,
                                 double eta) {
  if (g.size() != state.log_u.size())
    throw std::invalid_argument("egpm step: size mismatch");
  EgpmState next = state;
  next.log_u -= eta * g;
  next.log_v += eta * g;
  next.cumulative_gradient += g;
  check_log_guard(next.log_u, next.log_v);
  return next;
}

EgpmState egpm_step(const EgpmState& state, const Eigen::VectorXd& g, double eta) {
  EgpmState next = egpm_unnormalized_step(state, g, eta);
  // rescale total mass to beta*d via a log-sum-exp shift
  const int d = static_cast<int>(next.log_u.size());
  const double hi = std::max(next.log_u.maxCoeff(), next.log_v.maxCoeff());
  double z = 0.0;
  for (Eigen::Index i = 0; i < next.log_u.size(); ++i)
    z += std::exp(next.log_u[i] - hi) + std::exp(next.log_v[i] - hi);
  const double shift = std::log(state.beta * d) - (hi + std::log(z));
  next.log_u.array() += shift;
  next.log_v.array() += shift;
  return next;
}

AdaptiveBetaState AdaptiveBetaState::init(int d, double beta) {
  if (d < 1) throw std::invalid_argument("AdaptiveBetaState: d must be >= 1");
  HypentropyParams params(beta);
  AdaptiveBetaState s;
  s.w = Eigen::VectorXd::Zero(d);
  s.beta_t = params.beta;
  s.cumulative_gradient = Eigen::VectorXd::Zero(d);
  return s;
}

AdaptiveBetaState adaptive_hu_step(const AdaptiveBetaState& state,
                                   const Eigen::VectorXd& g, double eta,
                                   double beta, int d) {
  if (g.size() != state.w.size())
    throw std::invalid_argument("adaptive_hu_step: size mismatch");
  AdaptiveBetaState next;
  next.cumulative_gradient = state.cumulative_gradient + g;

  Eigen::VectorXd dual(g.size());
  kernels::hyp_dual(state.w.data(), dual.data(),
                    static_cast<std::size_t>(g.size()), state.beta_t);
  kernels::axpy(-eta, g.data(), dual.data(), static_cast<std::size_t>(g.size()));
  const double m = kernels::max_abs(dual.data(), static_cast<std::size_t>(dual.size()));
  if (m > OverflowGuardError::kGuard) {
    Eigen::Index j = 0;
    dual.cwiseAbs().maxCoeff(&j);
    throw OverflowGuardError(static_cast<std::size_t>(j), dual[j]);
  }

  Eigen::VectorXd scaled = eta * next.cumulative_gradient;
  Eigen::VectorXd ch(scaled.size());
  kernels::vcosh(scaled.data(), ch.data(), static_cast<std::size_t>(scaled.size()));
  next.beta_t =
      beta * d / kernels::sum(ch.data(), static_cast<std::size_t>(ch.size()));

  next.w.resize(g.size());
  kernels::hyp_primal(dual.data(), next.w.data(),
                      static_cast<std::size_t>(dual.size()), next.beta_t);
  // |sinh| <= cosh ensures ||w||_1 <= beta*d; projection never engages
  return next;
}

Eigen::VectorXd pnorm_step(const Eigen::VectorXd& w, const Eigen::VectorXd& g,
                           double eta, const PNormParams& params) {
  if (w.size() != g.size()) throw std::invalid_argument("pnorm_step: size mismatch");
  return pnorm_mirror_inv(pnorm_mirror(w, params) - eta * g, params);
}

Eigen::MatrixXd schatten_pnorm_step(const Eigen::MatrixXd& w,
                                    const Eigen::MatrixXd& g, double eta,
                                    const PNormParams& params) {
  if (w.rows() != g.rows() || w.cols() != g.cols())
    throw std::invalid_argument("schatten_pnorm_step: shape mismatch");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd ms = pnorm_mirror(svd.singularValues(), params);
  const Eigen::MatrixXd dual =
      svd.matrixU() * ms.asDiagonal() * svd.matrixV().transpose() - eta * g;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd2(dual,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd back = pnorm_mirror_inv(svd2.singularValues(), params);
  return svd2.matrixU() * back.asDiagonal() * svd2.matrixV().transpose();
}

Eigen::VectorXd gd_step(const Eigen::VectorXd& w, const Eigen::VectorXd& g,
                        double eta) {
  if (w.size() != g.size()) throw std::invalid_argument("gd_step: size mismatch");
  Eigen::VectorXd out = w;
  kernels::axpy(-eta, g.data(), out.data(), static_cast<std::size_t>(out.size()));
  return out;
}

Eigen::VectorXd gd_step(const Eigen::VectorXd& w, const Eigen::VectorXd& g,
                        double eta, const ConstraintSet& set) {
  return euclidean_project(set, gd_step(w, g, eta));
}

} // namespace hypogd
