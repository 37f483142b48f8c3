#include "hypogd/spectral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

#include "hypogd/errors.hpp"
#include "hypogd/kernels.hpp"
#include "hypogd/rng.hpp"

namespace hypogd {

namespace {

struct ThinSvd {
  Eigen::MatrixXd u, v;
  Eigen::VectorXd sigma;
};

ThinSvd thin_svd(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw ConvergenceError("SVD failed to converge", 0.0);
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

} // namespace

WeightMatrix::WeightMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (!entries_.allFinite())
    throw std::domain_error("WeightMatrix: non-finite entries");
  ThinSvd f = thin_svd(entries_);
  u_ = std::move(f.u);
  v_ = std::move(f.v);
  sigma_ = std::move(f.sigma);
}

WeightMatrix::WeightMatrix(Eigen::MatrixXd u, Eigen::VectorXd sigma, Eigen::MatrixXd v)
    : u_(std::move(u)), v_(std::move(v)), sigma_(std::move(sigma)) {
  if (u_.cols() != sigma_.size() || v_.cols() != sigma_.size())
    throw std::invalid_argument("WeightMatrix: factor shapes disagree");
  for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
    if (sigma_[i] < 0.0 || (i > 0 && sigma_[i] > sigma_[i - 1]))
      throw std::invalid_argument("WeightMatrix: sigma must be sorted nonincreasing, >= 0");
  }
  entries_ = u_ * sigma_.asDiagonal() * v_.transpose();
}

SpectralPotential::SpectralPotential(Potential scalar_) : scalar(std::move(scalar_)) {
  if (scalar.kind() == PotentialKind::entropy)
    throw std::invalid_argument("SpectralPotential: scalar map must be even");
}

double spectral_value(const SpectralPotential& pot, const WeightMatrix& x) {
  double v = 0.0;
  if (pot.scalar.kind() == PotentialKind::pnorm) {
    return pot.scalar.value(x.sigma());
  }
  for (Eigen::Index i = 0; i < x.sigma().size(); ++i)
    v += pot.scalar.value1(x.sigma()[i]);
  return v;
}

Eigen::MatrixXd spectral_grad(const SpectralPotential& pot, const WeightMatrix& x) {
  Eigen::VectorXd fs(x.sigma().size());
  if (pot.scalar.kind() == PotentialKind::pnorm) {
    fs = pot.scalar.mirror(x.sigma());
  } else {
    for (Eigen::Index i = 0; i < fs.size(); ++i)
      fs[i] = pot.scalar.grad1(x.sigma()[i]);
  }
  return x.u() * fs.asDiagonal() * x.v().transpose();
}

WeightMatrix shu_step(const WeightMatrix& x, const Eigen::MatrixXd& g, double eta,
                      const HypentropyParams& params) {
  if (g.rows() != x.rows() || g.cols() != x.cols())
    throw std::invalid_argument("shu_step: gradient shape mismatch");
  if (!g.allFinite()) throw std::domain_error("shu_step: non-finite gradient");

  const auto l = static_cast<std::size_t>(x.sigma().size());
  Eigen::VectorXd a(x.sigma().size());
  kernels::hyp_dual(x.sigma().data(), a.data(), l, params.beta);
  const Eigen::MatrixXd dual =
      x.u() * a.asDiagonal() * x.v().transpose() - eta * g;

  ThinSvd f = thin_svd(dual);
  for (Eigen::Index i = 0; i < f.sigma.size(); ++i)
    if (f.sigma[i] > OverflowGuardError::kGuard)
      throw OverflowGuardError(static_cast<std::size_t>(i), f.sigma[i]);

  Eigen::VectorXd sig(f.sigma.size());
  kernels::hyp_primal(f.sigma.data(), sig.data(),
                      static_cast<std::size_t>(f.sigma.size()), params.beta);
  // sinh is increasing, so sig inherits the nonincreasing order
  return WeightMatrix(std::move(f.u), std::move(sig), std::move(f.v));
}

WeightMatrix project_trace_ball(const WeightMatrix& x, double tau,
                                const HypentropyParams& params,
                                const RootFindConfig& cfg) {
  if (!(tau > 0.0)) throw std::invalid_argument("project_trace_ball: tau <= 0");
  if (x.trace_norm() <= tau) return x;
  Eigen::VectorXd duals(x.sigma().size());
  kernels::hyp_dual(x.sigma().data(), duals.data(),
                    static_cast<std::size_t>(x.sigma().size()), params.beta);
  Eigen::VectorXd sig = detail::hyp_l1_from_duals(duals, params.beta, tau, cfg);
  return WeightMatrix(x.u(), std::move(sig), x.v());
}

Eigen::MatrixXd euclidean_project_trace_ball(const Eigen::MatrixXd& x, double tau) {
  ThinSvd f = thin_svd(x);
  if (f.sigma.sum() <= tau) return x;
  // Euclidean projection of the (sorted) singular values onto the L1 ball
  double prefix = 0.0, theta = 0.0;
  for (Eigen::Index k = 0; k < f.sigma.size(); ++k) {
    prefix += f.sigma[k];
    const double cand = (prefix - tau) / static_cast<double>(k + 1);
    if (k + 1 == f.sigma.size() || f.sigma[k + 1] <= cand) { theta = cand; break; }
  }
  const Eigen::VectorXd sig = (f.sigma.array() - theta).max(0.0).matrix();
  return f.u * sig.asDiagonal() * f.v.transpose();
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& x) {
  const Eigen::Index m = x.rows(), n = x.cols();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m + n, m + n);
  s.topRightCorner(m, n) = x;
  s.bottomLeftCorner(n, m) = x.transpose();
  return s;
}

StrongConvexityReport check_spectral_strong_convexity(double tau, double beta,
                                                      int m, int n, int samples,
                                                      std::uint64_t seed) {
  if (!(tau > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("check_spectral_strong_convexity: tau, beta > 0");
  const SpectralPotential pot{Potential::hypentropy(beta)};
  const double mu = 1.0 / (2.0 * (tau + beta * std::min(m, n)));
  Rng rng = Rng::stream(seed, 0x5EC7);

  auto sample_in_ball = [&]() {
    Eigen::MatrixXd a(m, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    WeightMatrix w(a);
    const double scale = rng.uniform01() * tau / std::max(w.trace_norm(), 1e-300);
    return WeightMatrix(w.u(), Eigen::VectorXd(w.sigma() * scale), w.v());
  };

  StrongConvexityReport rep;
  rep.samples = samples;
  rep.modulus = mu;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const WeightMatrix x = sample_in_ball();
    const WeightMatrix y = sample_in_ball();
    const Eigen::MatrixXd diff = x.entries() - y.entries();
    const double gap = spectral_value(pot, x) - spectral_value(pot, y) -
                       (spectral_grad(pot, y).array() * diff.array()).sum();
    const double dist1 = WeightMatrix(diff).trace_norm();
    const double slack = gap - 0.5 * mu * dist1 * dist1;
    rep.min_slack = std::min(rep.min_slack, slack);
    if (slack < -1e-10) ++rep.violations;
  }
  return rep;
}

} // namespace hypogd
