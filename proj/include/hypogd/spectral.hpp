#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "hypogd/potentials.hpp"
#include "hypogd/projections.hpp"

namespace hypogd {

/// A rectangular iterate together with its thin SVD. The factorization is
/// computed at construction and never mutated, so values can be shared
/// across threads freely.
class WeightMatrix {
public:
  /// Factorize entries (thin SVD, singular values nonincreasing).
  explicit WeightMatrix(Eigen::MatrixXd entries);
  /// Assemble from factors; entries are rebuilt as u*diag(sigma)*v^T.
  /// sigma must be nonincreasing and nonnegative.
  WeightMatrix(Eigen::MatrixXd u, Eigen::VectorXd sigma, Eigen::MatrixXd v);

  const Eigen::MatrixXd& entries() const { return entries_; }
  const Eigen::MatrixXd& u() const { return u_; }
  const Eigen::VectorXd& sigma() const { return sigma_; }
  const Eigen::MatrixXd& v() const { return v_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }

  double trace_norm() const { return sigma_.sum(); }
  double spectral_norm() const { return sigma_.size() ? sigma_[0] : 0.0; }

private:
  Eigen::MatrixXd entries_;
  Eigen::MatrixXd u_, v_;
  Eigen::VectorXd sigma_;
};

/// A scalar potential lifted to matrices through singular values. The scalar
/// map must be even in each coordinate (entropy is rejected).
struct SpectralPotential {
  Potential scalar;
  SpectralPotential(Potential scalar);
};

/// F(X) = sum_i f(sigma_i(X)); invariant under orthogonal transformations.
double spectral_value(const SpectralPotential& pot, const WeightMatrix& x);

/// grad F(X) = U f'(Sigma) V^T through the thin SVD.
Eigen::MatrixXd spectral_grad(const SpectralPotential& pot, const WeightMatrix& x);

/// One SHU half-step: beta*sinh applied to arcsinh(X/beta) - eta*G, both
/// matrix functions evaluated through singular value decompositions. Costs
/// two decompositions per step (one cached on x, one fresh on the dual).
WeightMatrix shu_step(const WeightMatrix& x, const Eigen::MatrixXd& g, double eta,
                      const HypentropyParams& params);

/// Bregman projection onto the trace-norm ball of radius tau: keeps U, V and
/// soft-thresholds the singular values through the hypentropy L1 projection.
WeightMatrix project_trace_ball(const WeightMatrix& x, double tau,
                                const HypentropyParams& params,
                                const RootFindConfig& cfg = {});

/// Euclidean (Frobenius) projection onto the trace-norm ball, for the GD
/// baseline: soft-threshold the singular values at a waterfilling level.
Eigen::MatrixXd euclidean_project_trace_ball(const Eigen::MatrixXd& x, double tau);

/// S(X) = [0 X; X^T 0]; its eigenvalues are +/- the singular values of X.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& x);

struct StrongConvexityReport {
  int samples = 0;
  int violations = 0;
  double min_slack = 0.0;
  double modulus = 0.0;
};

/// Sample X, Y in the trace ball of radius tau and check
///   Phi(X) - Phi(Y) - <grad Phi(Y), X-Y> >= mu/2 * ||X-Y||_1^2
/// with mu = 1/(2*(tau + beta*min(m,n))).
StrongConvexityReport check_spectral_strong_convexity(double tau, double beta,
                                                      int m, int n, int samples,
                                                      std::uint64_t seed);

} // namespace hypogd
