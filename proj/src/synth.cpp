#include "hypogd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/QR>

#include "hypogd/rng.hpp"

namespace hypogd {

namespace {

// stream ids for the sub-generators
constexpr std::uint64_t kWeightsStream = 0;
constexpr std::uint64_t kSupportStream = 1;
constexpr std::uint64_t kBatchStream = 1000;

void print_float(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

} // namespace

void LogitProblemSpec::validate() const {
  if (d < 1 || batch < 1 || horizon < 1)
    throw std::invalid_argument("logit spec: d, batch, horizon must be >= 1");
  if (!(flip_prob >= 0.0 && flip_prob < 0.5))
    throw std::invalid_argument("logit spec: flip_prob must be in [0, 0.5)");
  if (!(sparsity >= 0.0 && sparsity < 1.0))
    throw std::invalid_argument("logit spec: sparsity must be in [0, 1)");
}

LogitStream::LogitStream(LogitProblemSpec spec) : spec_(spec) {
  spec_.validate();
  const int d = spec_.d;

  feature_probs_.resize(d);
  for (int i = 0; i < d; ++i)
    feature_probs_[i] = 1.0 / (5.0 * std::sqrt(static_cast<double>(i + 1)));

  Rng wrng = Rng::stream(spec_.seed, kWeightsStream);
  w_star_.resize(d);
  for (int i = 0; i < d; ++i) w_star_[i] = wrng.uniform(-1.0, 1.0);

  const int nnz = d - static_cast<int>(std::lround(spec_.sparsity * d));
  if (nnz < d) {
    // keep an exact-count random support
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    Rng srng = Rng::stream(spec_.seed, kSupportStream);
    for (int i = 0; i < nnz; ++i) {
      const int j = i + static_cast<int>(srng.uniform_int(d - i));
      std::swap(idx[i], idx[j]);
    }
    Eigen::VectorXd sparse = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < nnz; ++i) sparse[idx[i]] = w_star_[idx[i]];
    w_star_ = sparse;
  }
}

LogitStream::Batch LogitStream::batch(int t) const {
  Rng rng = Rng::stream(spec_.seed, kBatchStream + static_cast<std::uint64_t>(t));
  Batch b;
  b.features = Eigen::MatrixXd::Zero(spec_.batch, spec_.d);
  b.labels.resize(spec_.batch);
  for (int e = 0; e < spec_.batch; ++e) {
    double margin = 0.0;
    for (int i = 0; i < spec_.d; ++i) {
      if (rng.bernoulli(feature_probs_[i])) {
        b.features(e, i) = 1.0;
        margin += w_star_[i];
      }
    }
    double label = margin >= 0.0 ? 1.0 : -1.0; // sign(0) := +1
    if (rng.bernoulli(spec_.flip_prob)) label = -label;
    b.labels[e] = label;
  }
  return b;
}

std::pair<double, Eigen::VectorXd> logloss_grad(const Eigen::VectorXd& w,
                                                const LogitStream::Batch& batch) {
  const Eigen::Index b = batch.features.rows();
  if (w.size() != batch.features.cols())
    throw std::invalid_argument("logloss_grad: dimension mismatch");
  const Eigen::VectorXd margins =
      batch.labels.array() * (batch.features * w).array();
  double loss = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(w.size());
  for (Eigen::Index e = 0; e < b; ++e) {
    const double m = margins[e];
    loss += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    const double s = 1.0 / (1.0 + std::exp(m)); // sigma(-m)
    grad.noalias() -= batch.labels[e] * s * batch.features.row(e).transpose();
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  return {loss * inv_b, grad * inv_b};
}

void MulticlassProblemSpec::validate() const {
  if (n < 1 || d < 1 || k < 2)
    throw std::invalid_argument("multiclass spec: n >= 1, d >= 1, k >= 2");
  if (r < 1 || r > std::min(k, d))
    throw std::invalid_argument("multiclass spec: r must satisfy 1 <= r <= min(k, d)");
  if (!(flip_prob >= 0.0 && flip_prob < 0.5))
    throw std::invalid_argument("multiclass spec: flip_prob must be in [0, 0.5)");
  if (noise_std < 0.0)
    throw std::invalid_argument("multiclass spec: noise_std must be >= 0");
}

MulticlassDataset gen_multiclass(const MulticlassProblemSpec& spec) {
  spec.validate();
  const int n = spec.n, d = spec.d, k = spec.k, r = spec.r;
  Rng rng = Rng::stream(spec.seed, 7);

  MulticlassDataset out;
  out.spec = spec;
  out.features.resize(n, d);
  for (Eigen::Index i = 0; i < out.features.rows(); ++i)
    for (Eigen::Index j = 0; j < out.features.cols(); ++j)
      out.features(i, j) = rng.normal();

  Eigen::MatrixXd w0 = Eigen::MatrixXd::Zero(k, d);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < r; ++j) w0(i, j) = rng.normal();

  out.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Index y = 0;
    (w0 * out.features.row(i).transpose()).maxCoeff(&y);
    out.labels[i] = static_cast<int>(y);
  }
  for (int i = 0; i < n; ++i) {
    if (rng.bernoulli(spec.flip_prob)) {
      const int offset = 1 + static_cast<int>(rng.uniform_int(k - 1));
      out.labels[i] = (out.labels[i] + offset) % k;
    }
  }
  if (spec.noise_std > 0.0) {
    for (Eigen::Index i = 0; i < out.features.rows(); ++i)
      for (Eigen::Index j = 0; j < out.features.cols(); ++j)
        out.features(i, j) += spec.noise_std * rng.normal();
  }

  // scale s_i ~ i^{-exponent}, sum 1
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i)
    s[i] = std::pow(static_cast<double>(i + 1), -spec.scale_exponent);
  s /= s.sum();

  // random rotation: QR of a standard Gaussian with sign-corrected diagonal
  Eigen::MatrixXd gauss(d, d);
  for (Eigen::Index i = 0; i < gauss.size(); ++i) gauss.data()[i] = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (rmat(i, i) < 0.0) q.col(i) = -q.col(i);

  // column convention: x' = Q S x, W' = W0 S^-1 Q^T, so W' x' = W0 x
  out.features = out.features * s.asDiagonal() * q.transpose();
  out.true_weights = w0 * s.cwiseInverse().asDiagonal() * q.transpose();
  return out;
}

std::pair<double, Eigen::MatrixXd> multiclass_logloss_grad(const Eigen::MatrixXd& w,
                                                           const Eigen::VectorXd& x,
                                                           int label) {
  if (w.cols() != x.size() || label < 0 || label >= w.rows())
    throw std::invalid_argument("multiclass_logloss_grad: shape mismatch");
  Eigen::VectorXd z = w * x;
  const double zmax = z.maxCoeff();
  const Eigen::VectorXd e = (z.array() - zmax).exp();
  const double norm = e.sum();
  const double loss = std::log(norm) + zmax - z[label];
  Eigen::VectorXd p = e / norm;
  p[label] -= 1.0;
  return {loss, p * x.transpose()};
}

void write_logit_csv(std::ostream& os, const LogitProblemSpec& spec) {
  LogitStream stream(spec);
  os << "# kind=logit\n";
  os << "# d=" << spec.d << " batch=" << spec.batch << " horizon=" << spec.horizon
     << " sparsity=";
  print_float(os, spec.sparsity);
  os << " flip_prob=";
  print_float(os, spec.flip_prob);
  os << " seed=" << spec.seed << "\n";
  for (int i = 0; i < spec.d; ++i) os << "x" << i + 1 << ",";
  os << "label\n";
  for (int t = 0; t < spec.horizon; ++t) {
    const LogitStream::Batch b = stream.batch(t);
    for (int e = 0; e < spec.batch; ++e) {
      for (int i = 0; i < spec.d; ++i)
        os << static_cast<int>(b.features(e, i)) << ",";
      os << static_cast<int>(b.labels[e]) << "\n";
    }
  }
}

void write_multiclass_csv(std::ostream& os, const MulticlassProblemSpec& spec) {
  const MulticlassDataset data = gen_multiclass(spec);
  os << "# kind=multiclass\n";
  os << "# n=" << spec.n << " d=" << spec.d << " k=" << spec.k << " r=" << spec.r
     << " flip_prob=";
  print_float(os, spec.flip_prob);
  os << " noise_std=";
  print_float(os, spec.noise_std);
  os << " seed=" << spec.seed << "\n";
  for (int i = 0; i < spec.d; ++i) os << "x" << i + 1 << ",";
  os << "label\n";
  for (int e = 0; e < spec.n; ++e) {
    for (int i = 0; i < spec.d; ++i) {
      print_float(os, data.features(e, i));
      os << ",";
    }
    os << data.labels[e] << "\n";
  }
}

} // namespace hypogd
