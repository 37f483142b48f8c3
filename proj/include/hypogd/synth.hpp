#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace hypogd {

/// Binary logistic stream: power-law 0/1 features Pr[x_i=1] = 1/(5*sqrt(i)),
/// labels sign(<w*, x>) flipped with probability flip_prob.
struct LogitProblemSpec {
  int d = 500;
  double sparsity = 0.0; // fraction of zero weights in w*
  double flip_prob = 0.1;
  int batch = 10;
  int horizon = 20000;
  std::uint64_t seed = 1;

  void validate() const;
};

class LogitStream {
public:
  explicit LogitStream(LogitProblemSpec spec);

  const LogitProblemSpec& spec() const { return spec_; }
  const Eigen::VectorXd& true_weights() const { return w_star_; }
  /// ||w*||_1 / d, the EG-scale temperature.
  double beta_eg() const { return w_star_.lpNorm<1>() / spec_.d; }

  struct Batch {
    Eigen::MatrixXd features; // batch x d
    Eigen::VectorXd labels;   // +-1
  };
  /// Deterministic function of (spec, t); batches are independent streams
  /// and can be generated in parallel.
  Batch batch(int t) const;

private:
  LogitProblemSpec spec_;
  Eigen::VectorXd w_star_;
  Eigen::VectorXd feature_probs_;
};

/// Mean binary log-loss over the batch and its gradient.
std::pair<double, Eigen::VectorXd> logloss_grad(const Eigen::VectorXd& w,
                                                const LogitStream::Batch& batch);

/// Multiclass dataset: rank-r ground truth, 5% label flips, feature noise,
/// power-law coordinate scaling and a random rotation (inverse applied to
/// the weights so argmax(W x) is preserved).
struct MulticlassProblemSpec {
  int n = 200000;
  int d = 25;
  int k = 15;
  int r = 5;
  double flip_prob = 0.05;
  double noise_std = 0.05;
  double scale_exponent = 1.1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct MulticlassDataset {
  MulticlassProblemSpec spec;
  Eigen::MatrixXd features; // n x d
  std::vector<int> labels;
  Eigen::MatrixXd true_weights; // k x d, rank r
};

MulticlassDataset gen_multiclass(const MulticlassProblemSpec& spec);

/// Softmax cross-entropy for one example and its gradient matrix (p - e_y) x^T.
std::pair<double, Eigen::MatrixXd> multiclass_logloss_grad(const Eigen::MatrixXd& w,
                                                           const Eigen::VectorXd& x,
                                                           int label);

/// CSV export: '#'-prefixed metadata, header row, one example per line,
/// label last. 17 significant digits, byte-stable across runs.
void write_logit_csv(std::ostream& os, const LogitProblemSpec& spec);
void write_multiclass_csv(std::ostream& os, const MulticlassProblemSpec& spec);

} // namespace hypogd
