#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hypogd {

enum class ExperimentKind {
  logit_dense,
  logit_sparse,
  multiclass_unconstrained,
  multiclass_trace,
  regret_linear,
};

enum class AlgorithmKind { hu, shu, gd, eg, egpm, pnorm, schatten_pnorm };

/// A fully resolved run configuration. Sources, in increasing precedence:
/// built-in experiment defaults, config file, HYPOGD_SEED, --set overrides.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::logit_dense;
  AlgorithmKind algorithm = AlgorithmKind::hu;

  double beta = 1.0;
  /// beta expressed in multiples of beta_EG = ||w*||_1 / d (logit runs).
  std::optional<double> beta_egx;

  // exactly one of these three determines the learning rate
  std::optional<double> eta;
  std::optional<double> eta_effective; // beta*eta
  std::optional<double> eta_prime;     // eta = eta_prime / sqrt(1 + beta^2)

  int horizon = 20000;
  std::uint64_t seed = 1;
  int log_every = 10;
  double tau = 500.0; // trace-ball radius (multiclass_trace)
  double pnorm_p = 0.0; // 0: default 2*ln(d) resp. 2*ln(k)

  // problem-shape overrides
  int d = 0;          // 0: experiment default
  int batch = 10;
  double sparsity = -1.0; // <0: experiment default
  double flip_prob = -1.0;
  int n = 0;          // multiclass examples; 0: experiment default
  int k = 15;
  int r = 5;
  double noise_std = 0.05;
  int domain_dim = 50;        // regret_linear
  std::string domain = "l2";  // regret_linear: l1|l2|simplex
  double radius = 1.0;

  std::string output;

  /// Parse a flat key=value file ('#' comments) plus key=value overrides.
  static ExperimentConfig parse(const std::string& path,
                                const std::vector<std::string>& overrides);
  /// Parse from overrides only.
  static ExperimentConfig from_overrides(const std::vector<std::string>& overrides);

  /// The resolved learning rate (also recorded in trace metadata).
  double resolved_eta(double resolved_beta) const;

  /// key=value echo of every resolved field, in fixed order.
  std::vector<std::pair<std::string, std::string>> metadata(double resolved_beta,
                                                            double resolved_eta) const;
};

const char* to_string(ExperimentKind e);
const char* to_string(AlgorithmKind a);

/// Parse the '#'-prefixed metadata block of a trace back into key=value form.
std::map<std::string, std::string> parse_metadata(std::istream& is);

} // namespace hypogd
