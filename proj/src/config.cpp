#include "hypogd/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace hypogd {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

ExperimentKind parse_experiment(const std::string& v) {
  if (v == "logit_dense") return ExperimentKind::logit_dense;
  if (v == "logit_sparse") return ExperimentKind::logit_sparse;
  if (v == "multiclass_unconstrained") return ExperimentKind::multiclass_unconstrained;
  if (v == "multiclass_trace") return ExperimentKind::multiclass_trace;
  if (v == "regret_linear") return ExperimentKind::regret_linear;
  throw std::invalid_argument("unknown experiment: " + v);
}

AlgorithmKind parse_algorithm(const std::string& v) {
  if (v == "hu") return AlgorithmKind::hu;
  if (v == "shu") return AlgorithmKind::shu;
  if (v == "gd") return AlgorithmKind::gd;
  if (v == "eg") return AlgorithmKind::eg;
  if (v == "egpm") return AlgorithmKind::egpm;
  if (v == "pnorm") return AlgorithmKind::pnorm;
  if (v == "schatten_pnorm") return AlgorithmKind::schatten_pnorm;
  throw std::invalid_argument("unknown algorithm: " + v);
}

double parse_double(const std::string& k, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric value for " + k + ": " + v);
  }
}

long parse_long(const std::string& k, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer value for " + k + ": " + v);
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment") c.experiment = parse_experiment(value);
  else if (key == "algorithm") c.algorithm = parse_algorithm(value);
  else if (key == "beta") c.beta = parse_double(key, value);
  else if (key == "beta_egx") c.beta_egx = parse_double(key, value);
  else if (key == "eta") c.eta = parse_double(key, value);
  else if (key == "eta_effective") c.eta_effective = parse_double(key, value);
  else if (key == "eta_prime") c.eta_prime = parse_double(key, value);
  else if (key == "horizon") c.horizon = static_cast<int>(parse_long(key, value));
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_long(key, value));
  else if (key == "log_every") c.log_every = static_cast<int>(parse_long(key, value));
  else if (key == "tau") c.tau = parse_double(key, value);
  else if (key == "p") c.pnorm_p = parse_double(key, value);
  else if (key == "d") c.d = static_cast<int>(parse_long(key, value));
  else if (key == "batch") c.batch = static_cast<int>(parse_long(key, value));
  else if (key == "sparsity") c.sparsity = parse_double(key, value);
  else if (key == "flip_prob") c.flip_prob = parse_double(key, value);
  else if (key == "n") c.n = static_cast<int>(parse_long(key, value));
  else if (key == "k") c.k = static_cast<int>(parse_long(key, value));
  else if (key == "r") c.r = static_cast<int>(parse_long(key, value));
  else if (key == "noise_std") c.noise_std = parse_double(key, value);
  else if (key == "domain_dim") c.domain_dim = static_cast<int>(parse_long(key, value));
  else if (key == "domain") c.domain = value;
  else if (key == "radius") c.radius = parse_double(key, value);
  else if (key == "output") c.output = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

void apply_pair(ExperimentConfig& c, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("expected key=value, got: " + kv);
  apply(c, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
}

void finish(ExperimentConfig& c, bool seed_overridden_by_flag) {
  // precedence: flag > env > file
  if (!seed_overridden_by_flag) {
    if (const char* env = std::getenv("HYPOGD_SEED"))
      c.seed = static_cast<std::uint64_t>(parse_long("HYPOGD_SEED", env));
  }
  const int rates = (c.eta ? 1 : 0) + (c.eta_effective ? 1 : 0) + (c.eta_prime ? 1 : 0);
  if (rates > 1)
    throw std::invalid_argument(
        "config: set exactly one of eta, eta_effective, eta_prime");
  if (c.log_every < 1) throw std::invalid_argument("config: log_every must be >= 1");
  if (c.horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& path,
                                         const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ExperimentConfig c;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    apply_pair(c, line);
  }
  bool seed_flag = false;
  for (const auto& kv : overrides) {
    if (kv.rfind("seed", 0) == 0) seed_flag = true;
    apply_pair(c, kv);
  }
  finish(c, seed_flag);
  return c;
}

ExperimentConfig ExperimentConfig::from_overrides(
    const std::vector<std::string>& overrides) {
  ExperimentConfig c;
  bool seed_flag = false;
  for (const auto& kv : overrides) {
    if (kv.rfind("seed", 0) == 0) seed_flag = true;
    apply_pair(c, kv);
  }
  finish(c, seed_flag);
  return c;
}

double ExperimentConfig::resolved_eta(double resolved_beta) const {
  if (eta) return *eta;
  if (eta_effective) return *eta_effective / resolved_beta;
  if (eta_prime) return *eta_prime / std::sqrt(1.0 + resolved_beta * resolved_beta);
  // default convention for experiment runs
  return 0.1 / std::sqrt(1.0 + resolved_beta * resolved_beta);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::metadata(
    double resolved_beta, double resolved_eta) const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("version", "hypogd 1.0.0");
  kv.emplace_back("experiment", to_string(experiment));
  kv.emplace_back("algorithm", to_string(algorithm));
  kv.emplace_back("beta", format_double(resolved_beta));
  kv.emplace_back("eta", format_double(resolved_eta));
  kv.emplace_back("eta_effective", format_double(resolved_beta * resolved_eta));
  kv.emplace_back("horizon", std::to_string(horizon));
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("log_every", std::to_string(log_every));
  switch (experiment) {
    case ExperimentKind::logit_dense:
    case ExperimentKind::logit_sparse:
      kv.emplace_back("d", std::to_string(d));
      kv.emplace_back("batch", std::to_string(batch));
      kv.emplace_back("sparsity", format_double(sparsity));
      kv.emplace_back("flip_prob", format_double(flip_prob));
      break;
    case ExperimentKind::multiclass_unconstrained:
    case ExperimentKind::multiclass_trace:
      kv.emplace_back("n", std::to_string(n));
      kv.emplace_back("d", std::to_string(d));
      kv.emplace_back("k", std::to_string(k));
      kv.emplace_back("r", std::to_string(r));
      kv.emplace_back("noise_std", format_double(noise_std));
      kv.emplace_back("flip_prob", format_double(flip_prob));
      if (experiment == ExperimentKind::multiclass_trace)
        kv.emplace_back("tau", format_double(tau));
      break;
    case ExperimentKind::regret_linear:
      kv.emplace_back("domain", domain);
      kv.emplace_back("domain_dim", std::to_string(domain_dim));
      kv.emplace_back("radius", format_double(radius));
      break;
  }
  if (algorithm == AlgorithmKind::pnorm || algorithm == AlgorithmKind::schatten_pnorm)
    kv.emplace_back("p", format_double(pnorm_p));
  return kv;
}

const char* to_string(ExperimentKind e) {
  switch (e) {
    case ExperimentKind::logit_dense: return "logit_dense";
    case ExperimentKind::logit_sparse: return "logit_sparse";
    case ExperimentKind::multiclass_unconstrained: return "multiclass_unconstrained";
    case ExperimentKind::multiclass_trace: return "multiclass_trace";
    case ExperimentKind::regret_linear: return "regret_linear";
  }
  return "?";
}

const char* to_string(AlgorithmKind a) {
  switch (a) {
    case AlgorithmKind::hu: return "hu";
    case AlgorithmKind::shu: return "shu";
    case AlgorithmKind::gd: return "gd";
    case AlgorithmKind::eg: return "eg";
    case AlgorithmKind::egpm: return "egpm";
    case AlgorithmKind::pnorm: return "pnorm";
    case AlgorithmKind::schatten_pnorm: return "schatten_pnorm";
  }
  return "?";
}

std::map<std::string, std::string> parse_metadata(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (is.peek() == '#' && std::getline(is, line)) {
    std::string body = trim(line.substr(1));
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    kv[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return kv;
}

} // namespace hypogd
