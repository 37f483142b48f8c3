#include "hypogd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/SVD>

#include "hypogd/baselines.hpp"
#include "hypogd/errors.hpp"
#include "hypogd/omd.hpp"
#include "hypogd/rng.hpp"
#include "hypogd/spectral.hpp"
#include "hypogd/synth.hpp"
#include "hypogd/verify.hpp"

namespace hypogd::cli {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class TraceWriter {
public:
  TraceWriter(std::ostream& os, const ExperimentConfig& config, double beta,
              double eta, const std::vector<std::string>& columns)
      : os_(os), columns_(columns) {
    for (const auto& [k, v] : config.metadata(beta, eta))
      os_ << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
      os_ << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
  }

  void row(long t, const std::vector<double>& values) {
    os_ << t;
    for (double v : values) os_ << "," << fmt17(v);
    os_ << "\n";
  }

private:
  std::ostream& os_;
  std::vector<std::string> columns_;
};

ConstraintSet domain_from_config(const ExperimentConfig& c) {
  if (c.domain == "l1") return ConstraintSet::l1_ball(c.radius);
  if (c.domain == "l2") return ConstraintSet::l2_ball(c.radius);
  if (c.domain == "simplex") return ConstraintSet::simplex(c.radius);
  throw std::invalid_argument("regret_linear: domain must be l1|l2|simplex");
}

[[noreturn]] void fail_round(int round, const char* module, const std::exception& e) {
  throw std::runtime_error("round " + std::to_string(round + 1) + " (" +
                           module + "): " + e.what());
}

// ---------------------------------------------------------------------------
// regret_linear: adversarial linear losses with the exact comparator

void run_regret_linear(const ExperimentConfig& c, std::ostream& os) {
  const int d = c.domain_dim, T = c.horizon;
  const ConstraintSet set = domain_from_config(c);
  const double beta = c.beta;

  const bool l2 = set.kind == ConstraintSet::Kind::l2_ball;
  auto gradient = [&](int t) {
    Rng rng = Rng::stream(c.seed, 1000 + static_cast<std::uint64_t>(t));
    Eigen::VectorXd g(d);
    const double scale = l2 ? 1.0 / std::sqrt(static_cast<double>(d)) : 1.0;
    for (int i = 0; i < d; ++i) g[i] = rng.bernoulli(0.5) ? scale : -scale;
    return g;
  };

  StepSizeRule rule = StepSizeRule::fixed(1.0);
  if (c.eta || c.eta_effective || c.eta_prime) {
    rule = StepSizeRule::fixed(c.resolved_eta(beta));
  } else if (c.algorithm == AlgorithmKind::hu && l2 && beta >= 1.0) {
    rule = StepSizeRule::theorem6(1.0, beta, T);
  } else if (c.algorithm == AlgorithmKind::hu &&
             set.kind == ConstraintSet::Kind::l1_ball && beta <= 1.0) {
    rule = StepSizeRule::theorem7(1.0, beta, d, T);
  } else {
    rule = StepSizeRule::fixed(set.radius / std::sqrt(static_cast<double>(T)));
  }

  OnlineProblem problem;
  problem.domain = set;
  problem.horizon = T;
  problem.dim = d;
  problem.linear_losses = true;
  problem.oracle = [&](int t, const Eigen::VectorXd& w) {
    const Eigen::VectorXd g = gradient(t);
    return std::make_pair(g.dot(w), g);
  };

  RegretLedger ledger;
  switch (c.algorithm) {
    case AlgorithmKind::hu:
      ledger = omd_run(problem, Potential::hypentropy(beta), rule);
      break;
    case AlgorithmKind::gd:
      ledger = omd_run(problem, Potential::squared_euclidean(), rule);
      break;
    case AlgorithmKind::eg:
      if (set.kind != ConstraintSet::Kind::simplex)
        throw std::invalid_argument("eg runs over the simplex (set domain=simplex)");
      ledger = omd_run(problem, Potential::entropy(), rule);
      break;
    case AlgorithmKind::egpm: {
      // EG+- over the ball of radius beta*d
      EgpmState state = EgpmState::init(d, beta);
      const double eta = tuned_eta(rule);
      ledger.cumulative_gradient = Eigen::VectorXd::Zero(d);
      double cum = 0.0;
      for (int t = 0; t < T; ++t) {
        const Eigen::VectorXd w = state.weights();
        const Eigen::VectorXd g = gradient(t);
        ledger.per_round_losses.push_back(g.dot(w));
        cum += g.dot(w);
        ledger.cumulative_gradient += g;
        ledger.comparator_loss =
            -beta * d * ledger.cumulative_gradient.lpNorm<Eigen::Infinity>();
        ledger.regret_curve.push_back(cum - ledger.comparator_loss);
        try {
          state = egpm_step(state, g, eta);
        } catch (const OverflowGuardError& e) {
          fail_round(t, "egpm", e);
        }
      }
      break;
    }
    default:
      throw std::invalid_argument("regret_linear supports hu|gd|eg|egpm");
  }

  TraceWriter writer(os, c, beta, tuned_eta(rule), {"t", "loss", "avg_loss", "regret"});
  double cum = 0.0;
  for (int t = 0; t < T; ++t) {
    cum += ledger.per_round_losses[t];
    if ((t + 1) % c.log_every == 0)
      writer.row(t + 1, {ledger.per_round_losses[t], cum / (t + 1),
                         ledger.regret_curve[t]});
  }
}

// ---------------------------------------------------------------------------
// binary logistic experiments

void run_logit(const ExperimentConfig& c, std::ostream& os) {
  const bool sparse = c.experiment == ExperimentKind::logit_sparse;
  LogitProblemSpec spec;
  spec.d = c.d > 0 ? c.d : (sparse ? 10000 : 500);
  spec.sparsity = c.sparsity >= 0.0 ? c.sparsity : (sparse ? 0.9 : 0.0);
  spec.flip_prob = c.flip_prob >= 0.0 ? c.flip_prob : 0.1;
  spec.batch = c.batch;
  spec.horizon = c.horizon;
  spec.seed = c.seed;
  const LogitStream stream(spec);

  const double beta = c.beta_egx ? *c.beta_egx * stream.beta_eg() : c.beta;
  const double eta = c.resolved_eta(beta);
  const double p = c.pnorm_p > 0.0 ? c.pnorm_p : 2.0 * std::log(spec.d);

  ExperimentConfig resolved = c;
  resolved.d = spec.d;
  resolved.sparsity = spec.sparsity;
  resolved.flip_prob = spec.flip_prob;
  resolved.pnorm_p = p;
  TraceWriter writer(os, resolved, beta, eta,
                     {"t", "loss", "avg_loss", "accuracy", "l1_dist"});

  const HypentropyParams params(beta);
  const PNormParams pn(p);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(spec.d);
  EgpmState eg_state = EgpmState::init(spec.d, beta);

  double cum_loss = 0.0;
  long correct = 0, seen = 0;
  for (int t = 0; t < spec.horizon; ++t) {
    const LogitStream::Batch batch = stream.batch(t);
    if (c.algorithm == AlgorithmKind::egpm) w = eg_state.weights();
    const auto [loss, g] = logloss_grad(w, batch);
    cum_loss += loss;
    const Eigen::VectorXd margins = batch.features * w;
    for (Eigen::Index e = 0; e < margins.size(); ++e) {
      const double pred = margins[e] >= 0.0 ? 1.0 : -1.0;
      if (pred == batch.labels[e]) ++correct;
      ++seen;
    }

    try {
      switch (c.algorithm) {
        case AlgorithmKind::hu:
          w = hu_step(w, g, eta, params);
          break;
        case AlgorithmKind::gd:
          w = gd_step(w, g, eta);
          break;
        case AlgorithmKind::pnorm:
          w = pnorm_step(w, g, eta, pn);
          break;
        case AlgorithmKind::egpm:
          eg_state = egpm_step(eg_state, g, eta);
          w = eg_state.weights();
          break;
        default:
          throw std::invalid_argument("logit experiments support hu|gd|pnorm|egpm");
      }
    } catch (const OverflowGuardError& e) {
      fail_round(t, to_string(c.algorithm), e);
    } catch (const ConvergenceError& e) {
      fail_round(t, to_string(c.algorithm), e);
    }

    if ((t + 1) % c.log_every == 0)
      writer.row(t + 1, {loss, cum_loss / (t + 1),
                         static_cast<double>(correct) / seen,
                         (w - stream.true_weights()).lpNorm<1>()});
  }
}

// ---------------------------------------------------------------------------
// multiclass experiments

void run_multiclass(const ExperimentConfig& c, std::ostream& os) {
  MulticlassProblemSpec spec;
  spec.n = c.n > 0 ? c.n : 200000;
  spec.d = c.d > 0 ? c.d : 25;
  spec.k = c.k;
  spec.r = c.r;
  spec.noise_std = c.noise_std;
  spec.flip_prob = c.flip_prob >= 0.0 ? c.flip_prob : 0.05;
  spec.seed = c.seed;
  const MulticlassDataset data = gen_multiclass(spec);

  const bool trace = c.experiment == ExperimentKind::multiclass_trace;
  if (trace && c.algorithm == AlgorithmKind::schatten_pnorm)
    throw std::invalid_argument(
        "schatten_pnorm has no closed-form trace-ball projection; use "
        "multiclass_unconstrained");

  const double beta = c.beta;
  const double eta = c.resolved_eta(beta);
  const double p = c.pnorm_p > 0.0 ? c.pnorm_p : 2.0 * std::log(spec.k);

  ExperimentConfig resolved = c;
  resolved.n = spec.n;
  resolved.d = spec.d;
  resolved.flip_prob = spec.flip_prob;
  resolved.pnorm_p = p;
  std::vector<std::string> cols = {"t", "loss", "avg_loss", "accuracy", "l1_dist"};
  for (int i = 1; i <= 10; ++i) cols.push_back("sv" + std::to_string(i));
  TraceWriter writer(os, resolved, beta, eta, cols);

  const HypentropyParams params(beta);
  const PNormParams pn(p);
  WeightMatrix wm(Eigen::MatrixXd::Zero(spec.k, spec.d));
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(spec.k, spec.d);

  std::vector<int> order(spec.n);
  for (int i = 0; i < spec.n; ++i) order[i] = i;
  Rng shuffle_rng = Rng::stream(spec.seed, 999);

  double cum_loss = 0.0;
  long correct = 0;
  for (int t = 0; t < c.horizon; ++t) {
    if (t % spec.n == 0) {
      for (int i = spec.n - 1; i > 0; --i) {
        const int j = static_cast<int>(shuffle_rng.uniform_int(i + 1));
        std::swap(order[i], order[j]);
      }
    }
    const int idx = order[t % spec.n];
    const Eigen::VectorXd x = data.features.row(idx).transpose();
    const int label = data.labels[idx];
    const Eigen::MatrixXd& cur = c.algorithm == AlgorithmKind::shu ? wm.entries() : w;
    const auto [loss, g] = multiclass_logloss_grad(cur, x, label);
    cum_loss += loss;
    Eigen::Index pred = 0;
    (cur * x).maxCoeff(&pred);
    if (static_cast<int>(pred) == label) ++correct;

    try {
      switch (c.algorithm) {
        case AlgorithmKind::shu: {
          WeightMatrix half = shu_step(wm, g, eta, params);
          wm = trace ? project_trace_ball(half, c.tau, params) : half;
          break;
        }
        case AlgorithmKind::gd: {
          w -= eta * g;
          if (trace) w = euclidean_project_trace_ball(w, c.tau);
          break;
        }
        case AlgorithmKind::schatten_pnorm:
          w = schatten_pnorm_step(w, g, eta, pn);
          break;
        default:
          throw std::invalid_argument(
              "multiclass experiments support shu|gd|schatten_pnorm");
      }
    } catch (const OverflowGuardError& e) {
      fail_round(t, to_string(c.algorithm), e);
    } catch (const ConvergenceError& e) {
      fail_round(t, to_string(c.algorithm), e);
    }

    if ((t + 1) % c.log_every == 0) {
      const Eigen::MatrixXd& now =
          c.algorithm == AlgorithmKind::shu ? wm.entries() : w;
      Eigen::VectorXd sv;
      if (c.algorithm == AlgorithmKind::shu) {
        sv = wm.sigma();
      } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(now);
        sv = svd.singularValues();
      }
      std::vector<double> vals = {loss, cum_loss / (t + 1),
                                  static_cast<double>(correct) / (t + 1),
                                  WeightMatrix(now - data.true_weights).trace_norm()};
      for (int i = 0; i < 10; ++i)
        vals.push_back(i < sv.size() ? sv[i] : 0.0);
      writer.row(t + 1, vals);
    }
  }
}

} // namespace

void run_experiment(const ExperimentConfig& config, std::ostream& os) {
  switch (config.experiment) {
    case ExperimentKind::regret_linear:
      run_regret_linear(config, os);
      return;
    case ExperimentKind::logit_dense:
    case ExperimentKind::logit_sparse:
      run_logit(config, os);
      return;
    case ExperimentKind::multiclass_unconstrained:
    case ExperimentKind::multiclass_trace:
      run_multiclass(config, os);
      return;
  }
}

namespace {

int do_run(const std::vector<std::string>& configs,
           const std::vector<std::string>& sets, const std::string& output,
           int log_every, int jobs, std::ostream& out, std::ostream& err) {
  std::vector<std::string> overrides = sets;
  if (log_every > 0) overrides.push_back("log_every=" + std::to_string(log_every));
  if (!output.empty()) overrides.push_back("output=" + output);

  std::vector<ExperimentConfig> runs;
  if (configs.empty()) {
    runs.push_back(ExperimentConfig::from_overrides(overrides));
  } else {
    for (const auto& path : configs)
      runs.push_back(ExperimentConfig::parse(path, overrides));
  }

  auto execute = [&](const ExperimentConfig& config) {
    if (config.output.empty() || config.output == "-") {
      run_experiment(config, out);
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file)
        throw std::invalid_argument("cannot open output: " + config.output);
      run_experiment(config, file);
    }
  };

  if (runs.size() > 1) {
    for (const auto& r : runs)
      if (r.output.empty())
        throw std::invalid_argument("multi-config runs need per-config output paths");
  }

  if (jobs <= 1 || runs.size() == 1) {
    for (const auto& r : runs) execute(r);
    return 0;
  }

  std::vector<std::string> errors(runs.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&]() {
    for (;;) {
      std::size_t mine;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= runs.size()) return;
        mine = next++;
      }
      try {
        execute(runs[mine]);
      } catch (const std::exception& e) {
        errors[mine] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::min<int>(jobs, static_cast<int>(runs.size())); ++j)
    pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  bool ok = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!errors[i].empty()) {
      err << "run " << i << " failed: " << errors[i] << "\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}

int do_verify(const std::string& suite, std::uint64_t seed, std::ostream& out) {
  const std::vector<PropertyResult> results = verify_suite(suite, seed);
  bool ok = true;
  for (const auto& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " — " << r.detail
        << " (slack " << r.slack << ")\n";
    ok = ok && r.pass;
  }
  out << (ok ? "OK" : "FAILED") << ": " << results.size() << " properties\n";
  return ok ? 0 : 1;
}

int do_generate(const std::string& kind, const std::vector<std::string>& sets,
                const std::string& output, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (kind == "logit") {
      LogitProblemSpec spec;
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("expected key=value: " + kv);
        const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "d") spec.d = std::stoi(v);
        else if (k == "batch") spec.batch = std::stoi(v);
        else if (k == "horizon") spec.horizon = std::stoi(v);
        else if (k == "sparsity") spec.sparsity = std::stod(v);
        else if (k == "flip_prob") spec.flip_prob = std::stod(v);
        else if (k == "seed") spec.seed = std::stoull(v);
        else throw std::invalid_argument("unknown logit key: " + k);
      }
      write_logit_csv(os, spec);
    } else if (kind == "multiclass") {
      MulticlassProblemSpec spec;
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("expected key=value: " + kv);
        const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "n") spec.n = std::stoi(v);
        else if (k == "d") spec.d = std::stoi(v);
        else if (k == "k") spec.k = std::stoi(v);
        else if (k == "r") spec.r = std::stoi(v);
        else if (k == "flip_prob") spec.flip_prob = std::stod(v);
        else if (k == "noise_std") spec.noise_std = std::stod(v);
        else if (k == "seed") spec.seed = std::stoull(v);
        else throw std::invalid_argument("unknown multiclass key: " + k);
      }
      write_multiclass_csv(os, spec);
    } else {
      throw std::invalid_argument("generate: kind must be logit|multiclass");
    }
  };
  if (output.empty() || output == "-") {
    write(out);
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output: " + output);
    write(file);
  }
  return 0;
}

} // namespace

int main_impl(int argc, const char* const* argv, std::ostream& out,
              std::ostream& err) {
  CLI::App app{"hypentropy online mirror descent toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute a configured experiment run");
  std::vector<std::string> configs, sets;
  std::string output;
  int log_every = -1, jobs = 1;
  run->add_option("--config", configs, "config file path (repeatable)");
  run->add_option("--set", sets, "key=value override (repeatable)");
  run->add_option("--output", output, "trace CSV path ('-' for stdout)");
  run->add_option("--log-every", log_every, "logging interval in rounds");
  run->add_option("--jobs", jobs, "parallel workers for multi-config runs");

  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  std::string suite;
  std::uint64_t vseed = 1;
  verify->add_option("suite", suite,
                     "potentials|projections|spectral|regret|equivalence|all")
      ->required();
  verify->add_option("--seed", vseed, "sampler seed");

  auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
  std::string kind;
  std::vector<std::string> gen_sets;
  std::string gen_output;
  gen->add_option("--kind", kind, "logit|multiclass")->required();
  gen->add_option("--set", gen_sets, "key=value spec override (repeatable)");
  gen->add_option("--output", gen_output, "dataset CSV path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::stringstream buf;
    const int code = app.exit(e, buf, buf);
    (code == 0 ? out : err) << buf.str();
    return code;
  }

  try {
    if (run->parsed()) return do_run(configs, sets, output, log_every, jobs, out, err);
    if (verify->parsed()) return do_verify(suite, vseed, out);
    if (gen->parsed()) return do_generate(kind, gen_sets, gen_output, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace hypogd::cli
