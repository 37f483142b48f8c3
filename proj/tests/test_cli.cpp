#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypogd/cli.hpp"
#include "hypogd/config.hpp"
#include "hypogd/synth.hpp"
#include "hypogd/verify.hpp"

using namespace hypogd;

namespace {

std::string run_to_string(const std::vector<std::string>& overrides) {
  const ExperimentConfig config = ExperimentConfig::from_overrides(overrides);
  std::ostringstream os;
  cli::run_experiment(config, os);
  return os.str();
}

} // namespace

TEST_CASE("config parsing, overrides and validation") {
  const char* path = "test_cli_config.tmp";
  {
    std::ofstream f(path);
    f << "# comment line\n";
    f << "experiment = regret_linear\n";
    f << "algorithm = hu   # trailing comment\n";
    f << "beta = 1.0\n";
    f << "horizon = 50\n";
    f << "seed = 4\n";
  }
  const ExperimentConfig c = ExperimentConfig::parse(path, {"seed=11"});
  CHECK(c.experiment == ExperimentKind::regret_linear);
  CHECK(c.seed == 11); // flag beats file
  std::remove(path);

  CHECK_THROWS_AS(
      ExperimentConfig::from_overrides({"eta=0.1", "eta_effective=0.2"}),
      std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_overrides({"nonsense=1"}),
                  std::invalid_argument);
}

TEST_CASE("eta conventions") {
  ExperimentConfig c;
  c.eta_effective = 0.005;
  CHECK(c.resolved_eta(1e6) == doctest::Approx(5e-9).epsilon(1e-15));
  // beta*eta stays at the requested constant across betas
  CHECK(2.0 * c.resolved_eta(2.0) == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(8.0 * c.resolved_eta(8.0) == doctest::Approx(0.005).epsilon(1e-15));

  ExperimentConfig cp;
  cp.eta_prime = 0.1;
  CHECK(cp.resolved_eta(1.0) == doctest::Approx(0.1 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("trace output is deterministic and carries parseable metadata") {
  const std::vector<std::string> overrides = {
      "experiment=regret_linear", "algorithm=hu", "beta=1", "domain=l2",
      "domain_dim=10",            "horizon=200",  "seed=7", "log_every=10"};
  const std::string a = run_to_string(overrides);
  const std::string b = run_to_string(overrides);
  CHECK(a == b);

  std::istringstream in(a);
  const auto meta = parse_metadata(in);
  CHECK(meta.at("experiment") == "regret_linear");
  CHECK(meta.at("algorithm") == "hu");
  CHECK(meta.at("seed") == "7");
  CHECK(meta.count("eta") == 1);
  CHECK(meta.count("eta_effective") == 1);
  const double eta = std::stod(meta.at("eta"));
  const double eff = std::stod(meta.at("eta_effective"));
  CHECK(eff == doctest::Approx(eta * 1.0).epsilon(1e-15));

  // header + 20 logged rows after the metadata block
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,loss,avg_loss,regret");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 20);
}

TEST_CASE("logit trace has the documented row count contract") {
  const std::string csv = run_to_string(
      {"experiment=logit_dense", "algorithm=hu", "beta=1", "eta_prime=0.1",
       "d=50", "horizon=300", "seed=7", "log_every=10"});
  std::istringstream in(csv);
  const auto meta = parse_metadata(in);
  CHECK(meta.at("d") == "50");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,loss,avg_loss,accuracy,l1_dist");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 30); // horizon / log_every
}

TEST_CASE("multiclass trace reports the top singular values and trace norm cap") {
  const std::string csv = run_to_string(
      {"experiment=multiclass_trace", "algorithm=shu", "beta=1", "eta=0.01",
       "n=500", "horizon=120", "seed=3", "log_every=20", "tau=5"});
  std::istringstream in(csv);
  const auto meta = parse_metadata(in);
  CHECK(meta.at("tau") == "5");
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "t,loss,avg_loss,accuracy,l1_dist,sv1,sv2,sv3,sv4,sv5,sv6,sv7,sv8,sv9,sv10");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    // trace norm (= sum of the logged singular values) stays within tau
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(cells, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 15);
    double trace = 0.0;
    for (int i = 5; i < 15; ++i) trace += vals[i];
    CHECK(trace <= 5.0 + 1e-9);
  }
  CHECK(rows == 6);
}

TEST_CASE("default logit_dense run logs 2000 rows over 20000 rounds") {
  const std::string csv = run_to_string(
      {"experiment=logit_dense", "algorithm=hu", "beta=1", "seed=7"});
  std::istringstream in(csv);
  parse_metadata(in);
  std::string line;
  std::getline(in, line); // header
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2000);
}

TEST_CASE("beta can be given in multiples of beta_EG") {
  LogitProblemSpec spec;
  spec.d = 60;
  spec.seed = 5;
  spec.horizon = 20;
  const LogitStream stream(spec);

  const std::string csv = run_to_string(
      {"experiment=logit_dense", "algorithm=hu", "beta_egx=2", "d=60",
       "horizon=20", "seed=5", "log_every=20"});
  std::istringstream in(csv);
  const auto meta = parse_metadata(in);
  CHECK(std::stod(meta.at("beta")) ==
        doctest::Approx(2.0 * stream.beta_eg()).epsilon(1e-14));
}

TEST_CASE("HYPOGD_SEED overrides the config seed but not flags") {
  setenv("HYPOGD_SEED", "123", 1);
  const ExperimentConfig from_env = ExperimentConfig::from_overrides({});
  CHECK(from_env.seed == 123);
  const ExperimentConfig from_flag = ExperimentConfig::from_overrides({"seed=9"});
  CHECK(from_flag.seed == 9);
  unsetenv("HYPOGD_SEED");
}

TEST_CASE("metadata round-trips into an identical run") {
  const std::vector<std::string> original = {
      "experiment=logit_dense", "algorithm=hu", "beta_egx=2", "eta_prime=0.1",
      "d=40",                   "horizon=60",   "seed=6",     "log_every=20"};
  const std::string first = run_to_string(original);

  std::istringstream in(first);
  const auto meta = parse_metadata(in);
  std::vector<std::string> replay;
  for (const char* key : {"experiment", "algorithm", "beta", "eta", "horizon",
                          "seed", "log_every", "d", "batch", "sparsity",
                          "flip_prob"})
    replay.push_back(std::string(key) + "=" + meta.at(key));
  const std::string second = run_to_string(replay);
  CHECK(first.substr(first.find("\nt,")) == second.substr(second.find("\nt,")));
}

TEST_CASE("multi-config runs execute in parallel workers") {
  const char* cfg_a = "test_cli_job_a.tmp";
  const char* cfg_b = "test_cli_job_b.tmp";
  const char* out_a = "test_cli_job_a.csv";
  const char* out_b = "test_cli_job_b.csv";
  for (const auto& [path, seed, out] :
       {std::tuple{cfg_a, 3, out_a}, std::tuple{cfg_b, 4, out_b}}) {
    std::ofstream f(path);
    f << "experiment = regret_linear\nalgorithm = gd\neta = 0.05\n"
      << "domain_dim = 6\nhorizon = 40\nlog_every = 10\n"
      << "seed = " << seed << "\noutput = " << out << "\n";
  }
  std::ostringstream out, err;
  const char* argv[] = {"hypogd", "run",    "--config", cfg_a,
                        "--config", cfg_b,  "--jobs",   "2"};
  CHECK(cli::main_impl(8, argv, out, err) == 0);
  for (const char* path : {out_a, out_b}) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string all((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
    CHECK(all.find("t,loss,avg_loss,regret") != std::string::npos);
  }
  for (const char* p : {cfg_a, cfg_b, out_a, out_b}) std::remove(p);
}

TEST_CASE("main_impl wires the subcommands") {
  {
    std::ostringstream out, err;
    const char* argv[] = {"hypogd", "verify", "equivalence"};
    const int code = cli::main_impl(3, argv, out, err);
    CHECK(code == 0);
    CHECK(out.str().find("[PASS]") != std::string::npos);
    CHECK(out.str().find("OK") != std::string::npos);
  }
  {
    std::ostringstream out, err;
    const char* argv[] = {"hypogd", "verify", "bogus"};
    const int code = cli::main_impl(3, argv, out, err);
    CHECK(code == 1);
    CHECK(err.str().find("unknown suite") != std::string::npos);
  }
  {
    std::ostringstream out, err;
    const char* argv[] = {"hypogd", "generate", "--kind", "logit", "--set",
                          "d=5",    "--set",    "batch=2", "--set", "horizon=3"};
    const int code = cli::main_impl(10, argv, out, err);
    CHECK(code == 0);
    CHECK(out.str().find("x1,x2,x3,x4,x5,label") != std::string::npos);
  }
  {
    std::ostringstream out, err;
    const char* argv[] = {"hypogd", "run", "--set", "experiment=regret_linear",
                          "--set",  "algorithm=gd", "--set", "horizon=20",
                          "--set",  "domain_dim=4", "--set", "eta=0.1"};
    const int code = cli::main_impl(12, argv, out, err);
    CHECK(code == 0);
    CHECK(out.str().find("t,loss,avg_loss,regret") != std::string::npos);
  }
}
