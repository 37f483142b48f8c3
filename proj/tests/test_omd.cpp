#include <doctest.h>

#include <cmath>

#include "hypogd/omd.hpp"
#include "hypogd/rng.hpp"

using namespace hypogd;

TEST_CASE("tuned learning rates") {
  CHECK(tuned_eta(StepSizeRule::fixed(0.25)) == 0.25);
  CHECK(tuned_eta(StepSizeRule::theorem6(1.0, 1.0, 4)) ==
        doctest::Approx(0.35355339059327376).epsilon(1e-15));
  const double expected7 = std::sqrt(std::log(3.0) / (2.0 * 100.0 * (1.0 + 7.0)));
  CHECK(tuned_eta(StepSizeRule::theorem7(1.0, 1.0, 7, 100)) ==
        doctest::Approx(expected7).epsilon(1e-15));
  const double expected19 =
      0.5 * std::sqrt(std::log(3.0 / 0.2) / (500.0 * (1.0 + 0.2 * 3.0)));
  CHECK(tuned_eta(StepSizeRule::theorem19(1.0, 0.2, 1.0, 3, 8, 500)) ==
        doctest::Approx(expected19).epsilon(1e-15));

  CHECK_THROWS_AS(StepSizeRule::theorem6(1.0, 0.5, 10), std::invalid_argument);
  CHECK_THROWS_AS(StepSizeRule::theorem7(1.0, 2.0, 5, 10), std::invalid_argument);
  CHECK_THROWS_AS(StepSizeRule::theorem19(1.0, 1.5, 1.0, 2, 2, 10),
                  std::invalid_argument);
}

TEST_CASE("hu_step closed forms") {
  const HypentropyParams one(1.0);
  Eigen::VectorXd w(1), g(1);
  w << 0.0;
  g << 1.0;
  CHECK(hu_step(w, g, 1.0, one)[0] ==
        doctest::Approx(-1.1752011936438014).epsilon(1e-14));

  // zero gradient leaves the iterate unchanged
  Rng rng(31);
  Eigen::VectorXd w2(5);
  for (int i = 0; i < 5; ++i) w2[i] = rng.uniform(-2.0, 2.0);
  const Eigen::VectorXd same = hu_step(w2, Eigen::VectorXd::Zero(5), 0.5, one);
  for (int i = 0; i < 5; ++i) CHECK(same[i] == doctest::Approx(w2[i]).epsilon(1e-13));

  // matches the addition-formula expansion
  for (int trial = 0; trial < 50; ++trial) {
    const double wi = rng.uniform(-3.0, 3.0);
    const double gi = rng.uniform(-1.0, 1.0);
    const double eta = 0.3, beta = 0.7;
    Eigen::VectorXd wv(1), gv(1);
    wv << wi;
    gv << gi;
    const double got = hu_step(wv, gv, eta, HypentropyParams(beta))[0];
    const double expanded = std::sinh(-eta * gi) * std::sqrt(wi * wi + beta * beta) +
                            std::cosh(-eta * gi) * wi;
    CHECK(got == doctest::Approx(expanded).epsilon(1e-12));
  }
}

TEST_CASE("one round with zero gradient has zero regret") {
  OnlineProblem problem;
  problem.domain = ConstraintSet::l2_ball(1.0);
  problem.horizon = 1;
  problem.dim = 3;
  problem.linear_losses = true;
  problem.oracle = [](int, const Eigen::VectorXd& w) {
    return std::make_pair(0.0, Eigen::VectorXd::Zero(w.size()));
  };
  const RegretLedger ledger =
      omd_run(problem, Potential::hypentropy(1.0), StepSizeRule::fixed(0.1));
  CHECK(ledger.final_regret() == 0.0);
  CHECK(ledger.per_round_losses.size() == 1);
}

TEST_CASE("comparators") {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  CHECK(comparator_best_fixed(ConstraintSet::l2_ball(1.0), zero).isZero(0.0));

  Eigen::VectorXd g(2);
  g << 3.0, 4.0;
  const Eigen::VectorXd w2 = comparator_best_fixed(ConstraintSet::l2_ball(1.0), g);
  CHECK(w2[0] == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(w2[1] == doctest::Approx(-0.8).epsilon(1e-15));

  Eigen::VectorXd g1(2);
  g1 << 1.0, -2.0;
  const Eigen::VectorXd w1 = comparator_best_fixed(ConstraintSet::l1_ball(1.0), g1);
  CHECK(w1[0] == 0.0);
  CHECK(w1[1] == 1.0);

  // brute force over the vertices of the L1 ball
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd gg(4);
    for (int i = 0; i < 4; ++i) gg[i] = rng.uniform(-2.0, 2.0);
    const Eigen::VectorXd w = comparator_best_fixed(ConstraintSet::l1_ball(1.0), gg);
    double best = 1e300;
    for (int i = 0; i < 4; ++i)
      for (double s : {-1.0, 1.0}) best = std::min(best, s * gg[i]);
    CHECK(gg.dot(w) == doctest::Approx(best).epsilon(1e-12));
  }

  // trace comparator: top singular pair
  Eigen::MatrixXd gm(2, 2);
  gm << 1.0, 0.0, 0.0, 0.25;
  const Eigen::MatrixXd wt = comparator_best_fixed(2.0, gm);
  CHECK(wt(0, 0) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(std::abs(wt(1, 1)) <= 1e-12);
}

TEST_CASE("three-point identity") {
  const Potential hyp = Potential::hypentropy(0.5);
  Eigen::VectorXd x(2), y(2), z(2);
  x << 0.3, -0.2;
  CHECK(check_three_point(hyp, x, x, x) == 0.0);
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    for (int i = 0; i < 2; ++i) {
      x[i] = rng.uniform(-2.0, 2.0);
      y[i] = rng.uniform(-2.0, 2.0);
      z[i] = rng.uniform(-2.0, 2.0);
    }
    CHECK(check_three_point(hyp, x, y, z) <= 1e-10);
  }
}

TEST_CASE("matrix problem regret accounting") {
  MatrixOnlineProblem problem;
  problem.trace_radius = 1.0;
  problem.horizon = 50;
  problem.rows = 2;
  problem.cols = 3;
  problem.linear_losses = true;
  problem.oracle = [](int t, const WeightMatrix& w) {
    Rng rng = Rng::stream(17, 3000 + static_cast<std::uint64_t>(t));
    Eigen::MatrixXd g(2, 3);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
    g /= WeightMatrix(g).spectral_norm();
    return std::make_pair((g.array() * w.entries().array()).sum(), g);
  };
  const RegretLedger ledger =
      shu_run(problem, HypentropyParams(0.25),
              StepSizeRule::theorem19(1.0, 0.25, 1.0, 2, 3, 50));
  CHECK(ledger.per_round_losses.size() == 50);
  CHECK(ledger.regret_curve.size() == 50);
  // regret against the exact comparator is bounded by the theorem constant
  const double bound =
      4.0 * std::sqrt(50.0 * (1.0 + 0.25 * 2.0) * std::log(3.0 / 0.25));
  CHECK(ledger.final_regret() <= bound);
}
