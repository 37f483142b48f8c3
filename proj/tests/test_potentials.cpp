#include <doctest.h>

#include <cmath>
#include <limits>

#include "hypogd/potentials.hpp"
#include "hypogd/rng.hpp"

using namespace hypogd;

namespace {
Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}
} // namespace

TEST_CASE("hypentropy parameter validation") {
  CHECK_THROWS_AS(HypentropyParams(0.0), std::invalid_argument);
  CHECK_THROWS_AS(HypentropyParams(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(HypentropyParams(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK_THROWS_AS(PNormParams(1.5), std::invalid_argument);
  const PNormParams pn(5.4);
  CHECK(1.0 / pn.p + 1.0 / pn.q == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hyp_value closed-form points") {
  const HypentropyParams one(1.0);
  CHECK(hyp_value(Eigen::VectorXd::Zero(3), one) == doctest::Approx(-3.0).epsilon(1e-15));
  CHECK(hyp_value(vec1(1.0), one) ==
        doctest::Approx(-0.53283997535355202).epsilon(1e-14));
  CHECK(hyp_value(vec1(-1.0), one) == hyp_value(vec1(1.0), one)); // even
  Eigen::VectorXd bad = vec1(std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(hyp_value(bad, one), std::domain_error);
}

TEST_CASE("hyp_grad closed-form points") {
  const HypentropyParams one(1.0);
  CHECK(hyp_grad(vec1(0.0), one)[0] == 0.0);
  CHECK(hyp_grad(vec1(1.0), one)[0] ==
        doctest::Approx(0.88137358701954303).epsilon(1e-14));
  // inverse identity at beta*sinh(2)
  for (double beta : {0.03, 1.0, 40.0}) {
    const HypentropyParams params(beta);
    CHECK(hyp_grad(vec1(beta * std::sinh(2.0)), params)[0] ==
          doctest::Approx(2.0).epsilon(1e-14));
  }
  // odd and strictly increasing
  const Eigen::VectorXd g1 = hyp_grad(vec1(0.7), one);
  CHECK(hyp_grad(vec1(-0.7), one)[0] == -g1[0]);
  CHECK(hyp_grad(vec1(0.8), one)[0] > g1[0]);
}

TEST_CASE("hyp_grad_inv and the overflow guard") {
  CHECK(hyp_grad_inv(vec1(0.0), HypentropyParams(3.0))[0] == 0.0);
  CHECK(hyp_grad_inv(vec1(1.0), HypentropyParams(2.0))[0] ==
        doctest::Approx(2.3504023872876029).epsilon(1e-14));

  Eigen::VectorXd z(3);
  z << 0.0, -701.0, 2.0;
  try {
    hyp_grad_inv(z, HypentropyParams(1.0));
    FAIL("expected OverflowGuardError");
  } catch (const OverflowGuardError& e) {
    CHECK(e.coordinate == 1);
    CHECK(e.value == -701.0);
  }

  // roundtrip on random inputs
  Rng rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(6);
    for (int i = 0; i < 6; ++i) x[i] = rng.uniform(-20.0, 20.0);
    const HypentropyParams params(rng.uniform(0.05, 5.0));
    const Eigen::VectorXd back = hyp_grad_inv(hyp_grad(x, params), params);
    for (int i = 0; i < 6; ++i)
      CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
  }
}

TEST_CASE("hyp_second_deriv values and finite-difference oracle") {
  CHECK(hyp_second_deriv(vec1(0.0), HypentropyParams(2.0))[0] == 0.5);
  CHECK(hyp_second_deriv(vec1(1.0), HypentropyParams(1.0))[0] ==
        doctest::Approx(0.70710678118654752).epsilon(1e-14));
  // matches d/dx hyp_grad at x=0.3, beta=0.7
  const HypentropyParams params(0.7);
  const double h = 1e-6;
  const double fd =
      (hyp_grad(vec1(0.3 + h), params)[0] - hyp_grad(vec1(0.3 - h), params)[0]) /
      (2.0 * h);
  CHECK(hyp_second_deriv(vec1(0.3), params)[0] == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("hyp_conjugate values") {
  CHECK(hyp_conjugate(Eigen::VectorXd::Zero(2), HypentropyParams(1.0)) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(hyp_conjugate(vec1(1.0), HypentropyParams(1.0)) ==
        doctest::Approx(1.5430806348152437).epsilon(1e-14));
  CHECK_THROWS_AS(hyp_conjugate(vec1(800.0), HypentropyParams(1.0)),
                  OverflowGuardError);
}

TEST_CASE("bregman divergence examples") {
  const Potential hyp = Potential::hypentropy(1.0);
  Rng rng(7);
  Eigen::VectorXd x(4), y(4);
  for (int i = 0; i < 4; ++i) {
    x[i] = rng.uniform(-2.0, 2.0);
    y[i] = rng.uniform(-2.0, 2.0);
  }
  CHECK(bregman_div(hyp, x, x) == doctest::Approx(0.0).epsilon(1e-15));

  // y = 0: divergence reduces to phi(x) - phi(0)
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  CHECK(bregman_div(hyp, x, zero) ==
        doctest::Approx(hyp.value(x) - hyp.value(zero)).epsilon(1e-13));

  // frozen value of D(1 || 0.5) at beta = 1
  CHECK(bregman_div(hyp, vec1(1.0), vec1(0.5)) ==
        doctest::Approx(0.10398218833673938).epsilon(1e-13));

  // entropy domain violation
  Eigen::VectorXd neg = vec1(-0.5);
  CHECK_THROWS_AS(bregman_div(Potential::entropy(), neg, vec1(1.0)),
                  std::domain_error);
}

TEST_CASE("pnorm mirror examples") {
  const PNormParams p2(2.0);
  Rng rng(8);
  Eigen::VectorXd w(5);
  for (int i = 0; i < 5; ++i) w[i] = rng.uniform(-2.0, 2.0);
  CHECK((pnorm_mirror(w, p2) - w).lpNorm<Eigen::Infinity>() == 0.0); // identity
  CHECK(pnorm_mirror(Eigen::VectorXd::Zero(3), PNormParams(5.4)).isZero(0.0));

  const PNormParams p(5.4);
  const Eigen::VectorXd back = pnorm_mirror_inv(pnorm_mirror(w, p), p);
  for (int i = 0; i < 5; ++i) CHECK(back[i] == doctest::Approx(w[i]).epsilon(1e-9));
}

TEST_CASE("diameter bounds") {
  CHECK(diameter_bound(DiameterSet::l2_unit, HypentropyParams(1.0)) == 2.0);
  CHECK(diameter_bound(DiameterSet::l1_unit, HypentropyParams(1.0)) ==
        doctest::Approx(1.0986122886681097).epsilon(1e-15));
  CHECK(diameter_bound(DiameterSet::trace_ball, HypentropyParams(5.0), 500.0) ==
        doctest::Approx(2851.8912373281005).epsilon(1e-14));
  CHECK_THROWS_AS(diameter_bound(DiameterSet::l1_unit, HypentropyParams(1.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(diameter_bound(DiameterSet::trace_ball, HypentropyParams(2.0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("interpolation limits of the mirror map") {
  Rng rng(9);
  // GD limit: beta >> ||x||_inf
  Eigen::VectorXd x(6);
  for (int i = 0; i < 6; ++i) x[i] = rng.uniform(-2.0, 2.0);
  const double beta = 1e4 * x.lpNorm<Eigen::Infinity>();
  const Eigen::VectorXd g = hyp_grad(x, HypentropyParams(beta));
  CHECK((g - x / beta).lpNorm<Eigen::Infinity>() <=
        1e-6 * x.lpNorm<Eigen::Infinity>() / beta);

  // EG limit: beta << x_i on the positive orthant
  Eigen::VectorXd xp(6);
  for (int i = 0; i < 6; ++i) xp[i] = rng.uniform(0.5, 2.0);
  const double small = 1e-4 * xp.minCoeff();
  const Eigen::VectorXd ge = hyp_grad(xp, HypentropyParams(small));
  for (int i = 0; i < 6; ++i)
    CHECK(std::abs(ge[i] - std::log(2.0 * xp[i] / small)) <= 1e-6);
}
