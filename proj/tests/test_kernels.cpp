#include <doctest.h>

#include <cmath>
#include <vector>

#include "hypogd/kernels.hpp"
#include "hypogd/rng.hpp"

namespace hk = hypogd::kernels;

namespace {

std::vector<double> random_values(std::uint64_t seed, std::size_t n, double lo,
                                  double hi) {
  hypogd::Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

} // namespace

TEST_CASE("scalar backend matches std transcendentals") {
  hk::force_backend(hk::Backend::scalar);
  const auto xs = random_values(1, 257, -5.0, 5.0);
  std::vector<double> out(xs.size());
  hk::vsinh(xs.data(), out.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == std::sinh(xs[i]));
  hk::vasinh(xs.data(), out.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == std::asinh(xs[i]));
}

TEST_CASE("avx2 backend agrees with the scalar reference") {
  if (!hk::backend_available(hk::Backend::avx2)) {
    MESSAGE("avx2 unavailable on this host; skipping");
    return;
  }

  // sizes cover the vector body and every tail remainder
  for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(3),
                        std::size_t(4), std::size_t(5), std::size_t(31),
                        std::size_t(1024)}) {
    const auto xs = random_values(2 + n, n, -30.0, 30.0);
    const auto pos = random_values(3 + n, n, 1e-12, 1e12);
    const auto wide = random_values(4 + n, n, -1e10, 1e10);
    std::vector<double> a(n), b(n);

    auto compare = [&](const char* what, double tol) {
      for (std::size_t i = 0; i < n; ++i) {
        INFO(what, " lane ", i);
        CHECK(rel(a[i], b[i]) <= tol);
      }
    };

    hk::force_backend(hk::Backend::scalar);
    hk::vexp(xs.data(), a.data(), n);
    hk::force_backend(hk::Backend::avx2);
    hk::vexp(xs.data(), b.data(), n);
    compare("vexp", 1e-14);

    hk::force_backend(hk::Backend::scalar);
    hk::vlog(pos.data(), a.data(), n);
    hk::force_backend(hk::Backend::avx2);
    hk::vlog(pos.data(), b.data(), n);
    compare("vlog", 1e-14);

    hk::force_backend(hk::Backend::scalar);
    hk::vsinh(xs.data(), a.data(), n);
    hk::force_backend(hk::Backend::avx2);
    hk::vsinh(xs.data(), b.data(), n);
    compare("vsinh", 1e-13);

    hk::force_backend(hk::Backend::scalar);
    hk::vcosh(xs.data(), a.data(), n);
    hk::force_backend(hk::Backend::avx2);
    hk::vcosh(xs.data(), b.data(), n);
    compare("vcosh", 1e-13);

    hk::force_backend(hk::Backend::scalar);
    hk::vasinh(wide.data(), a.data(), n);
    hk::force_backend(hk::Backend::avx2);
    hk::vasinh(wide.data(), b.data(), n);
    compare("vasinh", 1e-13);
  }
  hk::force_backend(hk::Backend::scalar);
}

TEST_CASE("avx2 asinh covers the tiny / mid / huge ranges") {
  if (!hk::backend_available(hk::Backend::avx2)) return;
  const std::vector<double> xs = {0.0,   1e-300, -1e-12, 1e-9,  -1e-8, 1e-7,
                                  0.5,   -1.0,   7.3,    -1e7,  1e8,   -1e9,
                                  1e200, -1e308, 42.0,   -0.001};
  std::vector<double> got(xs.size());
  hk::force_backend(hk::Backend::avx2);
  hk::vasinh(xs.data(), got.data(), xs.size());
  hk::force_backend(hk::Backend::scalar);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    INFO("x = ", xs[i]);
    CHECK(rel(got[i], std::asinh(xs[i])) <= 1e-13);
  }
}

TEST_CASE("fused hypentropy kernels agree across backends") {
  if (!hk::backend_available(hk::Backend::avx2)) return;
  const std::size_t n = 103;
  const auto w = random_values(11, n, -50.0, 50.0);
  const auto g = random_values(12, n, -1.0, 1.0);
  for (double beta : {0.01, 1.0, 250.0}) {
    std::vector<double> a(n), b(n);
    hk::force_backend(hk::Backend::scalar);
    const double ms = hk::hu_update(w.data(), g.data(), a.data(), n, 0.3, beta);
    hk::force_backend(hk::Backend::avx2);
    const double mv = hk::hu_update(w.data(), g.data(), b.data(), n, 0.3, beta);
    CHECK(rel(ms, mv) <= 1e-13);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel(a[i], b[i]) <= 1e-12);

    hk::force_backend(hk::Backend::scalar);
    hk::hyp_dual(w.data(), a.data(), n, beta);
    hk::force_backend(hk::Backend::avx2);
    hk::hyp_dual(w.data(), b.data(), n, beta);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel(a[i], b[i]) <= 1e-13);
  }
  hk::force_backend(hk::Backend::scalar);
}

TEST_CASE("reductions agree across backends") {
  if (!hk::backend_available(hk::Backend::avx2)) return;
  const std::size_t n = 1001;
  const auto x = random_values(21, n, -2.0, 2.0);
  const auto y = random_values(22, n, -2.0, 2.0);

  hk::force_backend(hk::Backend::scalar);
  const double ds = hk::dot(x.data(), y.data(), n);
  const double ss = hk::sum(x.data(), n);
  const double as = hk::sum_abs(x.data(), n);
  const double ms = hk::max_abs(x.data(), n);
  hk::force_backend(hk::Backend::avx2);
  CHECK(rel(ds, hk::dot(x.data(), y.data(), n)) <= 1e-12);
  CHECK(rel(ss, hk::sum(x.data(), n)) <= 1e-12);
  CHECK(rel(as, hk::sum_abs(x.data(), n)) <= 1e-13);
  CHECK(ms == hk::max_abs(x.data(), n));

  // the avx2 path contracts to an fma; compare at the operand scale
  std::vector<double> ya = y, yb = y;
  hk::force_backend(hk::Backend::scalar);
  hk::axpy(0.37, x.data(), ya.data(), n);
  hk::force_backend(hk::Backend::avx2);
  hk::axpy(0.37, x.data(), yb.data(), n);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::abs(ya[i] - yb[i]) <=
          1e-15 * (std::abs(y[i]) + std::abs(0.37 * x[i])));
  hk::force_backend(hk::Backend::scalar);
}

TEST_CASE("avx2 math accuracy against the standard library") {
  if (!hk::backend_available(hk::Backend::avx2)) return;
  hk::force_backend(hk::Backend::avx2);
  const auto xs = random_values(31, 4096, -700.0, 700.0);
  std::vector<double> got(xs.size());
  hk::vexp(xs.data(), got.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(rel(got[i], std::exp(xs[i])) <= 5e-15);
  hk::vsinh(xs.data(), got.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(rel(got[i], std::sinh(xs[i])) <= 5e-14);
  hk::force_backend(hk::Backend::scalar);
}
