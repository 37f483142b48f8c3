#include "hypogd/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_table.hpp"

namespace hypogd::kernels {
namespace detail {

namespace {

void s_vexp(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}
void s_vlog(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}
void s_vsinh(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sinh(x[i]);
}
void s_vcosh(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::cosh(x[i]);
}
void s_vasinh(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::asinh(x[i]);
}
void s_hyp_dual(const double* w, double* out, std::size_t n, double beta) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::asinh(w[i] / beta);
}
void s_hyp_primal(const double* z, double* out, std::size_t n, double beta) {
  for (std::size_t i = 0; i < n; ++i) out[i] = beta * std::sinh(z[i]);
}
double s_hu_update(const double* w, const double* g, double* out, std::size_t n,
                   double eta, double beta) {
  double max_dual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = std::asinh(w[i] / beta) - eta * g[i];
    max_dual = std::max(max_dual, std::abs(z));
    out[i] = beta * std::sinh(z);
  }
  return max_dual;
}
double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}
double s_sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}
double s_sum_abs(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i]);
  return acc;
}
double s_max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}
void s_axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace

const OpsTable& scalar_table() {
  static const OpsTable t = {s_vexp, s_vlog,    s_vsinh,   s_vcosh,  s_vasinh,
                             s_hyp_dual, s_hyp_primal, s_hu_update, s_dot,
                             s_sum,  s_sum_abs, s_max_abs, s_axpy};
  return t;
}

namespace {

std::atomic<const OpsTable*> g_active{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const OpsTable* table_for(Backend b) {
#if defined(HYPOGD_HAVE_AVX2_TU)
  if (b == Backend::avx2) return &avx2_table();
#endif
  return &scalar_table();
}

const OpsTable& active() {
  const OpsTable* t = g_active.load(std::memory_order_acquire);
  if (t != nullptr) return *t;
  Backend pick = Backend::scalar;
  if (backend_available(Backend::avx2)) pick = Backend::avx2;
  if (const char* env = std::getenv("HYPOGD_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) pick = Backend::scalar;
    else if (std::strcmp(env, "avx2") == 0 && backend_available(Backend::avx2))
      pick = Backend::avx2;
  }
  g_backend.store(pick, std::memory_order_relaxed);
  g_active.store(table_for(pick), std::memory_order_release);
  return *g_active.load(std::memory_order_acquire);
}

} // namespace
} // namespace detail

Backend active_backend() {
  detail::active();
  return detail::g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
#if defined(HYPOGD_HAVE_AVX2_TU)
  return detail::avx2_supported();
#else
  return false;
#endif
}

void force_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument(std::string("kernel backend unavailable: ") +
                                backend_name(b));
  detail::g_backend.store(b, std::memory_order_relaxed);
  detail::g_active.store(detail::table_for(b), std::memory_order_release);
}

const char* backend_name(Backend b) {
  return b == Backend::scalar ? "scalar" : "avx2";
}

void vexp(const double* x, double* out, std::size_t n) { detail::active().vexp(x, out, n); }
void vlog(const double* x, double* out, std::size_t n) { detail::active().vlog(x, out, n); }
void vsinh(const double* x, double* out, std::size_t n) { detail::active().vsinh(x, out, n); }
void vcosh(const double* x, double* out, std::size_t n) { detail::active().vcosh(x, out, n); }
void vasinh(const double* x, double* out, std::size_t n) { detail::active().vasinh(x, out, n); }
void hyp_dual(const double* w, double* out, std::size_t n, double beta) {
  detail::active().hyp_dual(w, out, n, beta);
}
void hyp_primal(const double* z, double* out, std::size_t n, double beta) {
  detail::active().hyp_primal(z, out, n, beta);
}
double hu_update(const double* w, const double* g, double* out, std::size_t n,
                 double eta, double beta) {
  return detail::active().hu_update(w, g, out, n, eta, beta);
}
double dot(const double* a, const double* b, std::size_t n) { return detail::active().dot(a, b, n); }
double sum(const double* a, std::size_t n) { return detail::active().sum(a, n); }
double sum_abs(const double* a, std::size_t n) { return detail::active().sum_abs(a, n); }
double max_abs(const double* a, std::size_t n) { return detail::active().max_abs(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  detail::active().axpy(alpha, x, y, n);
}

} // namespace hypogd::kernels
