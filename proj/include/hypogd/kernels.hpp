#pragma once

#include <cstddef>
#include <string>

namespace hypogd::kernels {

// Data-parallel inner loops of the library. Scalar reference implementations
// and an AVX2 variant share this interface; the active backend is chosen at
// runtime from CPU capabilities (override with HYPOGD_KERNELS=scalar|avx2 or
// force_backend). Both backends are equivalence-tested against each other.
//
// Elementwise transcendental kernels are accurate to a few ulp; vexp clamps
// its argument to the finite-double range. Engine code guards dual iterates
// at |z| <= 700 before calling sinh/cosh-type kernels.

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
void force_backend(Backend b); // throws std::invalid_argument if unavailable
const char* backend_name(Backend b);

void vexp(const double* x, double* out, std::size_t n);
void vlog(const double* x, double* out, std::size_t n);
void vsinh(const double* x, double* out, std::size_t n);
void vcosh(const double* x, double* out, std::size_t n);
void vasinh(const double* x, double* out, std::size_t n);

/// out_i = asinh(w_i / beta): the hypentropy mirror map.
void hyp_dual(const double* w, double* out, std::size_t n, double beta);
/// out_i = beta * sinh(z_i): the inverse mirror map.
void hyp_primal(const double* z, double* out, std::size_t n, double beta);
/// Fused HU update out_i = beta * sinh(asinh(w_i/beta) - eta*g_i).
/// Returns max_i |asinh(w_i/beta) - eta*g_i| so callers can enforce the
/// overflow guard.
double hu_update(const double* w, const double* g, double* out, std::size_t n,
                 double eta, double beta);

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_abs(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
/// y_i += alpha * x_i
void axpy(double alpha, const double* x, double* y, std::size_t n);

} // namespace hypogd::kernels
