// AVX2 + FMA kernel backend. This translation unit is compiled with
// -mavx2 -mfma; nothing here runs unless avx2_supported() returned true.
// Keep includes minimal so no shared inline function gets emitted with
// AVX2 code generation.

#include "kernels_table.hpp"

#if defined(HYPOGD_HAVE_AVX2_TU)

#include <cmath>
#include <cstdint>
#include <immintrin.h>

namespace hypogd::kernels::detail {
namespace {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(set1(-0.0), x);
}

inline __m256d copysign_pd(__m256d mag, __m256d sgn) {
  const __m256d mask = set1(-0.0);
  return _mm256_or_pd(_mm256_andnot_pd(mask, mag), _mm256_and_pd(mask, sgn));
}

// exp(x), Cephes-style rational approximation; argument clamped to the
// finite-double range, ~1 ulp on [-709, 709].
inline __m256d exp_pd(__m256d x) {
  const __m256d hi = set1(709.0895657128240515);
  const __m256d lo = set1(-708.3964185322641062);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d log2e = set1(1.4426950408889634074);
  __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  // r = x - n*ln2, split for accuracy
  __m256d r = _mm256_fnmadd_pd(n, set1(6.93145751953125e-1), x);
  r = _mm256_fnmadd_pd(n, set1(1.42860682030941723212e-6), r);

  const __m256d r2 = _mm256_mul_pd(r, r);
  __m256d p = set1(1.26177193074810590878e-4);
  p = _mm256_fmadd_pd(p, r2, set1(3.02994407707441961300e-2));
  p = _mm256_fmadd_pd(p, r2, set1(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = set1(3.00198505138664455042e-6);
  q = _mm256_fmadd_pd(q, r2, set1(2.52448340349684104192e-3));
  q = _mm256_fmadd_pd(q, r2, set1(2.27265548208155028766e-1));
  q = _mm256_fmadd_pd(q, r2, set1(2.00000000000000000005e0));
  const __m256d er =
      _mm256_fmadd_pd(set1(2.0), _mm256_div_pd(p, _mm256_sub_pd(q, p)), set1(1.0));

  // scale by 2^n via exponent bits
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(er, _mm256_castsi256_pd(bits));
}

// log(x) for x > 0, Cephes-style; callers guarantee positive finite input.
inline __m256d log_pd(__m256d x) {
  const __m256i ix = _mm256_castpd_si256(x);
  const __m256i exp_bits =
      _mm256_srli_epi64(_mm256_and_si256(ix, _mm256_set1_epi64x(0x7FF0000000000000LL)), 52);
  // e = biased_exponent - 1022, as double (values are small integers)
  __m256d e;
  {
    alignas(32) std::int64_t tmp[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), exp_bits);
    alignas(32) double ed[4];
    for (int i = 0; i < 4; ++i) ed[i] = static_cast<double>(tmp[i] - 1022);
    e = _mm256_load_pd(ed);
  }
  // mantissa in [0.5, 1)
  const __m256i mant_bits = _mm256_or_si256(
      _mm256_and_si256(ix, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FE0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);

  const __m256d sqrth = set1(0.70710678118654752440);
  const __m256d below = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(below, set1(1.0)));
  m = _mm256_add_pd(m, _mm256_and_pd(below, m)); // m *= 2 where below
  m = _mm256_sub_pd(m, set1(1.0));

  const __m256d z = _mm256_mul_pd(m, m);
  __m256d p = set1(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, m, set1(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, m, set1(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, m, set1(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, m, set1(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, m, set1(7.70838733755885391666e0));
  __m256d q = _mm256_add_pd(m, set1(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, m, set1(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, m, set1(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, m, set1(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, m, set1(2.31251620126765340583e1));

  __m256d y = _mm256_mul_pd(_mm256_mul_pd(m, z), _mm256_div_pd(p, q));
  y = _mm256_fnmadd_pd(e, set1(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(set1(0.5), z, y);
  __m256d res = _mm256_add_pd(m, y);
  res = _mm256_fmadd_pd(e, set1(0.693359375), res);
  return res;
}

// log1p(u) for u > -0.5 via log with a correction term.
inline __m256d log1p_pd(__m256d u) {
  const __m256d one = set1(1.0);
  const __m256d s = _mm256_add_pd(one, u);
  const __m256d corr =
      _mm256_div_pd(_mm256_sub_pd(u, _mm256_sub_pd(s, one)), s);
  return _mm256_add_pd(log_pd(s), corr);
}

// Odd Taylor polynomial for sinh on |x| <= 0.35 (relative error < 1e-15).
inline __m256d sinh_small_pd(__m256d x) {
  const __m256d r = _mm256_mul_pd(x, x);
  __m256d t = set1(2.5052108385441718775e-8);
  t = _mm256_fmadd_pd(t, r, set1(2.7557319223985890653e-6));
  t = _mm256_fmadd_pd(t, r, set1(1.9841269841269841270e-4));
  t = _mm256_fmadd_pd(t, r, set1(8.3333333333333333333e-3));
  t = _mm256_fmadd_pd(t, r, set1(1.6666666666666666667e-1));
  return _mm256_fmadd_pd(_mm256_mul_pd(x, r), t, x);
}

inline __m256d sinh_pd(__m256d x) {
  const __m256d ax = abs_pd(x);
  const __m256d small = _mm256_cmp_pd(ax, set1(0.35), _CMP_LT_OQ);
  const __m256d e = exp_pd(ax);
  const __m256d big =
      _mm256_mul_pd(set1(0.5), _mm256_sub_pd(e, _mm256_div_pd(set1(1.0), e)));
  const __m256d r = _mm256_blendv_pd(copysign_pd(big, x), sinh_small_pd(x), small);
  return r;
}

inline __m256d cosh_pd(__m256d x) {
  const __m256d e = exp_pd(abs_pd(x));
  return _mm256_mul_pd(set1(0.5),
                       _mm256_add_pd(e, _mm256_div_pd(set1(1.0), e)));
}

// asinh(x) = sign(x) * log(|x| + sqrt(x^2+1)), evaluated as
//   |x| > 1e8      : log(2|x|)                  (tail below double epsilon)
//   1e-8..1e8      : log1p(|x| + x^2/(1+sqrt(x^2+1)))
//   |x| < 1e-8     : x
inline __m256d asinh_pd(__m256d x) {
  const __m256d t = abs_pd(x);
  const __m256d one = set1(1.0);
  const __m256d t2 = _mm256_mul_pd(t, t);
  const __m256d root = _mm256_sqrt_pd(_mm256_add_pd(t2, one));
  const __m256d u =
      _mm256_add_pd(t, _mm256_div_pd(t2, _mm256_add_pd(one, root)));
  const __m256d mid = log1p_pd(u);

  // big branch computed on max(t, 1) to avoid log of junk in dead lanes
  const __m256d tb = _mm256_max_pd(t, one);
  const __m256d big = _mm256_add_pd(log_pd(tb), set1(0.69314718055994530942));

  const __m256d is_big = _mm256_cmp_pd(t, set1(1e8), _CMP_GT_OQ);
  const __m256d is_tiny = _mm256_cmp_pd(t, set1(1e-8), _CMP_LT_OQ);
  __m256d r = _mm256_blendv_pd(mid, big, is_big);
  r = _mm256_blendv_pd(r, t, is_tiny);
  return copysign_pd(r, x);
}

inline double hmax_pd(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return std::max(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

inline double hsum_pd(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

template <typename VecFn, typename ScalarFn>
void map1(const double* x, double* out, std::size_t n, VecFn vf, ScalarFn sf) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, vf(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = sf(x[i]);
}

void a_vexp(const double* x, double* out, std::size_t n) {
  map1(x, out, n, [](__m256d v) { return exp_pd(v); },
       [](double v) { return std::exp(v); });
}
void a_vlog(const double* x, double* out, std::size_t n) {
  map1(x, out, n, [](__m256d v) { return log_pd(v); },
       [](double v) { return std::log(v); });
}
void a_vsinh(const double* x, double* out, std::size_t n) {
  map1(x, out, n, [](__m256d v) { return sinh_pd(v); },
       [](double v) { return std::sinh(v); });
}
void a_vcosh(const double* x, double* out, std::size_t n) {
  map1(x, out, n, [](__m256d v) { return cosh_pd(v); },
       [](double v) { return std::cosh(v); });
}
void a_vasinh(const double* x, double* out, std::size_t n) {
  map1(x, out, n, [](__m256d v) { return asinh_pd(v); },
       [](double v) { return std::asinh(v); });
}

void a_hyp_dual(const double* w, double* out, std::size_t n, double beta) {
  const __m256d bv = set1(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // divide (not multiply by reciprocal) so scalar and vector agree on w/beta
    const __m256d v = _mm256_div_pd(_mm256_loadu_pd(w + i), bv);
    _mm256_storeu_pd(out + i, asinh_pd(v));
  }
  for (; i < n; ++i) out[i] = std::asinh(w[i] / beta);
}

void a_hyp_primal(const double* z, double* out, std::size_t n, double beta) {
  const __m256d bv = set1(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(bv, sinh_pd(_mm256_loadu_pd(z + i))));
  for (; i < n; ++i) out[i] = beta * std::sinh(z[i]);
}

double a_hu_update(const double* w, const double* g, double* out, std::size_t n,
                   double eta, double beta) {
  const __m256d bv = set1(beta);
  const __m256d ev = set1(eta);
  __m256d vmax = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = asinh_pd(_mm256_div_pd(_mm256_loadu_pd(w + i), bv));
    const __m256d z = _mm256_fnmadd_pd(ev, _mm256_loadu_pd(g + i), a);
    vmax = _mm256_max_pd(vmax, abs_pd(z));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(bv, sinh_pd(z)));
  }
  double max_dual = hmax_pd(vmax);
  for (; i < n; ++i) {
    const double z = std::asinh(w[i] / beta) - eta * g[i];
    max_dual = std::max(max_dual, std::abs(z));
    out[i] = beta * std::sinh(z);
  }
  return max_dual;
}

double a_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double r = hsum_pd(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double a_sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double r = hsum_pd(acc);
  for (; i < n; ++i) r += a[i];
  return r;
}

double a_sum_abs(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(a + i)));
  double r = hsum_pd(acc);
  for (; i < n; ++i) r += std::abs(a[i]);
  return r;
}

double a_max_abs(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(a + i)));
  double r = hmax_pd(acc);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i]));
  return r;
}

void a_axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = set1(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

} // namespace

const OpsTable& avx2_table() {
  static const OpsTable t = {a_vexp, a_vlog,    a_vsinh,   a_vcosh,  a_vasinh,
                             a_hyp_dual, a_hyp_primal, a_hu_update, a_dot,
                             a_sum,  a_sum_abs, a_max_abs, a_axpy};
  return t;
}

bool avx2_supported() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

} // namespace hypogd::kernels::detail

#endif // HYPOGD_HAVE_AVX2_TU
