#pragma once

#include <cstddef>

namespace hypogd::kernels::detail {

// Function-pointer table filled in by each backend translation unit.
struct OpsTable {
  void (*vexp)(const double*, double*, std::size_t);
  void (*vlog)(const double*, double*, std::size_t);
  void (*vsinh)(const double*, double*, std::size_t);
  void (*vcosh)(const double*, double*, std::size_t);
  void (*vasinh)(const double*, double*, std::size_t);
  void (*hyp_dual)(const double*, double*, std::size_t, double);
  void (*hyp_primal)(const double*, double*, std::size_t, double);
  double (*hu_update)(const double*, const double*, double*, std::size_t, double, double);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_abs)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
};

const OpsTable& scalar_table();

#if defined(HYPOGD_HAVE_AVX2_TU)
const OpsTable& avx2_table();
bool avx2_supported();
#endif

} // namespace hypogd::kernels::detail
