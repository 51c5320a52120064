#pragma once

#include "bihyb/kernels.hpp"

namespace bihyb::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
RelaxResult relax_scalar(const double* row, double row_potential, const double* col_potential,
                         double* minv, std::int64_t* way, const std::int64_t* free_mask,
                         std::int64_t from_col, std::size_t n);
void masked_sub_scalar(double* minv, const std::int64_t* free_mask, double delta, std::size_t n);

#if defined(BIHYB_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
RelaxResult relax_avx2(const double* row, double row_potential, const double* col_potential,
                       double* minv, std::int64_t* way, const std::int64_t* free_mask,
                       std::int64_t from_col, std::size_t n);
void masked_sub_avx2(double* minv, const std::int64_t* free_mask, double delta, std::size_t n);
#endif

}  // namespace bihyb::kernels::detail
