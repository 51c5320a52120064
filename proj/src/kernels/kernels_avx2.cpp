// Compiled with -mavx2 only. Keep this TU free of inline library templates so
// no AVX2-encoded copy of a shared inline function can leak into the link.
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace bihyb::kernels::detail {

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc0);
    const __m128d hi = _mm256_extractf128_pd(acc0, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double sum = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

RelaxResult relax_avx2(const double* row, double row_potential, const double* col_potential,
                       double* minv, std::int64_t* way, const std::int64_t* free_mask,
                       std::int64_t from_col, std::size_t n) {
    const double inf = __builtin_inf();
    const __m256d vpot = _mm256_set1_pd(row_potential);
    const __m256d vinf = _mm256_set1_pd(inf);
    const __m256i vfrom = _mm256_set1_epi64x(from_col);
    __m256d vbest = vinf;
    bool any_free = false;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256i mask_i = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(free_mask + j));
        const __m256d mask = _mm256_castsi256_pd(mask_i);
        const __m256d cur = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(row + j), vpot),
                                          _mm256_loadu_pd(col_potential + j));
        __m256d mv = _mm256_loadu_pd(minv + j);
        const __m256d better = _mm256_and_pd(_mm256_cmp_pd(cur, mv, _CMP_LT_OQ), mask);
        mv = _mm256_blendv_pd(mv, cur, better);
        _mm256_storeu_pd(minv + j, mv);
        const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(way + j));
        const __m256i nw = _mm256_castpd_si256(
            _mm256_blendv_pd(_mm256_castsi256_pd(w), _mm256_castsi256_pd(vfrom), better));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(way + j), nw);
        vbest = _mm256_min_pd(vbest, _mm256_blendv_pd(vinf, mv, mask));
        any_free = any_free || _mm256_movemask_pd(mask) != 0;
    }
    const __m128d lo = _mm256_castpd256_pd128(vbest);
    const __m128d hi = _mm256_extractf128_pd(vbest, 1);
    const __m128d m2 = _mm_min_pd(lo, hi);
    double best = _mm_cvtsd_f64(_mm_min_sd(m2, _mm_unpackhi_pd(m2, m2)));
    for (std::size_t t = j; t < n; ++t) {
        if (free_mask[t] == 0) continue;
        any_free = true;
        const double cur = (row[t] - row_potential) - col_potential[t];
        if (cur < minv[t]) {
            minv[t] = cur;
            way[t] = from_col;
        }
        if (minv[t] < best) best = minv[t];
    }
    if (!any_free) return RelaxResult{inf, -1};
    // First free column attaining the minimum, matching the scalar scan.
    for (std::size_t t = 0; t < n; ++t) {
        if (free_mask[t] != 0 && minv[t] == best) return RelaxResult{best, static_cast<std::int64_t>(t)};
    }
    // All free entries are +inf.
    for (std::size_t t = 0; t < n; ++t) {
        if (free_mask[t] != 0) return RelaxResult{minv[t], static_cast<std::int64_t>(t)};
    }
    return RelaxResult{inf, -1};
}

void masked_sub_avx2(double* minv, const std::int64_t* free_mask, double delta, std::size_t n) {
    const __m256d vd = _mm256_set1_pd(delta);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d mask =
            _mm256_castsi256_pd(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(free_mask + j)));
        const __m256d mv = _mm256_loadu_pd(minv + j);
        _mm256_storeu_pd(minv + j, _mm256_blendv_pd(mv, _mm256_sub_pd(mv, vd), mask));
    }
    for (; j < n; ++j)
        if (free_mask[j] != 0) minv[j] -= delta;
}

}  // namespace bihyb::kernels::detail
