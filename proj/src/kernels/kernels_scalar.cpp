#include "kernels_impl.hpp"

#include <limits>

namespace bihyb::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

RelaxResult relax_scalar(const double* row, double row_potential, const double* col_potential,
                         double* minv, std::int64_t* way, const std::int64_t* free_mask,
                         std::int64_t from_col, std::size_t n) {
    RelaxResult best{std::numeric_limits<double>::infinity(), -1};
    for (std::size_t j = 0; j < n; ++j) {
        if (free_mask[j] == 0) continue;
        const double cur = (row[j] - row_potential) - col_potential[j];
        if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = from_col;
        }
        if (minv[j] < best.delta || best.col < 0) {
            best.delta = minv[j];
            best.col = static_cast<std::int64_t>(j);
        }
    }
    return best;
}

void masked_sub_scalar(double* minv, const std::int64_t* free_mask, double delta, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j)
        if (free_mask[j] != 0) minv[j] -= delta;
}

}  // namespace bihyb::kernels::detail
