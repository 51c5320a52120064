#include "bihyb/lsap.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "bihyb/error.hpp"
#include "bihyb/kernels.hpp"

namespace bihyb {

Assignment hungarian_lsap(const DenseMatrix& costs) {
    if (costs.rows() != costs.cols()) throw ContractError("hungarian_lsap: matrix must be square");
    for (double c : costs.flat())
        if (!std::isfinite(c)) throw ContractError("hungarian_lsap: non-finite cost");

    const std::size_t n = costs.rows();
    const auto& k = kernels::active();
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Column index n is the virtual start column of each augmentation.
    std::vector<double> row_pot(n, 0.0);
    std::vector<double> col_pot(n + 1, 0.0);
    std::vector<std::int64_t> row_of_col(n + 1, -1);
    std::vector<std::int64_t> way(n + 1, 0);
    std::vector<double> minv(n + 1);
    std::vector<std::int64_t> free_mask(n + 1);
    std::vector<std::size_t> used_cols;
    used_cols.reserve(n + 1);

    for (std::size_t i = 0; i < n; ++i) {
        row_of_col[n] = static_cast<std::int64_t>(i);
        std::int64_t col = static_cast<std::int64_t>(n);
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(free_mask.begin(), free_mask.end(), -1);
        used_cols.clear();
        do {
            free_mask[static_cast<std::size_t>(col)] = 0;
            used_cols.push_back(static_cast<std::size_t>(col));
            const auto r = static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(col)]);
            const auto step = k.relax(costs.row(r).data(), row_pot[r], col_pot.data(), minv.data(),
                                      way.data(), free_mask.data(), col, n);
            for (std::size_t c : used_cols) {
                row_pot[static_cast<std::size_t>(row_of_col[c])] += step.delta;
                col_pot[c] -= step.delta;
            }
            k.masked_sub(minv.data(), free_mask.data(), step.delta, n);
            col = step.col;
        } while (row_of_col[static_cast<std::size_t>(col)] != -1);
        // Flip the alternating path back to the virtual column.
        while (col != static_cast<std::int64_t>(n)) {
            const std::int64_t prev = way[static_cast<std::size_t>(col)];
            row_of_col[static_cast<std::size_t>(col)] = row_of_col[static_cast<std::size_t>(prev)];
            col = prev;
        }
    }

    Assignment result;
    result.col_of_row.assign(n, -1);
    for (std::size_t j = 0; j < n; ++j) {
        result.col_of_row[static_cast<std::size_t>(row_of_col[j])] = static_cast<int>(j);
    }
    for (std::size_t i = 0; i < n; ++i) {
        result.cost += costs(i, static_cast<std::size_t>(result.col_of_row[i]));
    }
    return result;
}

}  // namespace bihyb
