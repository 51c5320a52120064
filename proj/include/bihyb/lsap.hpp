#pragma once

#include <span>
#include <vector>

namespace bihyb {

/// Row-major square matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> flat() noexcept { return data_; }
    std::span<const double> flat() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Assignment {
    std::vector<int> col_of_row;  ///< permutation: row i -> column col_of_row[i]
    double cost = 0.0;
};

/// Exact linear sum assignment (Hungarian method with shortest augmenting
/// paths, O(n^3)). Rows are inserted in order and columns scanned left to
/// right, so ties resolve deterministically. Throws ContractError for a
/// non-square matrix or non-finite entries.
Assignment hungarian_lsap(const DenseMatrix& costs);

}  // namespace bihyb
