#pragma once

// Dense inner loops of the assignment solver and the quadratic GED relaxation.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The active table is picked once at startup from CPUID and can be
// pinned with BIHYB_KERNELS=scalar|avx2. Element-wise kernels (axpy, relax,
// masked_sub) produce bit-identical results across variants; dot() sums in a
// different order and matches only up to rounding.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace bihyb::kernels {

enum class Isa { scalar, avx2 };

struct RelaxResult {
    double delta;       ///< smallest reduced cost over free columns
    std::int64_t col;   ///< first free column attaining it, -1 if none free
};

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// One Dijkstra relaxation of the shortest augmenting path search:
    /// for every free column j (free_mask[j] == -1),
    ///   cur = (row[j] - row_potential) - col_potential[j]
    ///   if cur < minv[j]: minv[j] = cur, way[j] = from_col
    /// then returns the minimum of minv over free columns.
    RelaxResult (*relax)(const double* row, double row_potential, const double* col_potential,
                         double* minv, std::int64_t* way, const std::int64_t* free_mask,
                         std::int64_t from_col, std::size_t n);
    /// minv[j] -= delta for every free column j.
    void (*masked_sub)(double* minv, const std::int64_t* free_mask, double delta, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_table() noexcept;

const KernelTable& active() noexcept;
/// Pins the active table (tests, benchmarks). Returns false if unavailable.
bool set_active(Isa isa) noexcept;
std::string_view name(Isa isa) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace bihyb::kernels
