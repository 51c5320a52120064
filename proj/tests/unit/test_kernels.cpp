#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "bihyb/kernels.hpp"
#include "bihyb/rng.hpp"

using namespace bihyb;
using namespace bihyb::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform01() * 200.0 - 100.0;
    return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels") {
    const auto& k = scalar_table();
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{4, 5, 6};
    CHECK(k.dot(a.data(), b.data(), 3) == 32.0);
    std::vector<double> y{1, 1, 1};
    k.axpy(2.0, a.data(), y.data(), 3);
    CHECK(y == std::vector<double>{3, 5, 7});

    const std::vector<double> row{5, 1, 1, 0};
    const std::vector<double> v{0, 0, 0, 0};
    std::vector<double> minv{10, 10, 0.5, 10};
    std::vector<std::int64_t> way{9, 9, 9, 9};
    const std::vector<std::int64_t> free_mask{-1, -1, -1, 0};
    const auto r = k.relax(row.data(), 0.0, v.data(), minv.data(), way.data(), free_mask.data(), 2, 4);
    CHECK(minv == std::vector<double>{5, 1, 0.5, 10});
    CHECK(way == std::vector<std::int64_t>{2, 2, 9, 9});
    CHECK(r.delta == 0.5);
    CHECK(r.col == 2);

    k.masked_sub(minv.data(), free_mask.data(), 0.5, 4);
    CHECK(minv == std::vector<double>{4.5, 0.5, 0, 10});
}

TEST_CASE("relax reports no column when none is free") {
    const auto& k = scalar_table();
    std::vector<double> row{1}, v{0}, minv{1};
    std::vector<std::int64_t> way{0}, mask{0};
    CHECK(k.relax(row.data(), 0, v.data(), minv.data(), way.data(), mask.data(), 0, 1).col == -1);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
    const KernelTable* avx = avx2_table();
    if (avx == nullptr) {
        MESSAGE("AVX2 unavailable; equivalence not exercised");
        return;
    }
    const auto& ref = scalar_table();
    Rng rng(17);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 100u, 257u}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = random_vec(rng, n);
            const auto b = random_vec(rng, n);
            const double d1 = ref.dot(a.data(), b.data(), n);
            const double d2 = avx->dot(a.data(), b.data(), n);
            CHECK(std::abs(d1 - d2) <= 1e-9 * (1.0 + std::abs(d1)));

            auto y1 = random_vec(rng, n);
            auto y2 = y1;
            const double alpha = rng.uniform01() - 0.5;
            ref.axpy(alpha, a.data(), y1.data(), n);
            avx->axpy(alpha, a.data(), y2.data(), n);
            CHECK(same_bits(y1, y2));

            const auto row = random_vec(rng, n);
            const auto pot = random_vec(rng, n);
            auto minv1 = random_vec(rng, n);
            // Duplicate values exercise the first-minimum tie rule.
            for (std::size_t j = 0; j + 3 < n; j += 4) minv1[j + 3] = minv1[j];
            auto minv2 = minv1;
            std::vector<std::int64_t> way1(n, 7), way2(n, 7), mask(n);
            for (auto& m : mask) m = rng.below(3) == 0 ? 0 : -1;
            const double u = rng.uniform01();
            const auto r1 = ref.relax(row.data(), u, pot.data(), minv1.data(), way1.data(), mask.data(), 3, n);
            const auto r2 = avx->relax(row.data(), u, pot.data(), minv2.data(), way2.data(), mask.data(), 3, n);
            CHECK(same_bits(minv1, minv2));
            CHECK(way1 == way2);
            CHECK(r1.col == r2.col);
            if (r1.col >= 0) CHECK(r1.delta == r2.delta);

            ref.masked_sub(minv1.data(), mask.data(), 0.25, n);
            avx->masked_sub(minv2.data(), mask.data(), 0.25, n);
            CHECK(same_bits(minv1, minv2));
        }
    }
}

TEST_CASE("active table can be pinned") {
    CHECK(set_active(Isa::scalar));
    CHECK(active().isa == Isa::scalar);
    CHECK(name(Isa::scalar) == "scalar");
    if (avx2_table() != nullptr) {
        CHECK(set_active(Isa::avx2));
        CHECK(active().isa == Isa::avx2);
    } else {
        CHECK_FALSE(set_active(Isa::avx2));
    }
}
