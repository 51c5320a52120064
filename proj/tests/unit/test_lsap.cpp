#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bihyb/error.hpp"
#include "bihyb/kernels.hpp"
#include "bihyb/lsap.hpp"
#include "bihyb/rng.hpp"

using namespace bihyb;

namespace {

double brute_force(const DenseMatrix& c) {
    std::vector<int> p(c.rows());
    std::iota(p.begin(), p.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0;
        for (std::size_t i = 0; i < p.size(); ++i) s += c(i, static_cast<std::size_t>(p[i]));
        best = std::min(best, s);
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

DenseMatrix random_matrix(Rng& rng, std::size_t n, bool integral) {
    DenseMatrix m(n, n);
    for (auto& x : m.flat()) x = integral ? static_cast<double>(rng.below(6)) : rng.uniform01() * 10.0 - 3.0;
    return m;
}

double cost_of(const DenseMatrix& c, const Assignment& a) {
    double s = 0;
    for (std::size_t i = 0; i < a.col_of_row.size(); ++i) s += c(i, static_cast<std::size_t>(a.col_of_row[i]));
    return s;
}

}  // namespace

TEST_CASE("known 3x3 instance") {
    DenseMatrix c(3, 3);
    const double vals[] = {4, 1, 3, 2, 0, 5, 3, 2, 2};
    std::copy(std::begin(vals), std::end(vals), c.flat().begin());
    const auto a = hungarian_lsap(c);
    CHECK(a.cost == 5.0);
    CHECK(a.col_of_row == std::vector<int>{1, 0, 2});
}

TEST_CASE("empty and 1x1") {
    CHECK(hungarian_lsap(DenseMatrix(0, 0)).col_of_row.empty());
    DenseMatrix one(1, 1, 3.5);
    CHECK(hungarian_lsap(one).cost == 3.5);
}

TEST_CASE("rejects non-square and non-finite") {
    CHECK_THROWS_AS(hungarian_lsap(DenseMatrix(2, 3)), ContractError);
    DenseMatrix m(2, 2);
    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(hungarian_lsap(m), ContractError);
    m(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(hungarian_lsap(m), ContractError);
}

TEST_CASE("optimal against permutation enumeration, both kernel sets") {
    for (auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
        if (!kernels::set_active(isa)) continue;
        Rng rng(4);
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t n = 1 + rng.below(7);
            const auto c = random_matrix(rng, n, trial % 2 == 0);
            const auto a = hungarian_lsap(c);
            std::vector<int> sorted = a.col_of_row;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i < n; ++i) REQUIRE(sorted[i] == static_cast<int>(i));
            CHECK(std::abs(cost_of(c, a) - a.cost) < 1e-9);
            CHECK(std::abs(a.cost - brute_force(c)) < 1e-9);
        }
    }
    kernels::set_active(kernels::Isa::scalar);
}

TEST_CASE("scalar and AVX2 give identical assignments") {
    if (kernels::avx2_table() == nullptr) return;
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = random_matrix(rng, 5 + rng.below(60), trial % 3 == 0);
        kernels::set_active(kernels::Isa::scalar);
        const auto a = hungarian_lsap(c);
        kernels::set_active(kernels::Isa::avx2);
        const auto b = hungarian_lsap(c);
        CHECK(a.col_of_row == b.col_of_row);
        CHECK(a.cost == b.cost);
    }
    kernels::set_active(kernels::Isa::scalar);
}

TEST_CASE("2x2 examples") {
    DenseMatrix a(2, 2);
    a(0, 1) = a(1, 0) = 9;
    auto r = hungarian_lsap(a);
    CHECK(r.col_of_row == std::vector<int>{0, 1});
    CHECK(r.cost == 0.0);

    DenseMatrix b(2, 2);
    b(0, 0) = b(1, 1) = 1;
    b(0, 1) = b(1, 0) = 2;
    r = hungarian_lsap(b);
    CHECK(r.col_of_row == std::vector<int>{0, 1});
    CHECK(r.cost == 2.0);
}

TEST_CASE("random 6x6 integer matrices match all 720 permutations") {
    Rng rng(66);
    for (int trial = 0; trial < 20; ++trial) {
        DenseMatrix c(6, 6);
        for (auto& x : c.flat()) x = static_cast<double>(rng.below(100));
        CHECK(hungarian_lsap(c).cost == brute_force(c));
    }
}
