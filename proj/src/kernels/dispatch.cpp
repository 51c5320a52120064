#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace bihyb::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, detail::dot_scalar, detail::axpy_scalar,
                              detail::relax_scalar, detail::masked_sub_scalar};

#if defined(BIHYB_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, detail::dot_avx2, detail::axpy_avx2, detail::relax_avx2,
                            detail::masked_sub_avx2};

bool cpu_has_avx2() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
}
#endif

const KernelTable* detect() noexcept {
    const char* forced = std::getenv("BIHYB_KERNELS");
    const std::string_view want = forced != nullptr ? forced : "";
    if (want == "scalar") return &kScalar;
    if (const KernelTable* t = avx2_table()) return t;
    return &kScalar;
}

const KernelTable*& current() noexcept {
    static const KernelTable* table = detect();
    return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(BIHYB_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept { return *current(); }

bool set_active(Isa isa) noexcept {
    const KernelTable* t = isa == Isa::scalar ? &kScalar : avx2_table();
    if (t == nullptr) return false;
    current() = t;
    return true;
}

std::string_view name(Isa isa) noexcept {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace bihyb::kernels
