#include "gbtpp/numerics/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace gbtpp::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(GBTPP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() noexcept {
    if (const char* env = std::getenv("GBTPP_ISA")) {
        if (std::string_view(env) == "scalar") return Isa::scalar;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<const KernelTable*>& current() noexcept {
    static std::atomic<const KernelTable*> ptr{&table(detect())};
    return ptr;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
    return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

const KernelTable& table(Isa isa) noexcept {
#if defined(GBTPP_HAVE_AVX2)
    if (isa == Isa::avx2 && cpu_has_avx2()) return avx2::table();
#else
    (void)isa;
#endif
    return scalar::table();
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

Isa active_isa() noexcept {
    return &active() == &scalar::table() ? Isa::scalar : Isa::avx2;
}

bool set_isa(Isa isa) noexcept {
    if (!isa_available(isa)) return false;
    current().store(&table(isa), std::memory_order_relaxed);
    return true;
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace gbtpp::kernels
