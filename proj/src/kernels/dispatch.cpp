#include "cpflow/error.hpp"
#include "cpflow/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace cpflow::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(CPFLOW_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() noexcept {
    if (const char* env = std::getenv("CPFLOW_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && cpu_has_avx2()) return Isa::avx2;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

} // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) {
        throw DomainError("kernels: ISA '" + std::string(isa_name(isa)) + "' not available on this CPU");
    }
    current().store(isa, std::memory_order_relaxed);
}

#if defined(CPFLOW_HAVE_AVX2)
#define CPFLOW_DISPATCH(fn, ...) \
    return active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define CPFLOW_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double weighted_norm2(std::span<const double> w, std::span<const cplx> z) {
    CPFLOW_DISPATCH(weighted_norm2, w, z);
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b) {
    CPFLOW_DISPATCH(weighted_dot, w, a, b);
}

double weighted_sum(std::span<const double> w, std::span<const double> x) {
    CPFLOW_DISPATCH(weighted_sum, w, x);
}

void accumulate_real(cplx c, std::span<const cplx> z, std::span<double> out) {
    CPFLOW_DISPATCH(accumulate_real, c, z, out);
}

void accumulate_scaled(cplx c, std::span<const double> u, std::span<cplx> out) {
    CPFLOW_DISPATCH(accumulate_scaled, c, u, out);
}

void advect(std::span<const double> a, std::span<const double> ax, std::span<const double> b,
            std::span<const double> ay, std::span<double> out) {
    CPFLOW_DISPATCH(advect, a, ax, b, ay, out);
}

#undef CPFLOW_DISPATCH

} // namespace cpflow::kernels
