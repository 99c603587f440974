#pragma once

// Data-parallel inner loops shared by the quadrature, Fourier synthesis and
// advection code.  Each kernel has a portable scalar reference and, on x86-64,
// an AVX2/FMA variant.  The variant is chosen once at runtime from CPUID and
// can be overridden (CPFLOW_SIMD=scalar|avx2 or force_isa()) for testing.

#include <complex>
#include <span>
#include <string_view>

namespace cpflow::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;

/// ISA used by the dispatching entry points below.
Isa active_isa() noexcept;

/// Overrides the runtime choice; throws DomainError if `isa` is unavailable.
void force_isa(Isa isa);

/// sum_i w_i |z_i|^2
double weighted_norm2(std::span<const double> w, std::span<const cplx> z);

/// sum_i w_i a_i conj(b_i)
cplx weighted_dot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b);

/// sum_i w_i x_i
double weighted_sum(std::span<const double> w, std::span<const double> x);

/// out_i += Re(c z_i)   (real synthesis of one Fourier mode)
void accumulate_real(cplx c, std::span<const cplx> z, std::span<double> out);

/// out_i += c u_i   (analysis of one real sample line into a mode)
void accumulate_scaled(cplx c, std::span<const double> u, std::span<cplx> out);

/// out_i = a_i ax_i + b_i ay_i   (pointwise advection (a,b).grad)
void advect(std::span<const double> a, std::span<const double> ax, std::span<const double> b,
            std::span<const double> ay, std::span<double> out);

// Per-ISA implementations; the dispatchers above forward here.
namespace scalar {
double weighted_norm2(std::span<const double> w, std::span<const cplx> z);
cplx weighted_dot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b);
double weighted_sum(std::span<const double> w, std::span<const double> x);
void accumulate_real(cplx c, std::span<const cplx> z, std::span<double> out);
void accumulate_scaled(cplx c, std::span<const double> u, std::span<cplx> out);
void advect(std::span<const double> a, std::span<const double> ax, std::span<const double> b,
            std::span<const double> ay, std::span<double> out);
} // namespace scalar

#if defined(CPFLOW_HAVE_AVX2)
namespace avx2 {
double weighted_norm2(std::span<const double> w, std::span<const cplx> z);
cplx weighted_dot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b);
double weighted_sum(std::span<const double> w, std::span<const double> x);
void accumulate_real(cplx c, std::span<const cplx> z, std::span<double> out);
void accumulate_scaled(cplx c, std::span<const double> u, std::span<cplx> out);
void advect(std::span<const double> a, std::span<const double> ax, std::span<const double> b,
            std::span<const double> ay, std::span<double> out);
} // namespace avx2
#endif

} // namespace cpflow::kernels
