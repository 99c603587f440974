// AVX2/FMA variants.  This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a CPUID check (see dispatch.cpp).

#include "cpflow/kernels.hpp"

#include <cassert>
#include <immintrin.h>

namespace cpflow::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// [w0, w0, w1, w1] from two consecutive weights.
inline __m256d dup_pairs(const double* w) {
    const __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(w));
    return _mm256_permute4x64_pd(v, 0b01010000);
}

} // namespace

double weighted_norm2(std::span<const double> w, std::span<const cplx> z) {
    assert(w.size() == z.size());
    const std::size_t n = w.size();
    const double* zp = reinterpret_cast<const double*>(z.data());
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d z0 = _mm256_loadu_pd(zp + 2 * i);
        const __m256d z1 = _mm256_loadu_pd(zp + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(dup_pairs(w.data() + i), _mm256_mul_pd(z0, z0), acc0);
        acc1 = _mm256_fmadd_pd(dup_pairs(w.data() + i + 2), _mm256_mul_pd(z1, z1), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += w[i] * (z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
    return s;
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b) {
    assert(w.size() == a.size() && w.size() == b.size());
    const std::size_t n = w.size();
    const double* ap = reinterpret_cast<const double*>(a.data());
    const double* bp = reinterpret_cast<const double*>(b.data());
    __m256d acc_re = _mm256_setzero_pd(); // [ar br, ai bi, ...]
    __m256d acc_im = _mm256_setzero_pd(); // [ar bi, ai br, ...]
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d av = _mm256_loadu_pd(ap + 2 * i);
        const __m256d bv = _mm256_loadu_pd(bp + 2 * i);
        const __m256d bs = _mm256_permute_pd(bv, 0b0101);
        const __m256d wv = dup_pairs(w.data() + i);
        acc_re = _mm256_fmadd_pd(wv, _mm256_mul_pd(av, bv), acc_re);
        acc_im = _mm256_fmadd_pd(wv, _mm256_mul_pd(av, bs), acc_im);
    }
    alignas(32) double r[4], m[4];
    _mm256_store_pd(r, acc_re);
    _mm256_store_pd(m, acc_im);
    double re = (r[0] + r[1]) + (r[2] + r[3]);
    double im = (m[1] - m[0]) + (m[3] - m[2]);
    for (; i < n; ++i) {
        re += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
        im += w[i] * (a[i].imag() * b[i].real() - a[i].real() * b[i].imag());
    }
    return {re, im};
}

double weighted_sum(std::span<const double> w, std::span<const double> x) {
    assert(w.size() == x.size());
    const std::size_t n = w.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(x.data() + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * x[i];
    return s;
}

void accumulate_real(cplx c, std::span<const cplx> z, std::span<double> out) {
    assert(z.size() == out.size());
    const std::size_t n = z.size();
    const double* zp = reinterpret_cast<const double*>(z.data());
    const __m256d cv = _mm256_setr_pd(c.real(), -c.imag(), c.real(), -c.imag());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ta = _mm256_mul_pd(cv, _mm256_loadu_pd(zp + 2 * i));
        const __m256d tb = _mm256_mul_pd(cv, _mm256_loadu_pd(zp + 2 * i + 4));
        // hadd gives [s0, s2, s1, s3]
        const __m256d s = _mm256_permute4x64_pd(_mm256_hadd_pd(ta, tb), 0b11011000);
        _mm256_storeu_pd(out.data() + i, _mm256_add_pd(_mm256_loadu_pd(out.data() + i), s));
    }
    for (; i < n; ++i) out[i] += c.real() * z[i].real() - c.imag() * z[i].imag();
}

void accumulate_scaled(cplx c, std::span<const double> u, std::span<cplx> out) {
    assert(u.size() == out.size());
    const std::size_t n = u.size();
    double* op = reinterpret_cast<double*>(out.data());
    const __m256d cv = _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d o = _mm256_loadu_pd(op + 2 * i);
        _mm256_storeu_pd(op + 2 * i, _mm256_fmadd_pd(cv, dup_pairs(u.data() + i), o));
    }
    for (; i < n; ++i) {
        out[i] = {out[i].real() + c.real() * u[i], out[i].imag() + c.imag() * u[i]};
    }
}

void advect(std::span<const double> a, std::span<const double> ax, std::span<const double> b,
            std::span<const double> ay, std::span<double> out) {
    assert(a.size() == out.size() && ax.size() == out.size() && b.size() == out.size() &&
           ay.size() == out.size());
    const std::size_t n = out.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_mul_pd(_mm256_loadu_pd(b.data() + i), _mm256_loadu_pd(ay.data() + i));
        _mm256_storeu_pd(out.data() + i,
                         _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(ax.data() + i), t));
    }
    for (; i < n; ++i) out[i] = a[i] * ax[i] + b[i] * ay[i];
}

} // namespace cpflow::kernels::avx2
