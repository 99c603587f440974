#include "cpflow/kernels.hpp"

#include <cassert>

namespace cpflow::kernels::scalar {

double weighted_norm2(std::span<const double> w, std::span<const cplx> z) {
    assert(w.size() == z.size());
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        s += w[i] * (z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
    }
    return s;
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b) {
    assert(w.size() == a.size() && w.size() == b.size());
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        // a conj(b)
        re += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
        im += w[i] * (a[i].imag() * b[i].real() - a[i].real() * b[i].imag());
    }
    return {re, im};
}

double weighted_sum(std::span<const double> w, std::span<const double> x) {
    assert(w.size() == x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    return s;
}

void accumulate_real(cplx c, std::span<const cplx> z, std::span<double> out) {
    assert(z.size() == out.size());
    const double cr = c.real(), ci = c.imag();
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] += cr * z[i].real() - ci * z[i].imag();
    }
}

void accumulate_scaled(cplx c, std::span<const double> u, std::span<cplx> out) {
    assert(u.size() == out.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = {out[i].real() + c.real() * u[i], out[i].imag() + c.imag() * u[i]};
    }
}

void advect(std::span<const double> a, std::span<const double> ax, std::span<const double> b,
            std::span<const double> ay, std::span<double> out) {
    assert(a.size() == out.size() && ax.size() == out.size() && b.size() == out.size() &&
           ay.size() == out.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * ax[i] + b[i] * ay[i];
}

} // namespace cpflow::kernels::scalar
