#include "doctest.h"

#include "cpflow/kernels.hpp"

#include <random>
#include <vector>

using namespace cpflow::kernels;
using cplx = std::complex<double>;

namespace {

struct Data {
    std::vector<double> w, x, a, b, c, d;
    std::vector<cplx> z1, z2;
};

Data make_data(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Data s;
    for (std::size_t i = 0; i < n; ++i) {
        s.w.push_back(std::abs(g(rng)));
        s.x.push_back(g(rng));
        s.a.push_back(g(rng));
        s.b.push_back(g(rng));
        s.c.push_back(g(rng));
        s.d.push_back(g(rng));
        s.z1.emplace_back(g(rng), g(rng));
        s.z2.emplace_back(g(rng), g(rng));
    }
    return s;
}

} // namespace

TEST_CASE("scalar kernels against direct sums") {
    const auto s = make_data(37, 1);
    double n2 = 0.0, sum = 0.0;
    cplx dot = 0.0;
    for (std::size_t i = 0; i < s.w.size(); ++i) {
        n2 += s.w[i] * std::norm(s.z1[i]);
        dot += s.w[i] * s.z1[i] * std::conj(s.z2[i]);
        sum += s.w[i] * s.x[i];
    }
    CHECK(scalar::weighted_norm2(s.w, s.z1) == doctest::Approx(n2));
    CHECK(std::abs(scalar::weighted_dot(s.w, s.z1, s.z2) - dot) < 1e-12);
    CHECK(scalar::weighted_sum(s.w, s.x) == doctest::Approx(sum));
}

#if defined(CPFLOW_HAVE_AVX2)
TEST_CASE("avx2 kernels match the scalar reference") {
    if (!isa_available(Isa::avx2)) {
        MESSAGE("AVX2 not available on this CPU; skipping");
        return;
    }
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 64u, 301u}) {
        CAPTURE(n);
        const auto s = make_data(n, 100 + static_cast<unsigned>(n));
        const double tol = 1e-13 * (1.0 + static_cast<double>(n));
        CHECK(std::abs(avx2::weighted_norm2(s.w, s.z1) - scalar::weighted_norm2(s.w, s.z1)) <= tol);
        CHECK(std::abs(avx2::weighted_dot(s.w, s.z1, s.z2) - scalar::weighted_dot(s.w, s.z1, s.z2)) <= tol);
        CHECK(std::abs(avx2::weighted_sum(s.w, s.x) - scalar::weighted_sum(s.w, s.x)) <= tol);

        const cplx c(0.3, -1.7);
        std::vector<double> o1(s.x), o2(s.x);
        scalar::accumulate_real(c, s.z1, o1);
        avx2::accumulate_real(c, s.z1, o2);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o2[i]) <= 1e-14 * (1 + std::abs(o1[i])));

        std::vector<cplx> q1(s.z2), q2(s.z2);
        scalar::accumulate_scaled(c, s.x, q1);
        avx2::accumulate_scaled(c, s.x, q2);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(q1[i] - q2[i]) <= 1e-14 * (1 + std::abs(q1[i])));

        std::vector<double> r1(n), r2(n);
        scalar::advect(s.a, s.b, s.c, s.d, r1);
        avx2::advect(s.a, s.b, s.c, s.d, r2);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(r1[i] - r2[i]) <= 1e-14 * (1 + std::abs(r1[i])));
    }
}
#endif

TEST_CASE("forced ISA routes the dispatcher") {
    const Isa original = active_isa();
    force_isa(Isa::scalar);
    CHECK(active_isa() == Isa::scalar);
    const auto s = make_data(9, 5);
    CHECK(weighted_sum(s.w, s.x) == scalar::weighted_sum(s.w, s.x));
    if (isa_available(Isa::avx2)) {
        force_isa(Isa::avx2);
        CHECK(active_isa() == Isa::avx2);
    }
    force_isa(original);
    CHECK(isa_name(Isa::scalar) == "scalar");
}
