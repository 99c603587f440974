#include "doctest.h"

#include "oracles.hpp"

#include "cpflow/error.hpp"
#include "cpflow/spectrum.hpp"

#include <cmath>

using namespace cpflow;

namespace {

/// Near-neutral parameters found by the search at N = 300.
constexpr double reA_star = 5772.2218;
constexpr double T_star = 1.02055;

cplx nearest(const Eigen::VectorXcd& v, cplx z) {
    cplx best = v[0];
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i] - z) < std::abs(best - z)) best = v[i];
    return best;
}

} // namespace

TEST_CASE("weak Poiseuille flow is stable") {
    const SpectrumResult s = os_spectrum(-0.1, 1.0, 40);
    CHECK(s.n_resolved >= 10);
    CHECK(s.leading.real() < 0.0);
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i)
        CHECK(s.eigenvalues[i].real() <= s.eigenvalues[i - 1].real());
}

TEST_CASE("without flow the spectrum is real and negative") {
    const SpectrumResult s = os_spectrum(0.0, 1.3, 40);
    for (cplx l : s.eigenvalues) {
        CHECK(l.real() < 0.0);
        CHECK(std::abs(l.imag()) <= 1e-10 * std::abs(l));
    }
    // the slowest Stokes mode lies below -(pi^2/4 + T^2)... the first even
    // clamped mode is bounded by the Dirichlet Laplacian eigenvalue
    CHECK(s.leading.real() < -(std::pow(std::acos(-1.0) / 2, 2) + 1.3 * 1.3));
}

TEST_CASE("mapping to the classical phase-speed problem") {
    // lambda = -i T Re c with Re = -3A, against a Chebyshev tau solve that
    // shares no code with the collocation operator
    for (auto [reA, T] : {std::pair{6000.0, 1.0}, std::pair{reA_star, T_star}, std::pair{2000.0, 1.5}}) {
        CAPTURE(reA);
        const SpectrumResult s = os_spectrum(-reA / 3.0, T, 120);
        const Eigen::VectorXcd c = oracle::poiseuille_phase_speeds(T, reA, 110);
        for (std::size_t i = 0; i < 5; ++i) {
            const cplx lam = s.eigenvalues[i];
            const cplx c_lam = lam / cplx(0.0, -T * reA);
            const cplx c_ref = nearest(c, c_lam);
            CHECK(std::abs(c_lam - c_ref) <= 1e-8 * std::abs(c_ref));
        }
    }
    // the classical critical phase speed
    const SpectrumResult s = os_spectrum(-reA_star / 3.0, T_star, 160);
    CHECK(-s.leading.imag() / (T_star * reA_star) == doctest::Approx(0.26400).epsilon(1e-4));
    CHECK(std::abs(s.leading.real()) < 1e-4);
}

TEST_CASE("energy identity on resolved eigenpairs") {
    const double A = -300.0, T = 1.2;
    const auto g = SpectralGrid::make(64);
    const SpectrumResult s = os_spectrum(A, T, 64);
    for (int i = 0; i < s.n_resolved; ++i) {
        CAPTURE(i);
        CHECK(verify_energy_identity(A, T, *g, s.eigenvectors[i], s.eigenvalues[i]) <= 1e-8);
        // homogeneous in phi
        const ComplexVector v2 = cplx(2.0, -1.0) * s.eigenvectors[i];
        CHECK(verify_energy_identity(A, T, *g, v2, s.eigenvalues[i]) ==
              doctest::Approx(verify_energy_identity(A, T, *g, s.eigenvectors[i], s.eigenvalues[i])).epsilon(1e-6));
    }
    // a wrong eigenvalue breaks it
    CHECK(verify_energy_identity(A, T, *g, s.eigenvectors[0], s.eigenvalues[0] + 1.0) > 1e-4);
}

TEST_CASE("pencil tracking reproduces the full spectrum") {
    const double A = -reA_star / 3.0;
    const auto g = SpectralGrid::make(160);
    const SpectrumResult s = os_spectrum(A, T_star, 160);
    const TrackedEigenpair t = track_eigenpair(A, T_star, *g, s.leading * 1.001);
    CHECK(std::abs(t.lambda - s.leading) <= 1e-9 * std::abs(s.leading));
    CHECK(t.residual <= 1e-13);
    // the growth rate is smooth in A after refinement
    const ComplexVector v = t.vector;
    double prev = t.lambda.real(), prev_step = 0.0;
    for (int i = 1; i <= 4; ++i) {
        const double reA = reA_star + i * 1e-5;
        const double re = track_eigenpair(-reA / 3.0, T_star, *g, t.lambda, &v).lambda.real();
        const double step = re - prev;
        CHECK(step > 0.0);
        if (i > 1) CHECK(step == doctest::Approx(prev_step).epsilon(0.05));
        prev = re, prev_step = step;
    }
}

TEST_CASE("leading eigenvalue converges between N and 3N/2 near neutral") {
    const SpectrumResult a = os_spectrum(-reA_star / 3.0, T_star, 160, 240);
    const SpectrumResult b = os_spectrum(-reA_star / 3.0, T_star, 240, 160);
    CHECK(std::abs(a.leading - b.leading) <= 1e-6 * std::abs(b.leading));
}

TEST_CASE("leading eigenvalue is continuous in A") {
    const SpectrumResult a = os_spectrum(-100.0, 1.0, 48);
    const SpectrumResult b = os_spectrum(-100.0 - 1e-4, 1.0, 48);
    CHECK(std::abs(a.leading - b.leading) <= 1e-3 * std::abs(a.leading) * 1e-2);
}

TEST_CASE("small |AT| certificate") {
    const CertificateReport ok = small_at_certificate(20.0);
    CHECK(ok.stable);
    CHECK(ok.samples.size() == 25);
    for (const auto& s : ok.samples) CHECK(std::abs(s.A * s.T) <= 20.0 + 1e-12);

    // a sample list reaching the unstable region is not certified
    const CertificateReport bad = small_at_certificate({{-1.0, 1.0}, {-6000.0 / 3.0, 1.0}}, 120);
    CHECK_FALSE(bad.stable);
    CHECK(bad.samples[1].leading.real() > 0.0);
}

TEST_CASE("kernel witness separates the neutral profile from Poiseuille") {
    const auto g = SpectralGrid::make(200);
    const double A = -reA_star / 3.0;
    const SpectrumResult s = os_spectrum(A, T_star, 200, 300);
    const TrackedEigenpair t = track_eigenpair(A, T_star, *g, s.leading, &s.eigenvectors.front());
    const Profile neutral(A, 0.0, -3.0 * A + t.lambda.imag() / T_star);
    CHECK(check_admissibility(neutral).reversal);
    CHECK_FALSE(check_admissibility(neutral).satisfies_abc);
    CHECK(kernel_witness(neutral, T_star, *g) <= 1e-6);
    CHECK(kernel_witness(Profile(-1.0, 0.0, 3.0), T_star, *g) >= 1e-3);
    // moving the profile off the neutral shift restores injectivity
    const Profile off(A, 0.0, -3.0 * A + t.lambda.imag() / T_star + 50.0);
    CHECK(kernel_witness(off, T_star, *g) > 1e3 * kernel_witness(neutral, T_star, *g));
}

TEST_CASE("neutral search on a narrow bracket") {
    NeutralConfig cfg;
    cfg.reA_min = 5600.0;
    cfg.reA_max = 5900.0;
    cfg.T_min = 0.95;
    cfg.T_max = 1.1;
    cfg.T_tol = 1e-5;
    cfg.N = 140;
    cfg.N_check = 180;
    const NeutralPoint np = neutral_search(cfg);
    CHECK(-3.0 * np.A1 == doctest::Approx(5772.22).epsilon(1e-3));
    CHECK(np.T0 == doctest::Approx(1.0206).epsilon(1e-3));
    CHECK(std::abs(np.lambda1.real()) <= cfg.tol);
    CHECK(-np.lambda1.imag() / (np.T0 * -3.0 * np.A1) == doctest::Approx(0.2640).epsilon(1e-3));
    CHECK(np.discretizations_agree);
    CHECK(np.reversal_confirmed);
    CHECK(np.C_counter < 3.0 * std::abs(np.A1));
    CHECK(np.witness <= 1e-6);
    CHECK(np.C_counter == doctest::Approx(-3.0 * np.A1 + np.lambda1.imag() / np.T0));
    CHECK(neutral_profile(np) == Profile(np.A1, 0.0, np.C_counter));
    REQUIRE_FALSE(np.trace.empty());
    CHECK(np.trace.front().N == 140);
    CHECK(np.trace.back().N == 180);
}

TEST_CASE("neutral search failures") {
    NeutralConfig cfg;
    cfg.reA_min = 3000.0;
    cfg.reA_max = 4000.0;
    cfg.N = 80;
    cfg.N_check = 100;
    cfg.T_tol = 1e-4;
    CHECK_THROWS_AS(neutral_search(cfg), NoBracket);

    NeutralConfig edge;
    edge.reA_min = 5600.0;
    edge.reA_max = 5900.0;
    edge.T_min = 1.2;
    edge.T_max = 1.3;
    edge.N = 80;
    edge.N_check = 100;
    edge.T_tol = 1e-4;
    CHECK_THROWS_AS(neutral_search(edge), SolverError);

    NeutralConfig tight;
    tight.reA_min = 5600.0;
    tight.reA_max = 5900.0;
    tight.T_min = 0.95;
    tight.T_max = 1.1;
    tight.T_tol = 1e-4;
    tight.N = 80;
    tight.N_check = 100;
    tight.max_bisect = 3;
    try {
        neutral_search(tight);
        FAIL("expected NeutralNotConverged");
    } catch (const NeutralNotConverged& e) {
        CHECK(e.best_reA() > 5600.0);
        CHECK(e.best_reA() < 5900.0);
        CHECK(std::abs(e.best_re_lambda()) > tight.tol);
    }

    NeutralConfig bad;
    bad.N_check = bad.N;
    CHECK_THROWS_AS(neutral_search(bad), ConfigError);
}

TEST_CASE("invalid wavenumbers") {
    const auto g = SpectralGrid::make(16);
    CHECK_THROWS_AS(os_spectrum(-1.0, 0.0, 16), DomainError);
    CHECK_THROWS_AS(spectrum_rhs(-1.0, *g), DomainError);
}
