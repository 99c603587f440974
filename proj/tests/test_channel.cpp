#include "doctest.h"

#include "oracles.hpp"

#include "cpflow/channel.hpp"
#include "cpflow/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cpflow;
using std::numbers::pi;

namespace {

const Profile poiseuille(-1.0, 0.0, 3.0);

std::shared_ptr<const ChannelDiscretization> make_disc(double xi0, int K, int N) {
    return std::make_shared<const ChannelDiscretization>(xi0, K, N);
}

/// psi* = sin(a x) P(y), P = (1-y^2)^2, with pressure q* = 0.3 cos(a x) y.
struct Manufactured {
    Profile p;
    double a;
    static double P(double y) { return std::pow(1 - y * y, 2); }
    static double P1(double y) { return -4 * y + 4 * y * y * y; }
    static double P2(double y) { return -4 + 12 * y * y; }
    static double P3(double y) { return 24 * y; }
    double v(double x, double y) const { return std::sin(a * x) * P1(y); }
    double w(double x, double y) const { return -a * std::cos(a * x) * P(y); }
    double qx(double x, double y) const { return -0.3 * a * std::sin(a * x) * y; }
    double qy(double x, double) const { return 0.3 * std::cos(a * x); }
    double fx(double x, double y) const {
        const double s = std::sin(a * x), c = std::cos(a * x);
        return -s * (P3(y) - a * a * P1(y)) + p.F(y) * a * c * P1(y) - p.Fp(y) * a * c * P(y) + qx(x, y);
    }
    double fy(double x, double y) const {
        const double s = std::sin(a * x), c = std::cos(a * x);
        return a * c * (P2(y) - a * a * P(y)) + p.F(y) * a * a * s * P(y) + qy(x, y);
    }
};

} // namespace

TEST_CASE("synthesis and analysis are inverse on the band") {
    const auto d = make_disc(0.7, 5, 16);
    std::mt19937_64 rng(1);
    const auto f = random_force(*d, rng);
    const Field2D phys = d->synthesize(f.f);
    const ModeSet back = d->analyse(phys);
    for (int k = 0; k < d->modes(); ++k) CHECK((back[k] - f.f[k]).cwiseAbs().maxCoeff() <= 1e-13);
    // Parseval against a direct tensor quadrature
    double direct = 0.0;
    for (int i = 0; i < d->nx(); ++i)
        for (int j = 0; j < d->ny(); ++j) direct += d->grid()->weights()[j] * phys(i, j) * phys(i, j);
    direct *= d->period() / d->nx();
    CHECK(d->l2_norm_squared(f.f) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("manufactured linearized solve") {
    const auto d = make_disc(1.0, 8, 48);
    const Manufactured m{poiseuille, 1.0};
    const auto force = ForceModes::from_functions(
        *d, [&](double x, double y) { return m.fx(x, y); }, [&](double x, double y) { return m.fy(x, y); });
    const auto field = solve_linearized(poiseuille, d, force);
    double ev = 0.0, eq = 0.0;
    for (int i = 0; i < d->nx(); ++i) {
        for (int j = 0; j < d->ny(); ++j) {
            const double x = d->x(i), y = d->grid()->node(j);
            ev = std::max({ev, std::abs(field.v(i, j) - m.v(x, y)), std::abs(field.w(i, j) - m.w(x, y))});
            eq = std::max({eq, std::abs(field.qx(i, j) - m.qx(x, y)), std::abs(field.qy(i, j) - m.qy(x, y))});
        }
    }
    CHECK(ev <= 1e-9);
    CHECK(eq <= 1e-8);
    CHECK(field.curl_residual <= 1e-7);
    const auto k = kinematic_report(field);
    CHECK(k.divergence_max <= 1e-10);
    CHECK(k.wall_max <= 1e-12);
    CHECK(k.flux_max <= 1e-12);
    CHECK(k.stream_max <= 1e-10);
    CHECK(k.reality == 0.0);
}

TEST_CASE("zero force gives the zero field") {
    const auto d = make_disc(1.0, 6, 32);
    const auto field = solve_linearized(poiseuille, d, ForceModes::zero(*d));
    CHECK(field.v.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(field.w.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(field.qx.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(field.qy.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("random solves: kinematics, curl and the global bound") {
    const auto d = make_disc(0.8, 6, 40);
    std::mt19937_64 rng(4);
    const Profile couette(0.0, 1.0, 1.0);
    for (const Profile& p : {poiseuille, couette, Profile(-0.5, 0.3, 2.0)}) {
        const LinearChannelSolver solver(p, d);
        for (int t = 0; t < 3; ++t) {
            const auto f = random_force(*d, rng);
            const auto field = solver.solve(f);
            const auto k = kinematic_report(field);
            CHECK(field.curl_residual <= 1e-7);
            CHECK(k.divergence_max <= 1e-10 * (1 + field.v.cwiseAbs().maxCoeff()));
            CHECK(k.flux_max <= 1e-12);
            CHECK(k.wall_max <= 1e-12);
            const double ratio = (field.velocity_h2() + field.pressure_gradient_l2()) / f.l2_norm(*d);
            CHECK(std::isfinite(ratio));
            CHECK(ratio < 1e3);
        }
    }
}

TEST_CASE("x-shift equivariance") {
    const auto d = make_disc(1.0, 5, 32);
    std::mt19937_64 rng(6);
    const auto f = random_force(*d, rng);
    // shift by two grid cells
    const int s = 2;
    const double dx = d->x(s);
    ForceModes g = f;
    for (int k = -d->K(); k <= d->K(); ++k) {
        const cplx ph = std::exp(cplx(0.0, -d->wavenumber(k) * dx));
        g.f[k + d->K()] *= ph;
        g.g[k + d->K()] *= ph;
    }
    const auto a = solve_linearized(poiseuille, d, f);
    const auto b = solve_linearized(poiseuille, d, g);
    for (int i = 0; i < d->nx(); ++i) {
        const int src = (i - s + d->nx()) % d->nx();
        CHECK((b.v.row(i) - a.v.row(src)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((b.w.row(i) - a.w.row(src)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("unresolved forces are refused") {
    const auto d = make_disc(1.0, 3, 24);
    CHECK_THROWS_AS(ForceModes::from_functions(
                        *d, [](double x, double) { return std::cos(7 * x); }, [](double, double) { return 0.0; }),
                    ResolutionError);
    CHECK_NOTHROW(ForceModes::from_functions(
        *d, [](double x, double) { return std::cos(3 * x); }, [](double, double) { return 0.0; }));
}

TEST_CASE("inadmissible profiles are rejected") {
    const auto d = make_disc(1.0, 2, 24);
    CHECK_THROWS_AS(solve_linearized(Profile(-1924.07, 0.0, 5771.96), d, ForceModes::zero(*d)), InadmissibleProfile);
}

TEST_CASE("X^m norms") {
    const auto d = make_disc(0.5, 4, 32);
    // constant field
    ModeSet c = d->zero_modes();
    c[d->K()].setConstant(cplx(2.5, 0.0));
    CHECK(x_norm(*d, {y_derivatives(*d, c)}, 0) == doctest::Approx(2.5 * std::sqrt(2.0)).epsilon(1e-12));

    // x-independent field: every window gives the same value
    ModeSet u = d->zero_modes();
    for (int j = 0; j < d->ny(); ++j) u[d->K()][j] = std::cos(d->grid()->node(j));
    const auto du = std::vector<YDerivatives>{y_derivatives(*d, u)};
    const double w0 = x_window_norm(*d, du, 2, 0.0);
    for (double a : {0.3, 1.7, 5.0}) CHECK(x_window_norm(*d, du, 2, a) == doctest::Approx(w0).epsilon(1e-12));
    CHECK(x_norm(*d, du, 2) == doctest::Approx(w0).epsilon(1e-12));

    // sin(xi0 x)(1 - y^2) against a brute-force window scan
    ModeSet s = d->zero_modes();
    for (int j = 0; j < d->ny(); ++j) {
        const double y = d->grid()->node(j);
        s[d->K() + 1][j] = cplx(0.0, -0.5) * (1 - y * y);
        s[d->K() - 1][j] = cplx(0.0, 0.5) * (1 - y * y);
    }
    const auto ds = std::vector<YDerivatives>{y_derivatives(*d, s)};
    const double xi0 = d->xi0();
    auto window_h1 = [&](double a) {
        const auto qx = oracle::gauss_legendre(40, a, a + 1.0);
        const auto qy = oracle::gauss_legendre(20);
        double e = 0.0;
        for (std::size_t i = 0; i < qx.x.size(); ++i) {
            for (std::size_t j = 0; j < qy.x.size(); ++j) {
                const double x = qx.x[i], y = qy.x[j];
                const double f = std::sin(xi0 * x) * (1 - y * y);
                const double fx = xi0 * std::cos(xi0 * x) * (1 - y * y);
                const double fy = -2 * y * std::sin(xi0 * x);
                e += qx.w[i] * qy.w[j] * (f * f + fx * fx + fy * fy);
            }
        }
        return std::sqrt(e);
    };
    const double ours = x_norm(*d, ds, 1);
    double at_best = 0.0, best_a = 0.0;
    for (int i = 0; i < d->nx(); ++i) {
        const double v = x_window_norm(*d, ds, 1, d->x(i));
        if (v > at_best) {
            at_best = v;
            best_a = d->x(i);
        }
    }
    CHECK(ours == doctest::Approx(at_best).epsilon(1e-14));
    CHECK(window_h1(best_a) == doctest::Approx(ours).epsilon(1e-12));
    double fine = 0.0;
    for (int i = 0; i < 4 * d->nx(); ++i) fine = std::max(fine, window_h1(d->period() * i / (4.0 * d->nx())));
    CHECK(fine >= ours * (1 - 1e-12));
    CHECK(fine <= ours * 1.05);

    // X^m is dominated by the cell norm
    std::mt19937_64 rng(3);
    const auto field = field_from_psi(d, random_stream_function(*d, rng));
    for (int m = 0; m <= 2; ++m) CHECK(x_norm(field, m) <= field.velocity_norm(m) * (1 + 1e-12));
}

TEST_CASE("X^m equals the cell norm for x-independent fields on a width-1 cell") {
    const auto d = make_disc(2 * pi, 2, 24);
    ModeSet u = d->zero_modes();
    for (int j = 0; j < d->ny(); ++j) u[d->K()][j] = std::exp(d->grid()->node(j));
    const auto du = std::vector<YDerivatives>{y_derivatives(*d, u)};
    for (int m = 0; m <= 2; ++m) CHECK(x_norm(*d, du, m) == doctest::Approx(cell_norm(*d, du, m)).epsilon(1e-12));
}

TEST_CASE("Gamma(L) energy") {
    const auto d = make_disc(0.5, 5, 32);
    const std::vector<double> Ls{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
    const auto zero = field_from_psi(d, ModeSet(d->modes(), ComplexVector::Zero(d->grid()->interior_size())));
    const auto r0 = gamma_energy(poiseuille, zero, Ls);
    for (const auto& [L, g] : r0.gamma_L) CHECK(g == 0.0);

    std::mt19937_64 rng(12);
    double worst = 0.0;
    for (const Profile& p : {poiseuille, Profile(0.0, 1.0, 1.0), Profile(-0.25, 0.5, 1.5)}) {
        for (int t = 0; t < 5; ++t) {
            const auto f = field_from_psi(d, random_stream_function(*d, rng));
            const auto r = gamma_energy(p, f, Ls);
            CHECK(r.gamma_monotone);
            for (const auto& [L, g] : r.gamma_L) CHECK(g > 0.0);
            worst = std::max(worst, r.max_control_ratio);
        }
    }
    MESSAGE("Gamma control ratio: " << worst);
    CHECK(worst < 100.0);
    CHECK_THROWS_AS(gamma_energy(Profile(-1, 0, 2.9), zero, Ls), InadmissibleProfile);
}

TEST_CASE("symmetry projections") {
    const auto d = make_disc(1.0, 4, 24);
    std::mt19937_64 rng(8);
    const auto f = field_from_psi(d, random_stream_function(*d, rng));
    for (auto c : {SymmetryClass::X1, SymmetryClass::X2, SymmetryClass::Y1, SymmetryClass::Y2}) {
        CAPTURE(symmetry_name(c));
        const auto p1 = symmetry_project(f, c);
        const auto p2 = symmetry_project(p1, c);
        CHECK((p1.v - p2.v).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((p1.w - p2.w).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(symmetry_defect(*d, p1.psi, c) <= 1e-15);
    }
    const auto e = symmetry_project(f, SymmetryClass::X1), o = symmetry_project(f, SymmetryClass::X2);
    CHECK((e.v + o.v - f.v).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((e.w + o.w - f.w).cwiseAbs().maxCoeff() <= 1e-14);

    // v = cos(x) g(y), w = sin(x) h(y) is fixed by X1
    ModeSet psi(d->modes(), ComplexVector::Zero(d->grid()->interior_size()));
    for (int j = 1; j < d->grid()->N(); ++j) {
        const double y = d->grid()->node(j);
        psi[d->K() + 1][j - 1] = 0.5 * std::pow(1 - y * y, 2) * (1 + y);
    }
    const auto cf = field_from_psi(d, psi);
    const auto pc = symmetry_project(cf, SymmetryClass::X1);
    CHECK((pc.v - cf.v).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((pc.w - cf.w).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("symmetry cancellation integrals") {
    const auto d = make_disc(1.0, 4, 32);
    auto single = [&](cplx coeff) {
        ModeSet psi(d->modes(), ComplexVector::Zero(d->grid()->interior_size()));
        for (int j = 1; j < d->grid()->N(); ++j) {
            const double y = d->grid()->node(j);
            psi[d->K() + 1][j - 1] = coeff * std::pow(1 - y * y, 2);
            psi[d->K() - 1][j - 1] = std::conj(coeff) * std::pow(1 - y * y, 2);
        }
        return psi;
    };
    // cos x (1-y^2)^2 and sin x (1-y^2)^2
    for (cplx c : {cplx(0.5, 0.0), cplx(0.0, -0.5)}) {
        const auto r = check_symmetry_cancellation(poiseuille, *d, single(c));
        CHECK(std::abs(r.I1) <= 1e-10 * r.scale);
        CHECK(std::abs(r.I2) <= 1e-10 * r.scale);
    }
    // (cos + 0.3 sin)(x) (1-y^2)^2 is in neither class; with the
    // single-mode y-profile I1 still vanishes, so use a mixed profile
    ModeSet mixed(d->modes(), ComplexVector::Zero(d->grid()->interior_size()));
    for (int j = 1; j < d->grid()->N(); ++j) {
        const double y = d->grid()->node(j);
        const double P = std::pow(1 - y * y, 2);
        mixed[d->K() + 1][j - 1] = cplx(0.5, 0.0) * P + cplx(0.0, -0.15) * P * (1 + 2 * y * y);
    }
    mixed[d->K() - 1] = mixed[d->K() + 1].conjugate();
    CHECK_THROWS_AS(check_symmetry_cancellation(poiseuille, *d, mixed), PreconditionError);
    const auto r = symmetry_integrals(poiseuille, *d, mixed);
    CHECK(std::abs(r.I1) > 1e-3 * r.scale);
    CHECK(std::abs(r.I2) <= 1e-10 * r.scale);

    CHECK_THROWS_AS(check_symmetry_cancellation(Profile(0.0, 1.0, 1.0), *d, single(0.5)), PreconditionError);

    std::mt19937_64 rng(19);
    for (int t = 0; t < 20; ++t) {
        const auto psi = random_stream_function(*d, rng);
        const auto cls = (t % 2 == 0) ? SymmetryClass::X1 : SymmetryClass::X2;
        const auto r2 = check_symmetry_cancellation(poiseuille, *d, project_psi(*d, psi, cls));
        CHECK(std::abs(r2.I1) <= 1e-10 * r2.scale);
        CHECK(std::abs(r2.I2) <= 1e-10 * r2.scale);
    }
}
