#include "cpflow/os_mode.hpp"

#include "cpflow/error.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace cpflow {
namespace {

using lcplx = std::complex<long double>;

/// Interior rows 1..N-1 of a clamped derivative matrix.
RealMatrix interior_rows(const RealMatrix& C) { return C.middleRows(1, C.rows() - 2); }

/// r = h - M x accumulated in long double.
ComplexVector residual_long(const ComplexMatrix& M, const ComplexVector& x, const ComplexVector& h) {
    const Eigen::Index m = M.rows();
    ComplexVector r(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        lcplx s(h[i].real(), h[i].imag());
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            const lcplx a(M(i, j).real(), M(i, j).imag());
            const lcplx b(x[j].real(), x[j].imag());
            s -= a * b;
        }
        r[i] = cplx(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
    return r;
}

double interior_l2(const SpectralGrid& g, const ComplexVector& r) {
    double s = 0.0;
    for (int j = 1; j < g.N(); ++j) s += g.weights()[j] * std::norm(r[j - 1]);
    return std::sqrt(s);
}

} // namespace

ComplexMatrix biharmonic_matrix(double xi, const SpectralGrid& grid) {
    const double x2 = xi * xi;
    RealMatrix M = interior_rows(grid.clamped(4)) - 2.0 * x2 * interior_rows(grid.clamped(2));
    M.diagonal().array() += x2 * x2;
    return M.cast<cplx>();
}

ComplexMatrix os_operator_matrix(const Profile& p, double xi, const SpectralGrid& grid) {
    const int m = grid.interior_size();
    ComplexMatrix M = biharmonic_matrix(xi, grid);
    RealMatrix C2 = interior_rows(grid.clamped(2));
    C2.diagonal().array() -= xi * xi;
    RealVector F(m);
    for (int j = 0; j < m; ++j) F[j] = p.F(grid.node(j + 1));
    RealMatrix T = F.asDiagonal() * C2;
    T.diagonal().array() -= 6.0 * p.A();
    M -= cplx(0.0, xi) * T.cast<cplx>();
    return M;
}

OsModeOperator::OsModeOperator(double xi, GridPtr grid, ComplexMatrix m)
    : xi_(xi), grid_(std::move(grid)), matrix_(std::move(m)) {}

OsModeOperator::OsModeOperator(const Profile& p, double xi, GridPtr grid, double singular_threshold)
    : xi_(xi), grid_(std::move(grid)) {
    if (!grid_) throw DomainError("OsModeOperator: null grid");
    if (!std::isfinite(xi) || xi == 0.0) throw DomainError("OsModeOperator: xi must be finite and non-zero");
    matrix_ = os_operator_matrix(p, xi, *grid_);
    factorise(singular_threshold);
}

OsModeOperator OsModeOperator::zero_mode(GridPtr grid) {
    if (!grid) throw DomainError("OsModeOperator: null grid");
    ComplexMatrix m = interior_rows(grid->clamped(4)).cast<cplx>();
    OsModeOperator op(0.0, std::move(grid), std::move(m));
    op.factorise(0.0);
    return op;
}

void OsModeOperator::factorise(double singular_threshold) {
    lu_.compute(matrix_);
    const double rc = lu_.rcond();
    Eigen::PartialPivLU<ComplexMatrix> ref(biharmonic_matrix(xi_, *grid_));
    const double rc_ref = ref.rcond();
    relative_condition_ = rc > 0.0 ? rc_ref / rc : std::numeric_limits<double>::infinity();
    if (!std::isfinite(rc) || rc <= 0.0 || rc < singular_threshold * rc_ref) {
        std::ostringstream os;
        os << "OS operator at xi=" << xi_ << " is near-singular (relative condition " << relative_condition_
           << ")";
        throw NearSingularSystem(os.str(), relative_condition_);
    }
}

ModeSolution OsModeOperator::solve(const GridFunction& h) const {
    if (h.grid->N() != grid_->N()) throw DomainError("OsModeOperator::solve: grid mismatch");
    return solve(h.values);
}

ModeSolution OsModeOperator::solve(const ComplexVector& h_nodal) const {
    const SpectralGrid& g = *grid_;
    if (h_nodal.size() != g.size()) throw DomainError("OsModeOperator::solve: rhs length mismatch");
    if (!h_nodal.allFinite()) throw DomainError("OsModeOperator::solve: non-finite rhs");
    const int m = g.interior_size();
    const ComplexVector rhs = h_nodal.segment(1, m);

    ComplexVector x = lu_.solve(rhs);
    ComplexVector r = residual_long(matrix_, x, rhs);
    double rn = interior_l2(g, r);
    for (int it = 0; it < 3; ++it) {
        const ComplexVector x_new = x + lu_.solve(r);
        const ComplexVector r_new = residual_long(matrix_, x_new, rhs);
        const double rn_new = interior_l2(g, r_new);
        if (!(rn_new < rn)) break;
        x = x_new;
        r = r_new;
        rn = rn_new;
    }
    if (!x.allFinite()) throw SolverError("OsModeOperator::solve: non-finite solution");

    ModeSolution s;
    s.xi = xi_;
    s.interior = x;
    s.phi = GridFunction(grid_, g.clamped(0) * x);
    s.dphi = GridFunction(grid_, g.clamped(1) * x);
    s.d2phi = GridFunction(grid_, g.clamped(2) * x);
    s.residual_norm = rn;
    const double x2 = xi_ * xi_;
    s.lhs_energy = l2_norm_squared(s.d2phi) + 2.0 * x2 * l2_norm_squared(s.dphi) + x2 * x2 * l2_norm_squared(s.phi);
    s.relative_condition = relative_condition_;
    return s;
}

GridFunction ModeSolution::derivative(int order) const {
    return GridFunction(phi.grid, phi.grid->clamped(order) * interior);
}

ModeSolution solve_os_mode(const Profile& p, double xi, const GridFunction& h) {
    if (xi == 0.0) throw DomainError("solve_os_mode: xi = 0 is handled by solve_os_zero_mode");
    return OsModeOperator(p, xi, h.grid).solve(h);
}

ModeSolution solve_os_zero_mode(const GridFunction& h) { return OsModeOperator::zero_mode(h.grid).solve(h); }

GridFunction os_forcing_rhs(double xi, const GridFunction& f_mode, const GridFunction& g_mode) {
    GridFunction out = f_mode.derivative(1);
    out.values = cplx(0.0, xi) * g_mode.values - out.values;
    return out;
}

AprioriRatios apriori_ratio(const ModeSolution& sol, const GridFunction& h) {
    AprioriRatios r;
    const double hm1 = h_minus1_norm(h);
    const double l2 = l2_norm_squared(h);
    if (hm1 == 0.0 || l2 == 0.0) return r;
    r.r_hminus1 = sol.lhs_energy / (hm1 * hm1);
    r.r_l2 = sol.lhs_energy * sol.xi * sol.xi / l2;
    return r;
}

double poincare_ratio(const GridFunction& sigma) {
    const double d = l2_norm_squared(sigma);
    if (d == 0.0) throw DomainError("poincare_ratio: zero function");
    return l2_norm_squared(sigma.derivative(1)) / d;
}

SigmaDerivatives sigma_from_clamped(const SpectralGrid& g, const Profile& p, const ComplexVector& interior) {
    const int N = g.N();
    const ComplexVector f0 = g.clamped(0) * interior;
    const ComplexVector f1 = g.clamped(1) * interior;
    const ComplexVector f2 = g.clamped(2) * interior;
    const ComplexVector f3 = g.clamped(3) * interior;
    // Where F vanishes at a wall the limits are
    //   sigma = phi'/F', sigma' = phi''/(2F'), sigma'' = (phi''' - 3F'' sigma')/(3F').
    SigmaDerivatives d{ComplexVector(g.size()), ComplexVector(g.size()), ComplexVector(g.size())};
    for (int j = 0; j <= N; ++j) {
        const double y = g.node(j);
        const double F = p.F(y), Fp = p.Fp(y), Fpp = p.Fpp();
        if (F != 0.0) {
            d.s[j] = f0[j] / F;
            d.s1[j] = (f1[j] - Fp * d.s[j]) / F;
            d.s2[j] = (f2[j] - 2.0 * Fp * d.s1[j] - Fpp * d.s[j]) / F;
        } else if ((j == 0 || j == N) && Fp != 0.0) {
            d.s[j] = f1[j] / Fp;
            d.s1[j] = f2[j] / (2.0 * Fp);
            d.s2[j] = (f3[j] - 3.0 * Fpp * d.s1[j]) / (3.0 * Fp);
        } else {
            throw InadmissibleProfile("sigma: F vanishes inside the channel, or F and F' both vanish at a wall");
        }
    }
    return d;
}

SigmaDiagnostics sigma_diagnostics(const ModeSolution& sol, const Profile& p, const std::optional<GridFunction>& h) {
    const auto rep = check_admissibility(p);
    if (rep.reversal || !rep.positive_interior) {
        throw InadmissibleProfile("sigma_diagnostics: F must be positive on (-1,1)");
    }
    const GridPtr& gp = sol.phi.grid;
    const SpectralGrid& g = *gp;
    const int N = g.N();
    const auto [s, s1, s2] = sigma_from_clamped(g, p, sol.interior);

    SigmaDiagnostics d;
    d.sigma = GridFunction(gp, s);
    const double tol = 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff());
    d.boundary_ok = std::abs(s[0]) <= tol && std::abs(s[N]) <= tol;

    d.a00_value = p.Fp(1.0) * std::norm(s1[0]) - p.Fp(-1.0) * std::norm(s1[N]);

    const double ns = l2_norm_squared(d.sigma);
    const double ns1 = l2_norm_squared(GridFunction(gp, s1));
    d.poincare_ratio = ns > 0.0 ? ns1 / ns : 0.0;

    const double x2 = sol.xi * sol.xi;
    RealVector dens(g.size());
    for (int j = 0; j <= N; ++j) {
        dens[j] = p.F(g.node(j)) *
                  (std::norm(s2[j]) + 2.0 * x2 * std::norm(s1[j]) + x2 * x2 * std::norm(s[j]));
    }
    d.energy_lhs = -12.0 * p.A() * ns1 - 6.0 * p.A() * x2 * ns +
                   g.integrate(std::span<const double>(dens.data(), static_cast<std::size_t>(dens.size())));
    d.control_rhs = ns1 + x2 * ns + sol.lhs_energy;
    if (h) {
        d.re_h_sigma = l2_inner(*h, d.sigma).real();
        d.h_minus1_bound = h_minus1_norm(*h) * std::sqrt(ns1);
    }
    return d;
}

} // namespace cpflow
