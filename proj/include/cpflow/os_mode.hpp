#pragma once

#include "cpflow/profiles.hpp"
#include "cpflow/spectral.hpp"

#include <optional>

namespace cpflow {

/// Solution of the forced Orr–Sommerfeld problem at one wavenumber.
struct ModeSolution {
    double xi = 0.0;
    GridFunction phi;   ///< nodal values, phi(+-1) = 0
    GridFunction dphi;  ///< phi'
    GridFunction d2phi; ///< phi''
    ComplexVector interior; ///< phi at the N-1 interior nodes (clamped parametrisation)
    double residual_norm = 0.0; ///< quadrature L2 norm of the collocation residual
    double lhs_energy = 0.0;    ///< int |phi''|^2 + 2 xi^2 |phi'|^2 + xi^4 |phi|^2
    double relative_condition = 1.0; ///< rcond(biharmonic) / rcond(OS operator)

    /// phi^(k), k = 0..4, from the clamped representation.
    GridFunction derivative(int order) const;
};

/// The clamped Orr–Sommerfeld operator
///   phi'''' - 2 xi^2 phi'' + xi^4 phi - i xi [F (phi'' - xi^2 phi) - 6 A phi]
/// restricted to interior collocation nodes, factorised once.
class OsModeOperator {
public:
    /// `singular_threshold` bounds rcond(OS)/rcond(biharmonic) from below;
    /// construction throws NearSingularSystem beneath it.
    OsModeOperator(const Profile& p, double xi, GridPtr grid, double singular_threshold = 1e-13);

    /// The xi = 0 reduction phi'''' = h (profile-independent).
    static OsModeOperator zero_mode(GridPtr grid);

    ModeSolution solve(const GridFunction& h) const;
    ModeSolution solve(const ComplexVector& h_nodal) const;

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    double xi() const noexcept { return xi_; }
    double relative_condition() const noexcept { return relative_condition_; }
    const GridPtr& grid() const noexcept { return grid_; }

private:
    OsModeOperator(double xi, GridPtr grid, ComplexMatrix m);
    void factorise(double singular_threshold);

    double xi_;
    GridPtr grid_;
    ComplexMatrix matrix_;
    Eigen::PartialPivLU<ComplexMatrix> lu_;
    double relative_condition_ = 1.0;
};

/// Interior (N-1)x(N-1) matrix of the clamped OS operator for profile p.
ComplexMatrix os_operator_matrix(const Profile& p, double xi, const SpectralGrid& grid);

/// Interior matrix of the clamped operator (D^2 - xi^2)^2.
ComplexMatrix biharmonic_matrix(double xi, const SpectralGrid& grid);

/// Solves the forced OS problem at xi != 0.  Throws DomainError for xi == 0.
ModeSolution solve_os_mode(const Profile& p, double xi, const GridFunction& h);

/// Solves phi'''' = h with clamped conditions (the xi = 0 mode).
ModeSolution solve_os_zero_mode(const GridFunction& h);

/// Right-hand side i xi g - f' of the mode equation generated by a force with
/// x-Fourier coefficients (f, g) at wavenumber xi.
GridFunction os_forcing_rhs(double xi, const GridFunction& f_mode, const GridFunction& g_mode);

struct AprioriRatios {
    double r_hminus1 = 0.0; ///< lhs_energy / ||h||_{H^-1}^2
    double r_l2 = 0.0;      ///< lhs_energy / (xi^-2 ||h||_{L2}^2)
};

AprioriRatios apriori_ratio(const ModeSolution& sol, const GridFunction& h);

/// Quantities of the substitution phi = F sigma.
struct SigmaDiagnostics {
    GridFunction sigma;
    bool boundary_ok = false;   ///< sigma(+-1) = 0
    double a00_value = 0.0;     ///< F'(1)|sigma'(1)|^2 - F'(-1)|sigma'(-1)|^2
    double poincare_ratio = 0.0; ///< int|sigma'|^2 / int|sigma|^2
    double energy_lhs = 0.0;    ///< -12A int|s'|^2 - 6A xi^2 int|s|^2 + int F(|s''|^2 + 2xi^2|s'|^2 + xi^4|s|^2)
    double control_rhs = 0.0;   ///< int |s'|^2 + xi^2|s|^2 + |phi''|^2 + 2xi^2|phi'|^2 + xi^4|phi|^2
    double re_h_sigma = 0.0;    ///< Re int h conj(sigma)   (0 when h not given)
    double h_minus1_bound = 0.0; ///< ||h||_{H^-1} ||sigma'||_{L2} (0 when h not given)
};

/// sigma = phi/F with its first two derivatives at every node, from the
/// clamped interior values of phi.  Quotient rule inside; one-sided limits at
/// walls where F = 0.
struct SigmaDerivatives {
    ComplexVector s, s1, s2;
};
SigmaDerivatives sigma_from_clamped(const SpectralGrid& g, const Profile& p, const ComplexVector& interior);

/// Requires the no-reversal condition; throws InadmissibleProfile otherwise.
SigmaDiagnostics sigma_diagnostics(const ModeSolution& sol, const Profile& p,
                                   const std::optional<GridFunction>& h = std::nullopt);

/// int |s'|^2 / int |s|^2 for an arbitrary grid function.
double poincare_ratio(const GridFunction& sigma);

} // namespace cpflow
