#pragma once

#include "cpflow/profiles.hpp"
#include "cpflow/spectral.hpp"

#include <optional>
#include <vector>

namespace cpflow {

/// Operator of the eigenproblem
///   [D^4 - 2T^2 D^2 + T^4 + 3ATi((1-y^2)(D^2-T^2) + 2)] phi = lambda (D^2 - T^2) phi
/// on clamped functions: the interior rows of the left side, acting on the
/// interior nodal values of phi.  Equal to the mode operator of the profile
/// F = -3A(1-y^2) at xi = T.
ComplexMatrix spectrum_lhs(double A, double T, const SpectralGrid& g);

/// Interior rows of D^2 - T^2 on clamped functions.
RealMatrix spectrum_rhs(double T, const SpectralGrid& g);

/// Standard-form matrix (D^2 - T^2)^-1 L of the pencil.
ComplexMatrix spectrum_matrix(double A, double T, const SpectralGrid& g);

struct SpectrumResult {
    double A = 0.0;
    double T = 0.0;
    int N = 0;                      ///< primary resolution
    int N_check = 0;                ///< resolution used to confirm eigenvalues
    std::vector<cplx> eigenvalues;  ///< resolved, by decreasing real part
    std::vector<ComplexVector> eigenvectors; ///< interior nodal values at N, unit 2-norm
    cplx leading{0.0, 0.0};
    int n_resolved = 0;
    std::vector<cplx> raw;          ///< every eigenvalue at N, by decreasing real part
    std::vector<bool> raw_resolved; ///< agreement flag of each raw eigenvalue
};

/// Full spectrum at N, filtered by agreement (relative `match_tol`) with the
/// spectrum at N_check (default 3N/2).  Throws ResolutionError if fewer than
/// `min_resolved` eigenvalues agree, DomainError if T <= 0.
SpectrumResult os_spectrum(double A, double T, int N, std::optional<int> N_check = std::nullopt,
                           double match_tol = 1e-8, int min_resolved = 10);

/// Relative residual of the integrated identity obtained by testing the
/// eigenproblem with conj(phi):
///   int |phi''|^2 + (2T^2 + lambda)|phi'|^2 + (T^4 + lambda T^2)|phi|^2
///     = 3ATi int [(1-y^2)(|phi'|^2 + T^2|phi|^2) - 2|phi|^2] - 6ATi int y phi' conj(phi).
/// Integrals are exact for the discrete polynomial (Clenshaw–Curtis on 2N+4
/// points); the residual is divided by the sum of the absolute term values.
double verify_energy_identity(double A, double T, const SpectralGrid& g, const ComplexVector& interior, cplx lambda);

/// One eigenpair of the pencil L x = lambda B x refined from a guess: two
/// inverse-iteration steps with the fixed shift, then Rayleigh-quotient shifts
/// lambda = (Bx)^H L x / |Bx|^2.  The pencil is never reduced to standard
/// form, which keeps the rounding of B^-1 L out of the eigenvalue.
struct TrackedEigenpair {
    cplx lambda;
    ComplexVector vector;  ///< interior nodal values, unit 2-norm
    double residual = 0.0; ///< |L x - lambda B x| / (|L|_1 + |lambda| |B|_1)
    int iterations = 0;
};
TrackedEigenpair track_eigenpair(const ComplexMatrix& L, const RealMatrix& B, cplx guess,
                                 const ComplexVector* start = nullptr, int max_iter = 30);
TrackedEigenpair track_eigenpair(double A, double T, const SpectralGrid& g, cplx guess,
                                 const ComplexVector* start = nullptr, int max_iter = 30);

struct StabilitySample {
    double A = 0.0;
    double T = 0.0;
    cplx leading;
};

struct CertificateReport {
    bool stable = false; ///< max Re lambda < 0 over every sample
    std::vector<StabilitySample> samples;
};

/// Checks max Re lambda < 0 on a grid of (A, T) with |AT| <= AT_bound:
/// T on `n_T` equispaced points of [T_min, T_max] and, for each T,
/// A = -(j/n_A) AT_bound / T for j = 1..n_A.
CertificateReport small_at_certificate(double AT_bound, int n_A = 5, int n_T = 5, double T_min = 0.2,
                                       double T_max = 2.0, int N = 48);

/// Explicit sample list variant.
CertificateReport small_at_certificate(const std::vector<std::pair<double, double>>& AT_samples, int N = 48);

/// sigma_min / sigma_max of Bih^-1 L, where L is the homogeneous mode
/// operator of profile p at wavenumber xi and Bih the clamped biharmonic at
/// the same xi.  Bounded away from zero exactly when L is injective with a
/// well-conditioned inverse; zero at a neutral profile.
double kernel_witness(const Profile& p, double xi, const SpectralGrid& g);

struct NeutralConfig {
    double reA_min = 5000.0; ///< bracket in -3A
    double reA_max = 6500.0;
    double T_min = 0.8;
    double T_max = 1.3;
    double tol = 1e-8;       ///< |Re lambda| at which bisection stops
    double T_tol = 1e-7;     ///< golden-section bracket width in T
    int N = 200;             ///< first discretization
    int N_check = 300;       ///< second discretization
    int max_bisect = 80;
    double agreement = 1e-3; ///< relative agreement of -3A_1 and T_0 between discretizations
};

struct NeutralIterate {
    int N = 0;
    double A = 0.0;
    double T = 0.0; ///< maximizing wavenumber at this A
    cplx lambda;    ///< leading eigenvalue at (A, T)
    double witness = -1.0;
};

struct NeutralPoint {
    double A1 = 0.0;
    double T0 = 0.0;
    cplx lambda1;
    double C_counter = 0.0; ///< -3A_1 + Im lambda_1 / T_0
    bool reversal_confirmed = false;
    int N = 0;
    /// Same point at the first discretization and the agreement check.
    double A1_coarse = 0.0;
    double T0_coarse = 0.0;
    cplx lambda1_coarse;
    bool discretizations_agree = false;
    double witness = -1.0; ///< kernel_witness at the returned point
    std::vector<NeutralIterate> trace;
};

/// Outer bisection in -3A, inner golden-section maximization of Re lambda over
/// T, run at N and then at N_check.  Throws NoBracket when the leading growth
/// rate does not change sign across the bracket, NeutralNotConverged (with
/// the best iterate) when the tolerance is not reached, SolverError when the
/// growth rate peaks at an end of the T range.
NeutralPoint neutral_search(const NeutralConfig& cfg);

/// Profile 3A_1 y^2 + C_counter of a neutral point.
Profile neutral_profile(const NeutralPoint& np);

} // namespace cpflow
