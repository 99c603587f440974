#pragma once

#include "cpflow/os_mode.hpp"
#include "cpflow/profiles.hpp"
#include "cpflow/spectral.hpp"

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <vector>

namespace cpflow {

/// Real samples on the tensor grid: row i is x_i, column j is y_j.
using Field2D = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-mode y-profiles, index k + K for k = -K..K.
using ModeSet = std::vector<ComplexVector>;

/// Periodic cell [0, 2 pi / xi0) x [-1, 1] with Fourier modes k = -K..K in x
/// and Chebyshev collocation in y.  The x grid has 3K + 1 points, so products
/// of two band-limited fields are dealiased exactly on |k| <= K.
///
/// Fourier convention: u(x, y) = sum_k u_k(y) e^{i k xi0 x}, and the analysis
/// u_k = (1/nx) sum_i u(x_i, y) e^{-i k xi0 x_i}.
class ChannelDiscretization {
public:
    ChannelDiscretization(double xi0, int K, GridPtr grid);
    ChannelDiscretization(double xi0, int K, int N);

    double xi0() const noexcept { return xi0_; }
    int K() const noexcept { return K_; }
    int modes() const noexcept { return 2 * K_ + 1; }
    int nx() const noexcept { return 3 * K_ + 1; }
    int N() const noexcept { return grid_->N(); }
    int ny() const noexcept { return grid_->size(); }
    double period() const noexcept;
    double x(int i) const noexcept { return period() * i / nx(); }
    double wavenumber(int k) const noexcept { return k * xi0_; }
    const GridPtr& grid() const noexcept { return grid_; }

    /// Real field from modes (negative k ignored; reality is assumed).
    Field2D synthesize(const ModeSet& modes) const;
    /// Modes -K..K of a real field sampled on the x grid.
    ModeSet analyse(const Field2D& f) const;

    /// Zero modes of nodal length.
    ModeSet zero_modes() const;

    /// integral over the cell of |u|^2 by Parseval and Clenshaw–Curtis.
    double l2_norm_squared(const ModeSet& modes) const;

    bool operator==(const ChannelDiscretization& o) const noexcept {
        return xi0_ == o.xi0_ && K_ == o.K_ && grid_->N() == o.grid_->N();
    }

private:
    double xi0_;
    int K_;
    GridPtr grid_;
};

/// Body force (f, g) in mode form.
struct ForceModes {
    ModeSet f, g;

    static ForceModes zero(const ChannelDiscretization& d);

    /// Samples analytic components on a fine x grid and keeps |k| <= K.
    /// Throws ResolutionError if the discarded tail carries more than
    /// `tail_tolerance` of the total energy.
    static ForceModes from_functions(const ChannelDiscretization& d, const std::function<double(double, double)>& fx,
                                     const std::function<double(double, double)>& fy, double tail_tolerance = 1e-10);

    /// Analyses fields on the discretization's own x grid (same tail check).
    static ForceModes from_grid(const ChannelDiscretization& d, const Field2D& fx, const Field2D& fy,
                                double tail_tolerance = 1e-10);

    double l2_norm(const ChannelDiscretization& d) const;
    ForceModes& operator+=(const ForceModes& o);
    ForceModes& operator*=(double s);
};

/// Solution of the linearized problem (or any clamped stream-function state).
struct ChannelField {
    std::shared_ptr<const ChannelDiscretization> disc;
    ModeSet psi;  ///< clamped interior parameters of psi_k, length N-1 each
    Field2D v, w; ///< velocity v = psi_y, w = -psi_x
    ModeSet qx_hat, qy_hat; ///< pressure-gradient modes (empty until recovered)
    Field2D qx, qy;
    double beta = 0.0; ///< mean pressure gradient (k = 0 of qx, constant in y)
    double curl_residual = 0.0;

    /// psi_k^(order) at all nodes.
    ComplexVector psi_derivative(int k, int order) const;
    ModeSet psi_modes(int order = 0) const;
    ModeSet v_modes(int y_order = 0) const; ///< d^j/dy^j of v_k = psi_k'
    ModeSet w_modes(int y_order = 0) const; ///< d^j/dy^j of w_k = -i k xi0 psi_k

    /// Stream function on the tensor grid.
    Field2D psi_field() const;

    /// sum over components of sum_{|alpha| <= 2} ||D^alpha||^2 on the cell.
    double velocity_h2() const;
    double velocity_norm(int m) const;
    double pressure_gradient_l2() const;
};

/// Builds the kinematic field (v, w) for given stream-function modes.
/// Negative modes are overwritten with the conjugates of positive ones.
ChannelField field_from_psi(std::shared_ptr<const ChannelDiscretization> disc, ModeSet psi);

/// Mode-wise solver of the linearized problem
///   -Lap v + (u*.grad) v + (v.grad) u* + grad q = (f, g),  div v = 0,
/// with no-slip walls, periodic x and zero perturbation flux.  Mode operators
/// are factorised once and reused, so repeated solves are cheap.
class LinearChannelSolver {
public:
    LinearChannelSolver(const Profile& p, std::shared_ptr<const ChannelDiscretization> disc);

    ChannelField solve(const ForceModes& force) const;

    const Profile& profile() const noexcept { return profile_; }
    const std::shared_ptr<const ChannelDiscretization>& disc() const noexcept { return disc_; }
    /// Largest relative condition number over the mode operators.
    double worst_relative_condition() const;
    /// Factorised operator of mode k, 0 <= k <= K.
    const OsModeOperator& mode_operator(int k) const { return ops_.at(static_cast<std::size_t>(k)); }

private:
    Profile profile_;
    std::shared_ptr<const ChannelDiscretization> disc_;
    std::vector<OsModeOperator> ops_; ///< k = 0..K
};

/// One-shot solve; requires an admissible profile.
ChannelField solve_linearized(const Profile& p, std::shared_ptr<const ChannelDiscretization> disc,
                              const ForceModes& force);

struct PressureReport {
    ModeSet qx_hat, qy_hat;
    Field2D qx, qy;
    double beta = 0.0;
    double curl_residual = 0.0; ///< ||d_y qx - d_x qy|| / (||f|| + ||Lap v|| + ||(u*.grad)v + (v.grad)u*||), interior nodes
};

/// grad q := f + Lap v - (v.grad) u* - (u*.grad) v.
PressureReport recover_pressure_gradient(const Profile& p, const ChannelField& field, const ForceModes& force);

/// Consistency checks of a synthesized field.
struct KinematicReport {
    double divergence_max = 0.0; ///< max |v_x + w_y| on the grid
    double wall_max = 0.0;       ///< max |v|, |w| on y = +-1
    double flux_max = 0.0;       ///< max over x_i of |int v(x_i, y) dy|
    double stream_max = 0.0;     ///< max |v - psi_y|, |w + psi_x| (physical vs modal)
    double reality = 0.0;        ///< max |psi_{-k} - conj psi_k|
};
KinematicReport kinematic_report(const ChannelField& field);

// ---------------------------------------------------------------- diagnostics

/// A quantity with y-derivatives of order 0..2 available per mode.
struct YDerivatives {
    ModeSet d0, d1, d2;
};

/// Builds y-derivatives of nodal modes with the collocation matrices.
YDerivatives y_derivatives(const ChannelDiscretization& d, const ModeSet& modes);

/// ||u||_{H^m(cell)} summed over components, by Parseval; m in {0,1,2}.
double cell_norm(const ChannelDiscretization& d, const std::vector<YDerivatives>& comps, int m);

/// sup over a of ||u||_{H^m((a, a+1) x (-1,1))} summed over components, with
/// offsets a on the x grid and windows wrapping periodically.
double x_norm(const ChannelDiscretization& d, const std::vector<YDerivatives>& comps, int m);
/// Same quantity for the velocity of a field.
double x_norm(const ChannelField& field, int m);
/// ||u||_{H^m((a, a+1) x (-1,1))} for one offset a.
double x_window_norm(const ChannelDiscretization& d, const std::vector<YDerivatives>& comps, int m, double a);
std::vector<YDerivatives> velocity_components(const ChannelField& field);

/// Window integral over (a, b) x (-1, 1) of sum_c |u_c|^2 for modal components
/// (no derivatives), using the exact Fourier window weights.
double window_integral(const ChannelDiscretization& d, const std::vector<ModeSet>& comps, double a, double b);

struct EnergyReport {
    std::map<double, double> gamma_L;   ///< Gamma(L)
    std::map<double, double> control_L; ///< int_{Q_L} s_y^2 + s_x^2 + psi_xx^2 + 2 psi_xy^2 + psi_yy^2
    bool gamma_monotone = true;
    double max_control_ratio = 0.0; ///< max over L of control / Gamma
    double x_norms[3] = {0, 0, 0};
    double h1_norm = 0.0;
    double h2_norm = 0.0;
};

/// Gamma(L) = -6A int_{Q_L} s_x^2 - 12A int_{Q_L} s_y^2 + int_{Q_L} F |Hess s|^2
/// with psi = F s and Q_L = (-L, L) x (-1, 1) mapped into the cell; widths
/// saturate at the period.
EnergyReport gamma_energy(const Profile& p, const ChannelField& field, const std::vector<double>& L_list);

enum class SymmetryClass { X1, X2, Y1, Y2 };
const char* symmetry_name(SymmetryClass c) noexcept;

/// Stream-function parity of each class:
///   X1: psi x-even (v x-even, w x-odd)   X2: psi x-odd
///   Y1: psi y-odd  (v y-even, w y-odd)   Y2: psi y-even
ModeSet project_psi(const ChannelDiscretization& d, const ModeSet& psi, SymmetryClass c);
ChannelField symmetry_project(const ChannelField& field, SymmetryClass c);
/// Relative size of the component of psi outside class c.
double symmetry_defect(const ChannelDiscretization& d, const ModeSet& psi, SymmetryClass c);

struct SymmetryIntegrals {
    double I1 = 0.0; ///< int F psi_yy psi_x
    double I2 = 0.0; ///< int (F psi_xx - 6A psi) psi_x
    double scale = 0.0; ///< Cauchy–Schwarz bound of the two integrands
};

/// Raw integrals over one period; no preconditions.
SymmetryIntegrals symmetry_integrals(const Profile& p, const ChannelDiscretization& d, const ModeSet& psi);

/// Requires B = 0 and psi in X1 or X2 (to `class_tolerance`); throws
/// PreconditionError otherwise.
SymmetryIntegrals check_symmetry_cancellation(const Profile& p, const ChannelDiscretization& d, const ModeSet& psi,
                                              double class_tolerance = 1e-12);

/// Random smooth clamped stream function: psi_k = (1-y^2)^2 sum_n c_kn T_n(y)
/// with coefficients decaying like ((1+|k|)(1+n))^-2 and unit-normalised H^2
/// velocity norm times `amplitude`.
ModeSet random_stream_function(const ChannelDiscretization& d, std::mt19937_64& rng, double amplitude = 1.0,
                               int degree = 8);

/// Random smooth force with unit L2 norm times `amplitude`.
ForceModes random_force(const ChannelDiscretization& d, std::mt19937_64& rng, double amplitude = 1.0,
                        int degree = 8);

} // namespace cpflow
