#pragma once

#include "cpflow/channel.hpp"

#include <optional>
#include <random>
#include <vector>

namespace cpflow {

/// Settings of the fixed-point iteration w -> M(w), where M(w) solves the
/// linearized problem with force f - (w.grad) w.
struct PicardConfig {
    double delta = 1.0;   ///< radius of the H^2 ball the iterates must stay in
    double tol = 1e-8;    ///< stopping tolerance on the H^2 increment
    int max_iter = 100;
    std::optional<SymmetryClass> symmetry_class; ///< project every iterate onto this class

    /// Throws ConfigError unless 0 < tol < delta and max_iter > 0.
    void validate() const;
};

struct PicardStep {
    double norm = 0.0;      ///< ||v_{n+1}||_{H^2}, the iterate this step produced
    double increment = 0.0; ///< ||v_{n+1} - v_n||_{H^2}
    double residual = -1.0; ///< independent relative residual, when evaluated
    double leak = 0.0;      ///< relative part of M(v_n) outside the symmetry class, before projection
};

struct PicardTrace {
    std::vector<PicardStep> iterates;
    double contraction_factor = 0.0; ///< max ratio of successive increments
    bool converged = false;
    double final_residual = 0.0;
    double max_leak = 0.0;
};

struct PicardResult {
    ChannelField field; ///< carries the pressure gradient of the nonlinear problem
    PicardTrace trace;
};

/// Pseudo-spectral (w.grad) w for a clamped stream function, returned as
/// force modes truncated to |k| <= K.  The x grid of 3K+1 points dealiases
/// the quadratic product exactly on the retained band.
ForceModes advection_modes(const ChannelDiscretization& d, const ModeSet& psi);

/// -Lap v + (u*.grad) v + (v.grad) u* + (v.grad) v for the stream function
/// psi with zero pressure: the force that makes psi an exact solution.
ForceModes nonlinear_operator(const Profile& p, const ChannelDiscretization& d, const ModeSet& psi);

/// H^2 norm over the cell of the velocity of a clamped stream function.
double velocity_h2(const ChannelDiscretization& d, const ModeSet& psi);

struct NonlinearResidual {
    double absolute = 0.0;
    double relative = 0.0; ///< absolute / sum of the norms of the individual terms
};

/// Residual of the vorticity form
///   Lap^2 psi - F (Lap psi)_x + 6A psi_x + psi_x (Lap psi)_y - psi_y (Lap psi)_x = g_x - f_y
/// on interior nodes and |k| <= K.  Built from the ordinary differentiation
/// matrices and physical-space products, so it shares no code path with the
/// iteration's linear solves or advection kernel.
NonlinearResidual nonlinear_residual(const Profile& p, const ChannelDiscretization& d, const ModeSet& psi,
                                     const ForceModes& f);

/// Picard iteration from w0 (default: 0, so the first iterate is M(0)).
/// Throws BallEscape when an iterate leaves the delta-ball and NonContraction
/// when the increment ratio is >= 1 three steps running.  Stops once the
/// increment is below tol and the independent residual below 10 tol.
PicardResult picard_solve(const LinearChannelSolver& solver, const ForceModes& f, const PicardConfig& cfg,
                          const std::optional<ModeSet>& w0 = std::nullopt);
PicardResult picard_solve(const Profile& p, std::shared_ptr<const ChannelDiscretization> disc, const ForceModes& f,
                          const PicardConfig& cfg, const std::optional<ModeSet>& w0 = std::nullopt);

/// Force with the parity of class c: (f, g) follows (v, w) of the class, so
/// that a linear solve maps it into the class.
ForceModes project_force(const ChannelDiscretization& d, const ForceModes& f, SymmetryClass c);

/// One application of M.
ModeSet picard_map(const LinearChannelSolver& solver, const ForceModes& f, const ModeSet& w);

struct KappaEstimate {
    double bound = 0.0;   ///< operator norm of f -> (v, grad q) on the discretization
    double velocity = 0.0; ///< operator norm of f -> v in H^2 alone
    double sampled = 0.0; ///< max of (||v||_{H^2} + ||grad q||) / ||f|| over random smooth f
};

/// kappa_0 of the linearized solve.  `bound` is the largest per-mode singular
/// value of the velocity map plus that of the pressure-gradient map, which
/// dominates the ratio for every discrete force.
KappaEstimate measure_kappa0(const LinearChannelSolver& solver, int samples = 20, unsigned long seed = 7);

struct C1Estimate {
    double value = 0.0;   ///< best ratio found (alternating maximization, never below `sampled`)
    double sampled = 0.0; ///< max ratio over the random smooth pairs alone
    int sweeps = 0;       ///< alternating sweeps performed
};

/// c_1 in ||(u.grad) w||_{L^2} <= c_1 ||u||_{H^2} ||w||_{H^2}.  Random smooth
/// pairs seed an alternating maximization: for fixed w the map u -> (u.grad) w
/// is linear, so its norm is a largest singular value in the H^2 metric, and
/// likewise for fixed u.  The result is a local maximum of the bilinear ratio.
C1Estimate measure_c1(const ChannelDiscretization& d, int pairs = 50, unsigned long seed = 11, int sweeps = 4);

/// Radius delta = (4 kappa_0 c_1)^-1.
double contraction_radius(double kappa0, double c1);

/// max ||M(w1) - M(w2)|| / ||w1 - w2|| over distinct random pairs with
/// ||w_i||_{H^2} <= delta.  The same seed gives the same directions for
/// every delta.
double measure_contraction(const LinearChannelSolver& solver, const ForceModes& f, double delta, int pairs = 20,
                           unsigned long seed = 13);

struct ProbeStart {
    double initial_norm = 0.0;
    double final_norm = 0.0;
    double contraction_factor = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string error; ///< solver error message, if the start failed
};

struct UniquenessReport {
    bool unique = false; ///< every start converged to v = 0 within tol
    double delta = 0.0;
    std::vector<ProbeStart> starts;
};

/// Runs picard_solve with f = 0 from `n_starts` random guesses in the
/// delta-ball (radii spread over [0.25, 0.95] delta).  Starts are independent
/// and run in parallel; start s uses seed + s.
UniquenessReport uniqueness_probe(const LinearChannelSolver& solver, int n_starts, double delta, double tol = 1e-8,
                                  std::optional<SymmetryClass> symmetry = std::nullopt, unsigned long seed = 17,
                                  int max_iter = 100);

} // namespace cpflow
