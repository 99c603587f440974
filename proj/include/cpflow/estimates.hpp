#pragma once

#include "cpflow/os_mode.hpp"
#include "cpflow/profiles.hpp"

#include <random>
#include <vector>

namespace cpflow {

/// Random smooth complex data sum_k c_k T_k(y) / (1 + k), c_k standard normal.
GridFunction random_smooth_function(GridPtr g, std::mt19937_64& rng, int degree = 8);

struct EstimateSample {
    double xi = 0.0;
    double r_hminus1 = 0.0;
    double r_l2 = 0.0;
    double residual = 0.0;       ///< collocation residual relative to ||h||_{L2}
    double energy_gap = 0.0;     ///< energy_lhs - Re int h conj(sigma), relative to the term sizes
    double poincare_ratio = 0.0;
    double a00_value = 0.0;
    double control_ratio = 0.0;  ///< control_rhs / energy_lhs
};

/// Per-wavenumber a priori ratios over log-spaced xi and random smooth h.
struct EstimateSweep {
    std::vector<EstimateSample> samples;
    std::vector<double> xi;
    std::vector<double> per_xi;   ///< max over h of min(r_hminus1, r_l2)
    double bound = 0.0;           ///< max of per_xi
    double median = 0.0;          ///< median of per_xi
    double spread = 0.0;          ///< bound / median
    std::vector<double> per_xi_max; ///< max over h of max(r_hminus1, r_l2)
    double spread_max = 0.0;      ///< max / median of per_xi_max
    double max_residual = 0.0;
    double max_control_ratio = 0.0;
    bool key_apriori_holds = false; ///< energy_lhs <= Re int h conj(sigma) + 1e-8 scale everywhere
    bool poincare_holds = false;    ///< poincare_ratio >= pi^2/4 - 1e-8 everywhere
    bool a00_nonpositive = false;
    bool boundary_ok = false;
    bool uniform_in_xi = false;     ///< spread <= 10
    /// key_apriori, poincare, a00, boundary and residual <= 1e-8; the
    /// uniformity witness is reported on its own
    bool all_green = false;
};

/// Requires an admissible profile.  Wavenumbers are solved in parallel; the
/// random data depend only on `seed`.
EstimateSweep apriori_sweep(const Profile& p, int N = 64, int n_xi = 40, double xi_min = 0.05, double xi_max = 50.0,
                            int n_h = 5, unsigned long seed = 3);

} // namespace cpflow
