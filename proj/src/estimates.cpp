#include "cpflow/estimates.hpp"

#include "cpflow/error.hpp"
#include "cpflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cpflow {

GridFunction random_smooth_function(GridPtr g, std::mt19937_64& rng, int degree) {
    std::normal_distribution<double> n;
    std::vector<cplx> c(static_cast<std::size_t>(degree));
    for (auto& v : c) v = {n(rng), n(rng)};
    return GridFunction::sample(std::move(g), [&](double y) {
        const double t = std::acos(std::clamp(y, -1.0, 1.0));
        cplx s = 0.0;
        for (int k = 0; k < degree; ++k) s += c[k] * std::cos(k * t) / (1.0 + k);
        return s;
    });
}

EstimateSweep apriori_sweep(const Profile& p, int N, int n_xi, double xi_min, double xi_max, int n_h,
                            unsigned long seed) {
    if (N < 8 || n_xi < 1 || n_h < 1 || !(xi_min > 0.0) || !(xi_max >= xi_min))
        throw DomainError("apriori_sweep: bad sweep parameters");
    require_admissible(p, "apriori_sweep");
    const auto g = SpectralGrid::make(N);

    // data first, in a fixed order, so the result is independent of threading
    std::mt19937_64 rng(seed);
    std::vector<GridFunction> hs;
    for (int j = 0; j < n_h; ++j) hs.push_back(random_smooth_function(g, rng));

    EstimateSweep sw;
    sw.xi.resize(static_cast<std::size_t>(n_xi));
    for (int i = 0; i < n_xi; ++i)
        sw.xi[i] = n_xi == 1 ? xi_min : xi_min * std::pow(xi_max / xi_min, static_cast<double>(i) / (n_xi - 1));
    sw.samples.resize(static_cast<std::size_t>(n_xi * n_h));
    std::vector<char> key_ok(sw.samples.size()), bnd_ok(sw.samples.size());

    parallel_for(static_cast<std::size_t>(n_xi), [&](std::size_t i) {
        const OsModeOperator op(p, sw.xi[i], g);
        for (int j = 0; j < n_h; ++j) {
            const GridFunction& h = hs[j];
            const ModeSolution sol = op.solve(h);
            const AprioriRatios r = apriori_ratio(sol, h);
            const SigmaDiagnostics d = sigma_diagnostics(sol, p, h);
            const std::size_t s = i * n_h + j;
            EstimateSample& e = sw.samples[s];
            e.xi = sw.xi[i];
            e.r_hminus1 = r.r_hminus1;
            e.r_l2 = r.r_l2;
            e.residual = sol.residual_norm / l2_norm(h);
            const double scale = std::abs(d.energy_lhs) + std::abs(d.re_h_sigma) + std::abs(d.a00_value);
            e.energy_gap = (d.energy_lhs - d.re_h_sigma) / scale;
            e.poincare_ratio = d.poincare_ratio;
            e.a00_value = d.a00_value;
            e.control_ratio = d.control_rhs / d.energy_lhs;
            key_ok[s] = d.energy_lhs <= d.re_h_sigma + 1e-8 * scale;
            bnd_ok[s] = d.boundary_ok;
        }
    });

    sw.per_xi.assign(sw.xi.size(), 0.0);
    sw.per_xi_max.assign(sw.xi.size(), 0.0);
    for (std::size_t s = 0; s < sw.samples.size(); ++s) {
        const EstimateSample& e = sw.samples[s];
        double& v = sw.per_xi[s / n_h];
        v = std::max(v, std::min(e.r_hminus1, e.r_l2));
        sw.per_xi_max[s / n_h] = std::max(sw.per_xi_max[s / n_h], std::max(e.r_hminus1, e.r_l2));
        sw.max_residual = std::max(sw.max_residual, e.residual);
        sw.max_control_ratio = std::max(sw.max_control_ratio, e.control_ratio);
    }
    const auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size();
        return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
    };
    sw.median = median_of(sw.per_xi);
    sw.bound = *std::max_element(sw.per_xi.begin(), sw.per_xi.end());
    sw.spread = sw.bound / sw.median;
    sw.spread_max = *std::max_element(sw.per_xi_max.begin(), sw.per_xi_max.end()) / median_of(sw.per_xi_max);
    sw.uniform_in_xi = sw.spread <= 10.0;

    const double pi2_4 = std::numbers::pi * std::numbers::pi / 4.0;
    sw.key_apriori_holds = std::all_of(key_ok.begin(), key_ok.end(), [](char c) { return c != 0; });
    sw.boundary_ok = std::all_of(bnd_ok.begin(), bnd_ok.end(), [](char c) { return c != 0; });
    sw.poincare_holds = std::all_of(sw.samples.begin(), sw.samples.end(),
                                    [&](const EstimateSample& e) { return e.poincare_ratio >= pi2_4 - 1e-8; });
    sw.a00_nonpositive = std::all_of(sw.samples.begin(), sw.samples.end(),
                                     [](const EstimateSample& e) { return e.a00_value <= 1e-12; });
    sw.all_green = sw.key_apriori_holds && sw.boundary_ok && sw.poincare_holds && sw.a00_nonpositive &&
                   sw.max_residual <= 1e-8;
    return sw;
}

} // namespace cpflow
