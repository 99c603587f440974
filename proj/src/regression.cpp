#include "cpflow/regression.hpp"

#include "cpflow/error.hpp"
#include "cpflow/estimates.hpp"
#include "cpflow/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cpflow {

io::Json RegressionSettings::to_json() const {
    return io::Json{{"xi0", xi0},
                    {"K", K},
                    {"N", N},
                    {"estimate_N", estimate_N},
                    {"n_xi", n_xi},
                    {"n_h", n_h},
                    {"include_neutral", include_neutral},
                    {"neutral",
                     {{"reA_min", neutral.reA_min},
                      {"reA_max", neutral.reA_max},
                      {"T_min", neutral.T_min},
                      {"T_max", neutral.T_max},
                      {"tol", neutral.tol},
                      {"T_tol", neutral.T_tol},
                      {"N", neutral.N},
                      {"N_check", neutral.N_check}}},
                    {"seed", seed}};
}

std::vector<MeasuredConstant> measure_constants(const RegressionSettings& s) {
    const Profile p(-1.0, 0.0, 3.0);
    std::vector<MeasuredConstant> out;

    const auto disc = std::make_shared<const ChannelDiscretization>(s.xi0, s.K, s.N);
    const LinearChannelSolver solver(p, disc);
    const KappaEstimate kappa = measure_kappa0(solver, 20, s.seed);
    const C1Estimate c1 = measure_c1(*disc, 50, s.seed + 4);
    const double delta = contraction_radius(kappa.bound, c1.value);
    const double ratio = measure_contraction(solver, ForceModes::zero(*disc), delta, 20, s.seed + 6);
    out.push_back({"kappa0_bound", kappa.bound, 1e-8, s.N, s.K});
    out.push_back({"kappa0_velocity", kappa.velocity, 1e-8, s.N, s.K});
    out.push_back({"c1", c1.value, 1e-6, s.N, s.K});
    out.push_back({"delta", delta, 1e-6, s.N, s.K});
    out.push_back({"contraction_ratio_at_delta", ratio, 1e-6, s.N, s.K});

    const EstimateSweep sw = apriori_sweep(p, s.estimate_N, s.n_xi, 0.05, 50.0, s.n_h, s.seed);
    out.push_back({"apriori_bound", sw.bound, 1e-8, s.estimate_N, 0});
    out.push_back({"apriori_spread", sw.spread, 1e-8, s.estimate_N, 0});
    out.push_back({"apriori_control_ratio", sw.max_control_ratio, 1e-8, s.estimate_N, 0});

    const auto g = SpectralGrid::make(64);
    const GridFunction h = GridFunction::sample(g, [](double y) { return cplx(std::sin(std::numbers::pi * y)); });
    const AprioriRatios r = apriori_ratio(solve_os_mode(p, 1.0, h), h);
    out.push_back({"poiseuille_xi1_r_hminus1", r.r_hminus1, 1e-6, 64, 0});
    out.push_back({"poiseuille_xi1_r_l2", r.r_l2, 1e-6, 64, 0});

    if (s.include_neutral) {
        const NeutralPoint np = neutral_search(s.neutral);
        const double reA = -3.0 * np.A1;
        out.push_back({"neutral_reA", reA, 1e-3, np.N, 0});
        out.push_back({"neutral_T0", np.T0, 1e-3, np.N, 0});
        out.push_back({"neutral_phase_speed", -np.lambda1.imag() / (np.T0 * reA), 1e-3, np.N, 0});
        out.push_back({"neutral_C_counter", np.C_counter, 1e-3, np.N, 0});
    }
    return out;
}

io::Json baseline_document(const RegressionSettings& s, const std::vector<MeasuredConstant>& m) {
    io::Json doc;
    doc["schema"] = "cpflow.baseline";
    doc["schema_version"] = io::json_schema_version;
    doc["toolkit_version"] = CPFLOW_VERSION;
    doc["settings"] = s.to_json();
    io::Json entries = io::Json::object();
    for (const auto& c : m) entries[c.name] = {{"value", c.value}, {"rtol", c.rtol}, {"N", c.N}, {"K", c.K}};
    doc["entries"] = entries;
    return doc;
}

RegressionReport compare_to_baseline(const io::Json& baseline, const std::vector<MeasuredConstant>& m) {
    if (!baseline.is_object() || baseline.value("schema", "") != "cpflow.baseline" ||
        !baseline.contains("entries") || !baseline["entries"].is_object())
        throw ConfigError("baseline: not a cpflow baseline document");
    if (baseline.value("schema_version", 0) != io::json_schema_version)
        throw ConfigError("baseline: unsupported schema_version");

    RegressionReport rep;
    rep.pass = true;
    for (const auto& [name, e] : baseline["entries"].items()) {
        const auto it = std::find_if(m.begin(), m.end(), [&](const MeasuredConstant& c) { return c.name == name; });
        if (it == m.end()) {
            rep.missing.push_back(name);
            rep.pass = false;
            continue;
        }
        RegressionCheck c;
        c.name = name;
        c.baseline = e.at("value").get<double>();
        c.rtol = e.at("rtol").get<double>();
        c.measured = it->value;
        c.rel_diff = std::abs(c.measured - c.baseline) / std::max(std::abs(c.baseline), 1e-300);
        c.pass = std::isfinite(c.measured) && c.rel_diff <= c.rtol;
        rep.pass = rep.pass && c.pass;
        rep.checks.push_back(c);
    }
    return rep;
}

io::Json report_json(const RegressionReport& r) {
    io::Json checks = io::Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"baseline", c.baseline},
                          {"measured", c.measured},
                          {"rel_diff", c.rel_diff},
                          {"rtol", c.rtol},
                          {"pass", c.pass}});
    return io::Json{{"pass", r.pass}, {"checks", checks}, {"missing", r.missing}};
}

} // namespace cpflow
