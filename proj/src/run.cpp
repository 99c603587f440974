#include "cpflow/run.hpp"

#include "cpflow/channel.hpp"
#include "cpflow/error.hpp"
#include "cpflow/estimates.hpp"
#include "cpflow/expr.hpp"
#include "cpflow/nonlinear.hpp"
#include "cpflow/parallel.hpp"
#include "cpflow/regression.hpp"
#include "cpflow/spectrum.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <set>

namespace cpflow {
namespace {

using io::Json;

const std::set<std::string> commands = {"solve-mode",      "solve-linear",     "solve-nonlinear", "spectrum",
                                        "neutral-search",  "verify-estimates", "symmetry-check",  "regression"};
const std::set<std::string> csv_commands = {"solve-mode", "spectrum", "neutral-search"};

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

Profile profile_of(const RunConfig& c) { return Profile(c.A, c.B, c.C); }

std::optional<SymmetryClass> symmetry_of(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "X1") return SymmetryClass::X1;
    if (s == "X2") return SymmetryClass::X2;
    if (s == "Y1") return SymmetryClass::Y1;
    if (s == "Y2") return SymmetryClass::Y2;
    throw ConfigError("unknown symmetry class '" + s + "'");
}

Json vector_json(const std::vector<double>& v) { return Json(v); }

Json admissibility_json(const Profile& p) {
    const AdmissibilityReport r = check_admissibility(p);
    return Json{{"satisfies_abc", r.satisfies_abc},
                {"min_F_interior", r.min_F_interior},
                {"reversal", r.reversal},
                {"flux", r.flux}};
}

std::shared_ptr<const ChannelDiscretization> channel_of(const RunConfig& c) {
    return std::make_shared<const ChannelDiscretization>(c.xi0, *c.K, *c.N);
}

ForceModes force_of(const RunConfig& c, const ChannelDiscretization& d) {
    const Expression fx = Expression::parse(c.f), fy = Expression::parse(c.g);
    return ForceModes::from_functions(d, fx, fy);
}

// ---------------------------------------------------------------- commands

struct CommandResult {
    Json result;
    io::CsvTable table;
    int exit_code = exit_ok;
};

CommandResult solve_mode_cmd(const RunConfig& c) {
    const Profile p = profile_of(c);
    const auto g = SpectralGrid::make(*c.N);
    const Expression hx = Expression::parse(c.h);
    const GridFunction h = GridFunction::sample(g, [&](double y) { return cplx(hx(0.0, y)); });
    const ModeSolution sol = c.xi == 0.0 ? solve_os_zero_mode(h) : solve_os_mode(p, c.xi, h);
    const double hn = l2_norm(h);

    CommandResult r;
    Json& j = r.result;
    j["resolution"] = {{"N", *c.N}};
    j["xi"] = c.xi;
    j["residual_norm"] = sol.residual_norm;
    j["relative_residual"] = hn > 0.0 ? sol.residual_norm / hn : sol.residual_norm;
    j["lhs_energy"] = sol.lhs_energy;
    j["relative_condition"] = sol.relative_condition;
    const AprioriRatios ar = apriori_ratio(sol, h);
    j["apriori"] = {{"r_hminus1", ar.r_hminus1}, {"r_l2", ar.r_l2}};
    j["admissibility"] = admissibility_json(p);
    if (check_admissibility(p).satisfies_abc) {
        const SigmaDiagnostics d = sigma_diagnostics(sol, p, h);
        j["sigma"] = {{"boundary_ok", d.boundary_ok},         {"a00_value", d.a00_value},
                      {"poincare_ratio", d.poincare_ratio},   {"energy_lhs", d.energy_lhs},
                      {"control_rhs", d.control_rhs},         {"re_h_sigma", d.re_h_sigma},
                      {"h_minus1_bound", d.h_minus1_bound}};
    } else {
        j["sigma"] = nullptr;
    }
    std::vector<double> y, re, im;
    r.table.columns = {"y", "re_phi", "im_phi"};
    for (int i = 0; i < g->size(); ++i) {
        y.push_back(g->node(i));
        re.push_back(sol.phi.values[i].real());
        im.push_back(sol.phi.values[i].imag());
        r.table.rows.push_back({io::format_number(y.back()), io::format_number(re.back()), io::format_number(im.back())});
    }
    j["phi"] = {{"y", y}, {"re", re}, {"im", im}};
    return r;
}

Json field_summary(const ChannelField& field) {
    const KinematicReport k = kinematic_report(field);
    return Json{{"velocity_h2", field.velocity_h2()},
                {"pressure_gradient_l2", field.pressure_gradient_l2()},
                {"beta", field.beta},
                {"curl_residual", field.curl_residual},
                {"x_norms", {x_norm(field, 0), x_norm(field, 1), x_norm(field, 2)}},
                {"kinematics",
                 {{"divergence_max", k.divergence_max},
                  {"wall_max", k.wall_max},
                  {"flux_max", k.flux_max},
                  {"stream_max", k.stream_max},
                  {"reality", k.reality}}}};
}

CommandResult solve_linear_cmd(const RunConfig& c) {
    const auto d = channel_of(c);
    const ForceModes f = force_of(c, *d);
    const ChannelField field = solve_linearized(profile_of(c), d, f);
    CommandResult r;
    r.result["resolution"] = {{"N", *c.N}, {"K", *c.K}, {"xi0", c.xi0}};
    r.result["force_l2"] = f.l2_norm(*d);
    r.result["field"] = field_summary(field);
    return r;
}

CommandResult solve_nonlinear_cmd(const RunConfig& c) {
    const auto d = channel_of(c);
    ForceModes f = force_of(c, *d);
    PicardConfig pc;
    pc.delta = c.delta;
    pc.tol = c.tol;
    pc.max_iter = c.max_iter;
    pc.symmetry_class = symmetry_of(c.symmetry);
    const LinearChannelSolver solver(profile_of(c), d);
    const PicardResult res = picard_solve(solver, f, pc);
    Json steps = Json::array();
    for (const PicardStep& s : res.trace.iterates)
        steps.push_back({{"norm", s.norm}, {"increment", s.increment}, {"residual", s.residual}, {"leak", s.leak}});
    CommandResult r;
    r.result["resolution"] = {{"N", *c.N}, {"K", *c.K}, {"xi0", c.xi0}};
    r.result["converged"] = res.trace.converged;
    r.result["iterations"] = res.trace.iterates.size();
    r.result["contraction_factor"] = res.trace.contraction_factor;
    r.result["final_residual"] = res.trace.final_residual;
    r.result["max_leak"] = res.trace.max_leak;
    r.result["trace"] = steps;
    r.result["field"] = field_summary(res.field);

    // contraction constants and a uniqueness probe of the unforced problem
    const KappaEstimate kappa = measure_kappa0(solver);
    const C1Estimate c1 = measure_c1(*d);
    const double delta = contraction_radius(kappa.bound, c1.value);
    const UniquenessReport u = uniqueness_probe(solver, 10, delta);
    int converged = 0;
    for (const ProbeStart& s : u.starts) converged += s.converged;
    r.result["constants"] = {{"kappa0", kappa.bound}, {"c1", c1.value}, {"delta", delta}};
    r.result["uniqueness_probe"] = {{"delta", delta},
                                    {"starts", u.starts.size()},
                                    {"converged_to_zero", converged},
                                    {"unique", u.unique},
                                    {"evidence", "heuristic: random starts probe basins, not global uniqueness"}};
    return r;
}

CommandResult spectrum_cmd(const RunConfig& c) {
    const double A = c.A;
    const SpectrumResult s = os_spectrum(A, c.T, *c.N, *c.N_check);
    CommandResult r;
    Json ev = Json::array();
    r.table.columns = {"re_lambda", "im_lambda", "resolved"};
    for (std::size_t i = 0; i < s.raw.size(); ++i) {
        ev.push_back({{"re", s.raw[i].real()}, {"im", s.raw[i].imag()}, {"resolved", bool(s.raw_resolved[i])}});
        r.table.rows.push_back({io::format_number(s.raw[i].real()), io::format_number(s.raw[i].imag()),
                                s.raw_resolved[i] ? "1" : "0"});
    }
    r.result["resolution"] = {{"N", s.N}, {"N_check", s.N_check}};
    r.result["A"] = A;
    r.result["T"] = c.T;
    r.result["n_resolved"] = s.n_resolved;
    r.result["leading"] = io::complex_json(s.leading);
    r.result["eigenvalues"] = ev;
    return r;
}

NeutralConfig neutral_config_of(const RunConfig& c, int N, int N_check) {
    NeutralConfig n;
    n.reA_min = c.reA_min;
    n.reA_max = c.reA_max;
    n.T_min = c.T_min;
    n.T_max = c.T_max;
    n.T_tol = c.T_tol;
    n.tol = c.tol;
    n.N = N;
    n.N_check = N_check;
    return n;
}

CommandResult neutral_cmd(const RunConfig& c) {
    const NeutralPoint np = neutral_search(neutral_config_of(c, *c.N, *c.N_check));
    const double reA = -3.0 * np.A1;
    CommandResult r;
    Json& j = r.result;
    j["resolution"] = {{"N", np.N}, {"N_coarse", *c.N}};
    j["A1"] = np.A1;
    j["reA1"] = reA;
    j["T0"] = np.T0;
    j["lambda1"] = io::complex_json(np.lambda1);
    j["phase_speed"] = -np.lambda1.imag() / (np.T0 * reA);
    j["C_counter"] = np.C_counter;
    j["reversal_confirmed"] = np.reversal_confirmed;
    j["admissibility"] = admissibility_json(neutral_profile(np));
    j["witness"] = np.witness;
    j["coarse"] = {{"A1", np.A1_coarse}, {"T0", np.T0_coarse}, {"lambda1", io::complex_json(np.lambda1_coarse)}};
    j["discretizations_agree"] = np.discretizations_agree;
    Json trace = Json::array();
    r.table.columns = {"iterate", "N", "A", "T", "re_lambda", "im_lambda", "witness"};
    for (std::size_t i = 0; i < np.trace.size(); ++i) {
        const NeutralIterate& t = np.trace[i];
        trace.push_back({{"iterate", i},
                         {"N", t.N},
                         {"A", t.A},
                         {"T", t.T},
                         {"lambda", io::complex_json(t.lambda)},
                         {"witness", t.witness}});
        r.table.rows.push_back({std::to_string(i), std::to_string(t.N), io::format_number(t.A),
                                io::format_number(t.T), io::format_number(t.lambda.real()),
                                io::format_number(t.lambda.imag()), io::format_number(t.witness)});
    }
    j["trace"] = trace;
    return r;
}

CommandResult verify_estimates_cmd(const RunConfig& c) {
    const Profile p = profile_of(c);
    const EstimateSweep sw = apriori_sweep(p, *c.N, c.n_xi, c.xi_min, c.xi_max, c.n_h, c.seed);
    const auto g = SpectralGrid::make(*c.N);
    const double pr = poincare_ratio(
        GridFunction::sample(g, [](double y) { return cplx(std::cos(std::numbers::pi * y / 2.0)); }));
    const double pr_err = std::abs(pr - std::numbers::pi * std::numbers::pi / 4.0);

    CommandResult r;
    Json& j = r.result;
    j["resolution"] = {{"N", *c.N}};
    j["admissibility"] = admissibility_json(p);
    j["xi"] = vector_json(sw.xi);
    j["per_xi_ratio"] = vector_json(sw.per_xi);
    j["ratio_bound"] = sw.bound;
    j["ratio_median"] = sw.median;
    j["ratio_spread"] = sw.spread;
    j["per_xi_max_ratio"] = vector_json(sw.per_xi_max);
    j["max_ratio_spread"] = sw.spread_max;
    j["max_residual"] = sw.max_residual;
    j["max_control_ratio"] = sw.max_control_ratio;
    j["checks"] = {{"key_apriori", sw.key_apriori_holds},
                   {"poincare_lower_bound", sw.poincare_holds},
                   {"poincare_equality_error", pr_err},
                   {"poincare_equality", pr_err <= 1e-8},
                   {"a00_nonpositive", sw.a00_nonpositive},
                   {"sigma_boundary", sw.boundary_ok},
                   {"residual", sw.max_residual <= 1e-8},
                   {"uniform_in_xi", sw.uniform_in_xi}};
    j["all_green"] = sw.all_green && pr_err <= 1e-8;
    return r;
}

CommandResult symmetry_cmd(const RunConfig& c) {
    const Profile p = profile_of(c);
    const auto d = channel_of(c);
    std::mt19937_64 rng(c.seed);
    CommandResult r;
    Json canc;
    for (SymmetryClass cls : {SymmetryClass::X1, SymmetryClass::X2}) {
        double i1 = 0.0, i2 = 0.0;
        for (int s = 0; s < c.samples; ++s) {
            const ModeSet psi = project_psi(*d, random_stream_function(*d, rng), cls);
            const SymmetryIntegrals si = check_symmetry_cancellation(p, *d, psi);
            i1 = std::max(i1, std::abs(si.I1) / si.scale);
            i2 = std::max(i2, std::abs(si.I2) / si.scale);
        }
        canc[symmetry_name(cls)] = {{"max_I1_relative", i1}, {"max_I2_relative", i2}, {"pass", i1 <= 1e-10 && i2 <= 1e-10}};
    }
    r.result["resolution"] = {{"N", *c.N}, {"K", *c.K}, {"xi0", c.xi0}};
    r.result["cancellation"] = canc;

    const LinearChannelSolver solver(p, d);
    const ForceModes f0 = random_force(*d, rng, 0.05);
    Json picard;
    for (SymmetryClass cls : {SymmetryClass::X1, SymmetryClass::X2, SymmetryClass::Y1, SymmetryClass::Y2}) {
        PicardConfig pc;
        pc.delta = c.delta;
        pc.tol = c.tol;
        pc.max_iter = c.max_iter;
        pc.symmetry_class = cls;
        const ModeSet w0 = project_psi(*d, random_stream_function(*d, rng, 0.2), cls);
        const PicardResult res = picard_solve(solver, project_force(*d, f0, cls), pc, w0);
        picard[symmetry_name(cls)] = {{"converged", res.trace.converged},
                                      {"final_increment", res.trace.iterates.back().increment},
                                      {"final_residual", res.trace.final_residual},
                                      {"max_leak_before_projection", res.trace.max_leak},
                                      {"final_defect", symmetry_defect(*d, res.field.psi, cls)},
                                      {"invariant", res.trace.max_leak <= 1e-10}};
    }
    r.result["picard"] = picard;
    return r;
}

CommandResult regression_cmd(const RunConfig& c) {
    RegressionSettings s;
    s.K = *c.K;
    s.N = *c.N;
    s.xi0 = c.xi0;
    s.seed = c.seed;
    s.include_neutral = !c.skip_neutral;
    s.neutral = neutral_config_of(c, c.neutral_N, c.neutral_N_check);
    const auto m = measure_constants(s);

    CommandResult r;
    if (c.record) {
        io::write_file(c.baseline, baseline_document(s, m).dump(2) + "\n");
        r.result["recorded"] = c.baseline;
        r.result["entries"] = baseline_document(s, m)["entries"];
        return r;
    }
    Json base;
    try {
        base = Json::parse(io::read_file(c.baseline));
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("baseline: ") + e.what());
    }
    const RegressionReport rep = compare_to_baseline(base, m);
    r.result = report_json(rep);
    r.result["settings"] = s.to_json();
    r.exit_code = rep.pass ? exit_ok : exit_regression;
    return r;
}

} // namespace

void RunConfig::resolve() {
    require(commands.count(command) == 1, "unknown command '" + command + "'");
    if (profile == "poiseuille") {
        require(flux > 0.0 && std::isfinite(flux), "flux must be positive");
        const Profile p = poiseuille_for_flux(flux);
        A = p.A(), B = p.B(), C = p.C();
    } else {
        require(profile == "custom", "profile must be 'custom' or 'poiseuille'");
    }
    require(std::isfinite(A) && std::isfinite(B) && std::isfinite(C), "profile coefficients must be finite");
    require(command == "spectrum" || A != 0.0 || B != 0.0 || C != 0.0, "profile (A,B,C) must be non-zero");

    static const std::map<std::string, int> default_N = {
        {"solve-mode", 64},     {"solve-linear", 48},     {"solve-nonlinear", 32}, {"spectrum", 120},
        {"neutral-search", 200}, {"verify-estimates", 64}, {"symmetry-check", 24},  {"regression", 28}};
    if (!N) N = default_N.at(command);
    if (!K) K = command == "regression" ? 6 : 8;
    if (!N_check) N_check = command == "neutral-search" && *N == 200 ? 300 : 3 * *N / 2;

    require(*N >= 8 && *N <= 2000, "N must lie in [8, 2000]");
    require(*N_check >= 8 && *N_check != *N, "N_check must be at least 8 and differ from N");
    require(*K >= 1 && *K <= 512, "K must lie in [1, 512]");
    require(xi0 > 0.0 && std::isfinite(xi0), "xi0 must be positive");
    require(tol > 0.0 && max_iter > 0, "tol and max_iter must be positive");
    require(delta > 0.0, "delta must be positive");
    require(std::isfinite(xi) && xi >= 0.0, "xi must be non-negative");
    require(T > 0.0, "T must be positive");
    require(reA_min > 0.0 && reA_max > reA_min, "need 0 < reA_min < reA_max");
    require(T_min > 0.0 && T_max > T_min && T_tol > 0.0, "need 0 < T_min < T_max and T_tol > 0");
    require(n_xi > 0 && n_h > 0 && samples > 0, "sample counts must be positive");
    require(xi_min > 0.0 && xi_max >= xi_min, "need 0 < xi_min <= xi_max");
    require(neutral_N >= 16 && neutral_N_check >= 16 && neutral_N != neutral_N_check,
            "neutral resolutions must be at least 16 and differ");
    require(format == "json" || format == "csv", "format must be json or csv");
    require(format == "json" || csv_commands.count(command) == 1, "csv output is not available for " + command);
    symmetry_of(symmetry);
    require(command != "regression" || !baseline.empty(), "regression needs --baseline");
    Expression::parse(h);
    Expression::parse(f);
    Expression::parse(g);
}

Json RunConfig::to_json() const {
    return Json{{"command", command},
                {"profile", {{"name", profile}, {"A", A}, {"B", B}, {"C", C}, {"flux", flux}}},
                {"numerics",
                 {{"N", N.value_or(0)},
                  {"N_check", N_check.value_or(0)},
                  {"K", K.value_or(0)},
                  {"xi0", xi0},
                  {"tol", tol},
                  {"max_iter", max_iter}}},
                {"mode", {{"xi", xi}, {"h", h}}},
                {"channel", {{"f", f}, {"g", g}, {"delta", delta}, {"symmetry", symmetry}}},
                {"spectrum", {{"T", T}}},
                {"neutral",
                 {{"reA_min", reA_min},
                  {"reA_max", reA_max},
                  {"T_min", T_min},
                  {"T_max", T_max},
                  {"T_tol", T_tol},
                  {"regression_N", neutral_N},
                  {"regression_N_check", neutral_N_check}}},
                {"estimates", {{"n_xi", n_xi}, {"n_h", n_h}, {"xi_min", xi_min}, {"xi_max", xi_max}}},
                {"samples", samples},
                {"seed", seed},
                {"io", {{"output", output}, {"format", format}}},
                {"regression", {{"baseline", baseline}, {"record", record}, {"skip_neutral", skip_neutral}}}};
}

RunOutput execute(const RunConfig& cfg) {
    set_thread_cap(cfg.threads);
    CommandResult r;
    const std::string& cmd = cfg.command;
    if (cmd == "solve-mode") r = solve_mode_cmd(cfg);
    else if (cmd == "solve-linear") r = solve_linear_cmd(cfg);
    else if (cmd == "solve-nonlinear") r = solve_nonlinear_cmd(cfg);
    else if (cmd == "spectrum") r = spectrum_cmd(cfg);
    else if (cmd == "neutral-search") r = neutral_cmd(cfg);
    else if (cmd == "verify-estimates") r = verify_estimates_cmd(cfg);
    else if (cmd == "symmetry-check") r = symmetry_cmd(cfg);
    else if (cmd == "regression") r = regression_cmd(cfg);
    else throw ConfigError("unknown command '" + cmd + "'");

    RunOutput out;
    const Json config = cfg.to_json();
    out.document = io::result_document(cmd, config, r.result);
    out.text = cfg.format == "csv" ? io::csv_document(cmd, config, r.table) : out.document.dump(2) + "\n";
    out.exit_code = r.exit_code;
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Couette–Poiseuille channel-flow spectral toolkit", "cpflow"};
    app.set_help_flag("--help", "print this help and exit");
    app.set_config("--config", "", "flat key = value file; flags given on the command line win");
    app.allow_config_extras(false);
    app.set_version_flag("--version", CPFLOW_VERSION);

    app.add_option("command", cfg.command, "command to run")->required()->check(CLI::IsMember(commands));
    app.add_option("--profile", cfg.profile, "custom or poiseuille");
    app.add_option("--A", cfg.A, "profile coefficient A of F = 3Ay^2 + By + C");
    app.add_option("--B", cfg.B, "profile coefficient B");
    app.add_option("--C", cfg.C, "profile coefficient C");
    app.add_option("--flux", cfg.flux, "flux of the poiseuille profile");
    app.add_option("--N", cfg.N, "Chebyshev resolution");
    app.add_option("--K", cfg.K, "Fourier cutoff");
    app.add_option("--xi0", cfg.xi0, "fundamental wavenumber of the periodic cell");
    app.add_option("--tol", cfg.tol, "solver tolerance");
    app.add_option("--max-iter", cfg.max_iter, "iteration cap");
    app.add_option("--xi", cfg.xi, "mode wavenumber (solve-mode)");
    app.add_option("--h", cfg.h, "mode forcing h(y)");
    app.add_option("--f", cfg.f, "force component f(x, y)");
    app.add_option("--g", cfg.g, "force component g(x, y)");
    app.add_option("--delta", cfg.delta, "Picard ball radius");
    app.add_option("--symmetry", cfg.symmetry, "symmetry class X1, X2, Y1 or Y2");
    app.add_option("--T", cfg.T, "spectrum wavenumber");
    app.add_option("--N-check", cfg.N_check, "confirming resolution");
    app.add_option("--reA-min", cfg.reA_min, "neutral bracket lower end in -3A");
    app.add_option("--reA-max", cfg.reA_max, "neutral bracket upper end in -3A");
    app.add_option("--T-min", cfg.T_min, "neutral wavenumber range");
    app.add_option("--T-max", cfg.T_max, "neutral wavenumber range");
    app.add_option("--T-tol", cfg.T_tol, "golden-section width in T");
    app.add_option("--n-xi", cfg.n_xi, "number of wavenumbers (verify-estimates)");
    app.add_option("--n-h", cfg.n_h, "random forcings per wavenumber");
    app.add_option("--xi-min", cfg.xi_min, "smallest wavenumber");
    app.add_option("--xi-max", cfg.xi_max, "largest wavenumber");
    app.add_option("--samples", cfg.samples, "random samples (symmetry-check)");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--threads", cfg.threads, "worker thread cap, 0 for all cores");
    app.add_option("--output", cfg.output, "output file (default: $CPFLOW_OUTPUT_DIR or standard output)");
    app.add_option("--format", cfg.format, "json or csv");
    app.add_option("--baseline", cfg.baseline, "regression baseline file");
    app.add_flag("--record", cfg.record, "write the baseline instead of comparing");
    app.add_flag("--skip-neutral", cfg.skip_neutral, "leave the neutral point out of the regression");
    app.add_option("--neutral-N", cfg.neutral_N, "regression neutral search resolution");
    app.add_option("--neutral-N-check", cfg.neutral_N_check, "regression neutral confirming resolution");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        cfg.resolve();
        const std::string ext = cfg.format;
        const std::filesystem::path path = io::resolve_output(cfg.output, cfg.command, ext);
        io::require_writable(path);
        if (cfg.command == "regression") {
            if (cfg.record) io::require_writable(cfg.baseline);
            else if (!std::filesystem::exists(cfg.baseline))
                throw ConfigError("baseline " + cfg.baseline + " does not exist (use --record)");
        }
        const RunOutput r = execute(cfg);
        if (path.empty()) {
            out << r.text;
        } else {
            io::write_file(path, r.text);
            out << "wrote " << path.string() << "\n";
        }
        if (r.exit_code == exit_regression) err << "regression: one or more constants moved beyond tolerance\n";
        return r.exit_code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "solver error: " << e.what() << "\n";
        return exit_solver;
    }
}

} // namespace cpflow
