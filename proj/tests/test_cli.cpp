#include "doctest.h"

#include "cpflow/error.hpp"
#include "cpflow/estimates.hpp"
#include "cpflow/expr.hpp"
#include "cpflow/io.hpp"
#include "cpflow/regression.hpp"
#include "cpflow/run.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace cpflow;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out, err;
};

Invocation cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cpflow");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    const fs::path d = fs::temp_directory_path() / "cpflow_test_cli";
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("expression grammar") {
    using std::numbers::pi;
    CHECK(Expression::parse("1 + 2*3")(0, 0) == 7.0);
    CHECK(Expression::parse("2^3^2")(0, 0) == 512.0);
    CHECK(Expression::parse("-2^2")(0, 0) == -4.0);
    CHECK(Expression::parse("(1 - y^2)^2")(0, 0.5) == doctest::Approx(0.5625));
    CHECK(Expression::parse("sin(pi*y)")(0, 0.25) == doctest::Approx(std::sin(pi / 4)));
    CHECK(Expression::parse("exp(x)*cos(y) / 2")(1.0, 0.0) == doctest::Approx(std::exp(1.0) / 2));
    CHECK(Expression::parse(" 1.5e-1 * x ")(2.0, 0) == doctest::Approx(0.3));
    for (const char* bad : {"", "sin(", "1 +", "tan(x)", "x y", "(1", "2 ** 3", "z"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Expression::parse(bad), ConfigError);
    }
}

TEST_CASE("solve-mode through the front-end") {
    const auto r = cli({"solve-mode", "--A", "-1", "--B", "0", "--C", "3", "--xi", "1", "--N", "64", "--h",
                        "sin(pi*y)"});
    REQUIRE(r.code == exit_ok);
    const auto doc = io::Json::parse(r.out);
    CHECK(doc["schema_version"] == io::json_schema_version);
    CHECK(doc["toolkit_version"] == CPFLOW_VERSION);
    CHECK(doc["config"]["numerics"]["N"] == 64);
    CHECK(doc["result"]["resolution"]["N"] == 64);
    CHECK(doc["result"]["relative_residual"].get<double>() <= 1e-8);
    CHECK(doc["result"]["apriori"]["r_hminus1"].get<double>() > 0.0);
    CHECK(doc.contains("metadata"));
}

TEST_CASE("exit statuses") {
    CHECK(cli({"bogus"}).code == exit_config);
    CHECK(cli({"solve-mode", "--N", "4"}).code == exit_config);
    CHECK(cli({"solve-mode", "--h", "sin("}).code == exit_config);
    CHECK(cli({"solve-mode", "--unknown-flag", "1"}).code == exit_config);
    CHECK(cli({"spectrum", "--T", "-1"}).code == exit_config);
    CHECK(cli({"solve-linear", "--format", "csv"}).code == exit_config);
    CHECK(cli({"spectrum", "--output", "/nonexistent-dir/x.json"}).code == exit_config);
    // inadmissible profile is a module error
    const auto r = cli({"solve-linear", "--A", "1", "--B", "0", "--C", "3", "--K", "2", "--N", "16"});
    CHECK(r.code == exit_solver);
    CHECK(r.err.find("violates") != std::string::npos);
    CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("config file with flag override") {
    const fs::path dir = scratch_dir();
    const fs::path conf = dir / "run.ini";
    io::write_file(conf, "command = spectrum\nA = -0.1\nT = 1.0\nN = 40\nformat = csv\n");
    const auto a = cli({"--config", conf.string()});
    REQUIRE(a.code == exit_ok);
    CHECK(a.out.rfind("# cpflow ", 0) == 0);
    CHECK(a.out.find("csv_schema_version=1") != std::string::npos);
    CHECK(a.out.find("\"N\":40") != std::string::npos);
    CHECK(a.out.find("re_lambda,im_lambda,resolved") != std::string::npos);

    const auto b = cli({"--config", conf.string(), "--N", "48"});
    REQUIRE(b.code == exit_ok);
    CHECK(b.out.find("\"N\":48") != std::string::npos);

    io::write_file(conf, "command = spectrum\nnot_an_option = 3\n");
    CHECK(cli({"--config", conf.string()}).code == exit_config);
}

TEST_CASE("payload is identical across runs and thread counts") {
    const std::vector<std::string> base = {"solve-nonlinear", "--profile", "poiseuille", "--f", "0.1*sin(x)*(1-y^2)",
                                           "--g", "0.05*cos(x)", "--K", "4", "--N", "20"};
    auto one = base, many = base;
    one.insert(one.end(), {"--threads", "1"});
    many.insert(many.end(), {"--threads", "3"});
    const auto a = cli(one), b = cli(one), c = cli(many);
    REQUIRE(a.code == exit_ok);
    CHECK(io::payload(io::Json::parse(a.out)) == io::payload(io::Json::parse(b.out)));
    CHECK(io::payload(io::Json::parse(a.out)) == io::payload(io::Json::parse(c.out)));
    CHECK(io::Json::parse(a.out)["result"]["converged"] == true);
    const auto probe = io::Json::parse(a.out)["result"]["uniqueness_probe"];
    CHECK(probe["unique"] == true);
    CHECK(probe["converged_to_zero"] == 10);
    CHECK(probe["evidence"].get<std::string>().rfind("heuristic", 0) == 0);
}

TEST_CASE("output directory from the environment") {
    const fs::path dir = scratch_dir() / "env_out";
    fs::remove_all(dir);
    fs::create_directories(dir);
    ::setenv(io::output_dir_env, dir.c_str(), 1);
    const auto r = cli({"spectrum", "--A", "-0.1", "--N", "32", "--format", "csv"});
    ::unsetenv(io::output_dir_env);
    REQUIRE(r.code == exit_ok);
    CHECK(fs::exists(dir / "spectrum.csv"));
    const std::string text = io::read_file(dir / "spectrum.csv");
    CHECK(text.find("re_lambda,im_lambda,resolved") != std::string::npos);
}

TEST_CASE("symmetry-check and verify-estimates reports") {
    const auto s = cli({"symmetry-check", "--K", "4", "--N", "20", "--samples", "5"});
    REQUIRE(s.code == exit_ok);
    const auto js = io::Json::parse(s.out)["result"];
    CHECK(js["cancellation"]["X1"]["pass"] == true);
    CHECK(js["cancellation"]["X2"]["pass"] == true);
    CHECK(js["picard"]["Y1"]["invariant"] == true);
    CHECK(js["picard"]["X1"]["final_defect"].get<double>() <= 1e-10);

    const auto v = cli({"verify-estimates", "--profile", "poiseuille", "--flux", "4", "--n-xi", "8", "--N", "48"});
    REQUIRE(v.code == exit_ok);
    const auto jv = io::Json::parse(v.out)["result"];
    CHECK(jv["all_green"] == true);
    CHECK(jv["checks"]["poincare_equality"] == true);
    CHECK(jv["per_xi_ratio"].size() == 8);
}

TEST_CASE("a priori sweep") {
    const EstimateSweep sw = apriori_sweep(Profile(-1.0, 0.0, 3.0), 48, 12, 0.05, 50.0, 3, 5);
    CHECK(sw.samples.size() == 36);
    CHECK(sw.key_apriori_holds);
    CHECK(sw.poincare_holds);
    CHECK(sw.a00_nonpositive);
    CHECK(sw.max_residual <= 1e-8);
    CHECK(sw.bound < 1.0);
    CHECK(sw.spread >= 1.0);
    CHECK(sw.spread_max >= 1.0);
    CHECK_THROWS_AS(apriori_sweep(Profile(1.0, 0.0, 3.0)), InadmissibleProfile);
    // deterministic in the seed
    const EstimateSweep again = apriori_sweep(Profile(-1.0, 0.0, 3.0), 48, 12, 0.05, 50.0, 3, 5);
    CHECK(again.bound == sw.bound);
}

TEST_CASE("regression baselines") {
    const fs::path base = scratch_dir() / "baseline.json";
    fs::remove(base);
    const std::vector<std::string> common = {"--skip-neutral", "--K", "3", "--N", "16"};
    auto rec = std::vector<std::string>{"regression", "--baseline", base.string(), "--record"};
    rec.insert(rec.end(), common.begin(), common.end());
    REQUIRE(cli(rec).code == exit_ok);
    REQUIRE(fs::exists(base));

    auto cmp = std::vector<std::string>{"regression", "--baseline", base.string()};
    cmp.insert(cmp.end(), common.begin(), common.end());
    const auto same = cli(cmp);
    CHECK(same.code == exit_ok);
    CHECK(io::Json::parse(same.out)["result"]["pass"] == true);

    // a changed resolution moves kappa_0 beyond its tolerance
    auto moved = std::vector<std::string>{"regression", "--baseline", base.string(), "--skip-neutral", "--K", "3",
                                          "--N", "20"};
    CHECK(cli(moved).code == exit_regression);

    // tampered value
    auto doc = io::Json::parse(io::read_file(base));
    doc["entries"]["c1"]["value"] = doc["entries"]["c1"]["value"].get<double>() * 1.01;
    io::write_file(base, doc.dump());
    CHECK(cli(cmp).code == exit_regression);

    io::write_file(base, "{not json");
    CHECK(cli(cmp).code == exit_config);
    CHECK(cli({"regression", "--baseline", (scratch_dir() / "missing.json").string()}).code == exit_config);
    CHECK_THROWS_AS(compare_to_baseline(io::Json::object(), {}), ConfigError);
}

TEST_CASE("neutral-search front-end on a narrow bracket") {
    const auto r = cli({"neutral-search", "--reA-min", "5600", "--reA-max", "5900", "--T-min", "0.95", "--T-max",
                        "1.1", "--T-tol", "1e-5", "--N", "120", "--N-check", "160"});
    REQUIRE(r.code == exit_ok);
    const auto j = io::Json::parse(r.out)["result"];
    CHECK(j["reA1"].get<double>() == doctest::Approx(5772.22).epsilon(1e-3));
    CHECK(j["reversal_confirmed"] == true);
    CHECK(j["admissibility"]["satisfies_abc"] == false);
    CHECK(j["trace"].size() > 0);
    CHECK(j["resolution"]["N"] == 160);

    // bracket without a sign change is a solver error
    CHECK(cli({"neutral-search", "--reA-min", "3000", "--reA-max", "4000", "--N", "60", "--N-check", "80",
               "--T-tol", "1e-4"})
              .code == exit_solver);
}
