#pragma once

#include "cpflow/io.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace cpflow {

/// Exit statuses of the command-line front-end.
enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_solver = 3, exit_regression = 4 };

/// Resolved settings of one invocation.  Unset optionals take
/// command-specific defaults during resolution.
struct RunConfig {
    std::string command;
    std::string profile = "custom"; ///< custom | poiseuille
    double A = -1.0, B = 0.0, C = 3.0;
    double flux = 4.0;              ///< used by the poiseuille profile

    std::optional<int> N;
    std::optional<int> K;           ///< 8 for channel commands, 6 for regression
    double xi0 = 1.0;
    double tol = 1e-8;
    int max_iter = 100;

    double xi = 1.0;                ///< solve-mode wavenumber
    std::string h = "sin(pi*y)";    ///< solve-mode forcing, in y
    std::string f = "0", g = "0";   ///< channel forcing components, in x and y
    double delta = 1.0;
    std::string symmetry;           ///< empty, X1, X2, Y1 or Y2

    double T = 1.0;
    std::optional<int> N_check;
    double reA_min = 5000.0, reA_max = 6500.0;
    double T_min = 0.8, T_max = 1.3, T_tol = 1e-7;

    int n_xi = 40, n_h = 5;
    double xi_min = 0.05, xi_max = 50.0;
    int samples = 20;

    unsigned long seed = 7;
    unsigned threads = 0;           ///< 0: hardware concurrency
    std::string output;
    std::string format = "json";

    std::string baseline;
    bool record = false;
    bool skip_neutral = false;
    int neutral_N = 200;           ///< regression neutral point resolutions
    int neutral_N_check = 300;

    /// Checks ranges and fills command defaults; throws ConfigError.
    void resolve();
    io::Json to_json() const;
};

struct RunOutput {
    io::Json document;          ///< JSON result document
    std::string text;           ///< serialised output in the requested format
    int exit_code = exit_ok;
};

/// Executes a resolved configuration.  Library errors propagate.
RunOutput execute(const RunConfig& cfg);

/// Parses flags (and an optional --config key=value file; flags win),
/// runs, writes the result and maps errors to exit statuses.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cpflow
