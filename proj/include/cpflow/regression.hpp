#pragma once

#include "cpflow/io.hpp"
#include "cpflow/spectrum.hpp"

#include <string>
#include <vector>

namespace cpflow {

/// What the regression run measures and at which resolutions.
struct RegressionSettings {
    double xi0 = 1.0; ///< channel constants on Poiseuille flow (A,B,C) = (-1,0,3)
    int K = 6;
    int N = 28;
    int estimate_N = 48; ///< a priori sweep
    int n_xi = 40;
    int n_h = 5;
    bool include_neutral = true;
    NeutralConfig neutral;
    unsigned long seed = 7;

    io::Json to_json() const;
};

struct MeasuredConstant {
    std::string name;
    double value = 0.0;
    double rtol = 0.0; ///< relative tolerance stored with the baseline
    int N = 0;         ///< resolution it was computed at
    int K = 0;         ///< Fourier cutoff, 0 when not applicable
};

/// kappa_0, c_1, delta, the contraction ratio at delta, the a priori sweep
/// bound and spread, the pinned Poiseuille ratios and, optionally, the
/// neutral point.  Deterministic for fixed settings at any thread count.
std::vector<MeasuredConstant> measure_constants(const RegressionSettings& s);

io::Json baseline_document(const RegressionSettings& s, const std::vector<MeasuredConstant>& m);

struct RegressionCheck {
    std::string name;
    double baseline = 0.0;
    double measured = 0.0;
    double rel_diff = 0.0;
    double rtol = 0.0;
    bool pass = false;
};

struct RegressionReport {
    bool pass = false;
    std::vector<RegressionCheck> checks;
    std::vector<std::string> missing; ///< baseline entries that were not measured
};

/// Compares against a baseline document; entries absent from the
/// measurement are reported as missing and fail the comparison.  Throws
/// ConfigError for a document of the wrong schema.
RegressionReport compare_to_baseline(const io::Json& baseline, const std::vector<MeasuredConstant>& m);

io::Json report_json(const RegressionReport& r);

} // namespace cpflow
