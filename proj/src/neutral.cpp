#include "cpflow/error.hpp"
#include "cpflow/parallel.hpp"
#include "cpflow/spectrum.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

namespace cpflow {
namespace {

/// Follows the leading eigenpair through (-3A, T) by inverse iteration on the
/// pencil, starting from the closest point already visited.
class LeadingTracker {
public:
    explicit LeadingTracker(int N) : g_(SpectralGrid::make(N)) {}

    const SpectralGrid& grid() const { return *g_; }

    void seed(double reA, double T) {
        const SpectrumResult s = os_spectrum(-reA / 3.0, T, g_->N());
        known_.push_back({reA, T, s.leading, s.eigenvectors.front()});
    }

    cplx operator()(double reA, double T) {
        const Entry* near = &known_.front();
        double best = std::numeric_limits<double>::infinity();
        for (const Entry& e : known_) {
            const double d = std::abs(e.reA - reA) / reA + std::abs(e.T - T) / T;
            if (d < best) best = d, near = &e;
        }
        // lambda scales like -i T (-3A) c with c varying slowly
        const cplx guess = near->lambda * (T * reA) / (near->T * near->reA);
        TrackedEigenpair t = track_eigenpair(-reA / 3.0, T, *g_, guess, &near->vector);
        if (!std::isfinite(t.lambda.real())) throw SolverError("neutral_search: eigenpair tracking failed");
        known_.push_back({reA, T, t.lambda, std::move(t.vector)});
        if (known_.size() > 64) known_.erase(known_.begin() + 1, known_.begin() + 33);
        return known_.back().lambda;
    }

private:
    struct Entry {
        double reA, T;
        cplx lambda;
        ComplexVector vector;
    };
    std::shared_ptr<const SpectralGrid> g_;
    std::vector<Entry> known_;
};

struct Peak {
    double T;
    cplx lambda;
};

Peak maximize_over_T(LeadingTracker& track, double reA, const NeutralConfig& cfg) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = cfg.T_min, b = cfg.T_max;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    cplx f1 = track(reA, x1), f2 = track(reA, x2);
    while (b - a > cfg.T_tol) {
        if (f1.real() >= f2.real()) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - r * (b - a);
            f1 = track(reA, x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + r * (b - a);
            f2 = track(reA, x2);
        }
    }
    const Peak p = f1.real() >= f2.real() ? Peak{x1, f1} : Peak{x2, f2};
    const double margin = 10.0 * cfg.T_tol;
    if (p.T - cfg.T_min < margin || cfg.T_max - p.T < margin) {
        std::ostringstream os;
        os << "neutral_search: growth rate at -3A=" << reA << " peaks at the end of the T range (T=" << p.T << ")";
        throw SolverError(os.str());
    }
    return p;
}

Profile shifted_profile(double A, double T, cplx lambda) {
    return Profile(A, 0.0, -3.0 * A + lambda.imag() / T);
}

struct SearchResult {
    double reA, T;
    cplx lambda;
    std::vector<NeutralIterate> trace;
};

SearchResult bisect(int N, const NeutralConfig& cfg) {
    LeadingTracker track(N);
    const double T_mid = 0.5 * (cfg.T_min + cfg.T_max);
    track.seed(cfg.reA_min, T_mid);
    track.seed(cfg.reA_max, T_mid);

    const Peak lo_peak = maximize_over_T(track, cfg.reA_min, cfg);
    const Peak hi_peak = maximize_over_T(track, cfg.reA_max, cfg);
    if (!(lo_peak.lambda.real() < 0.0 && hi_peak.lambda.real() > 0.0)) {
        std::ostringstream os;
        os << "neutral_search: max Re lambda is " << lo_peak.lambda.real() << " at -3A=" << cfg.reA_min << " and "
           << hi_peak.lambda.real() << " at -3A=" << cfg.reA_max << " (N=" << N << "); no sign change";
        throw NoBracket(os.str());
    }

    SearchResult best{cfg.reA_min, lo_peak.T, lo_peak.lambda, {}};
    double lo = cfg.reA_min, hi = cfg.reA_max;
    for (int it = 0; it < cfg.max_bisect; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Peak pk = maximize_over_T(track, mid, cfg);
        const double A = -mid / 3.0;
        const double w = kernel_witness(shifted_profile(A, pk.T, pk.lambda), pk.T, track.grid());
        best.trace.push_back({N, A, pk.T, pk.lambda, w});
        if (std::abs(pk.lambda.real()) < std::abs(best.lambda.real())) {
            best.reA = mid, best.T = pk.T, best.lambda = pk.lambda;
        }
        if (std::abs(pk.lambda.real()) <= cfg.tol) return best;
        (pk.lambda.real() < 0.0 ? lo : hi) = mid;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    std::ostringstream os;
    os << "neutral_search: |Re lambda| stayed above " << cfg.tol << " at N=" << N << " (best " << best.lambda.real()
       << " at -3A=" << best.reA << ")";
    throw NeutralNotConverged(os.str(), best.reA, best.T, best.lambda.real(), best.lambda.imag());
}

void validate(const NeutralConfig& c) {
    const bool ok = c.reA_min > 0.0 && c.reA_max > c.reA_min && c.T_min > 0.0 && c.T_max > c.T_min && c.tol > 0.0 &&
                    c.T_tol > 0.0 && c.T_tol < c.T_max - c.T_min && c.N >= 16 && c.N_check >= 16 &&
                    c.N != c.N_check && c.max_bisect > 0 && c.agreement > 0.0;
    if (!ok) throw ConfigError("neutral_search: invalid configuration");
}

} // namespace

NeutralPoint neutral_search(const NeutralConfig& cfg) {
    validate(cfg);
    // the two discretizations are independent searches over the same bracket
    const int Ns[2] = {cfg.N, cfg.N_check};
    SearchResult res[2];
    std::exception_ptr err[2];
    parallel_for(2, [&](std::size_t i) {
        try {
            res[i] = bisect(Ns[i], cfg);
        } catch (...) {
            err[i] = std::current_exception();
        }
    });
    for (auto& e : err)
        if (e) std::rethrow_exception(e);

    const SearchResult& c = res[0];
    const SearchResult& f = res[1];
    NeutralPoint np;
    np.N = cfg.N_check;
    np.A1 = -f.reA / 3.0;
    np.T0 = f.T;
    np.lambda1 = f.lambda;
    np.A1_coarse = -c.reA / 3.0;
    np.T0_coarse = c.T;
    np.lambda1_coarse = c.lambda;
    np.discretizations_agree = std::abs(f.reA - c.reA) <= cfg.agreement * f.reA &&
                               std::abs(f.T - c.T) <= cfg.agreement * f.T;
    np.trace = c.trace;
    np.trace.insert(np.trace.end(), f.trace.begin(), f.trace.end());

    // the tracked branch must be the leading eigenvalue of the full spectrum
    const SpectrumResult full = os_spectrum(np.A1, np.T0, cfg.N_check, cfg.N);
    if (std::abs(full.leading - np.lambda1) > 1e-6 * std::abs(np.lambda1)) {
        std::ostringstream os;
        os << "neutral_search: tracked eigenvalue " << np.lambda1 << " is not the leading one " << full.leading;
        throw SolverError(os.str());
    }

    np.C_counter = -3.0 * np.A1 + np.lambda1.imag() / np.T0;
    const Profile p = neutral_profile(np);
    np.reversal_confirmed = check_admissibility(p).reversal;
    np.witness = kernel_witness(p, np.T0, *SpectralGrid::make(cfg.N_check));
    return np;
}

Profile neutral_profile(const NeutralPoint& np) { return Profile(np.A1, 0.0, np.C_counter); }

} // namespace cpflow
