#include "cpflow/profiles.hpp"

#include "cpflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpflow {

Profile::Profile(double A, double B, double C) : A_(A), B_(B), C_(C) {
    if (A == 0.0 && B == 0.0 && C == 0.0) {
        throw DomainError("profile: (A,B,C) must not be the zero triple");
    }
    if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C)) {
        throw DomainError("profile: coefficients must be finite");
    }
}

ProfileValues eval_profile(const Profile& p, double y) {
    if (!(std::abs(y) <= 1.0)) {
        std::ostringstream os;
        os << "eval_profile: y = " << y << " outside [-1,1]";
        throw DomainError(os.str());
    }
    return {p.F(y), p.Fp(y), p.Fpp()};
}

AdmissibilityReport check_admissibility(const Profile& p) {
    const double A = p.A(), B = p.B(), C = p.C();
    AdmissibilityReport r;
    r.flux = p.flux();
    r.satisfies_abc = A <= 0.0 && std::abs(B) <= 3.0 * A + C;

    // Extremes of the quadratic on [-1,1]: endpoints and, if inside, the vertex.
    const double f_lo = p.F(-1.0), f_hi = p.F(1.0);
    double fmin = std::min(f_lo, f_hi);
    double fmax = std::max(f_lo, f_hi);
    bool vertex_inside = false;
    double y_vertex = 0.0;
    if (A != 0.0) {
        y_vertex = -B / (6.0 * A);
        if (y_vertex > -1.0 && y_vertex < 1.0) {
            vertex_inside = true;
            fmin = std::min(fmin, p.F(y_vertex));
            fmax = std::max(fmax, p.F(y_vertex));
        }
    }
    r.min_F_interior = fmin;
    r.reversal = fmin < 0.0 && fmax > 0.0;

    // F > 0 on the open interval: the minimum over the closed interval must be
    // non-negative and any zero must sit at an endpoint.
    if (fmin > 0.0) {
        r.positive_interior = true;
    } else if (fmin == 0.0) {
        const bool interior_zero = vertex_inside && p.F(y_vertex) == 0.0;
        // A linear profile vanishing at an endpoint is positive inside iff the
        // other endpoint is positive; a constant zero profile is excluded.
        r.positive_interior = !interior_zero && fmax > 0.0;
    }
    return r;
}

Profile poiseuille_for_flux(double phi) {
    if (!(phi > 0.0)) {
        throw DomainError("poiseuille_for_flux: flux must be positive");
    }
    return Profile(-phi / 4.0, 0.0, 3.0 * phi / 4.0);
}

double base_pressure_gradient(const Profile& p) { return 6.0 * p.A(); }

void require_admissible(const Profile& p, const std::string& context) {
    const auto rep = check_admissibility(p);
    if (!rep.satisfies_abc) {
        std::ostringstream os;
        os << context << ": profile (A=" << p.A() << ", B=" << p.B() << ", C=" << p.C()
           << ") violates A <= 0, |B| <= 3A + C";
        throw InadmissibleProfile(os.str());
    }
}

} // namespace cpflow
