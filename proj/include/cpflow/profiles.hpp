#pragma once

#include <string>

namespace cpflow {

/// Couette–Poiseuille base flow u* = F(y) e1 with F(y) = 3A y^2 + B y + C on [-1,1].
///
/// Viscosity is fixed to one.  Any non-zero triple is accepted; profiles with
/// A > 0 or with flow reversal are representable so that the counterexample
/// machinery can build them, but check_admissibility() flags them.
class Profile {
public:
    Profile(double A, double B, double C);

    double A() const noexcept { return A_; }
    double B() const noexcept { return B_; }
    double C() const noexcept { return C_; }

    double F(double y) const noexcept { return (3.0 * A_ * y + B_) * y + C_; }
    double Fp(double y) const noexcept { return 6.0 * A_ * y + B_; }
    double Fpp() const noexcept { return 6.0 * A_; }

    /// Volume flux 2(A+C) = integral of F over [-1,1].
    double flux() const noexcept { return 2.0 * (A_ + C_); }

    bool operator==(const Profile&) const = default;

private:
    double A_, B_, C_;
};

struct ProfileValues {
    double F;
    double Fp;
    double Fpp;
};

/// F, F', F'' at y; throws DomainError for |y| > 1.
ProfileValues eval_profile(const Profile& p, double y);

struct AdmissibilityReport {
    bool satisfies_abc = false;  ///< A <= 0 and |B| <= 3A + C
    double min_F_interior = 0.0; ///< infimum of F over (-1,1), equal to min over [-1,1]
    bool positive_interior = false; ///< F > 0 at every point of (-1,1)
    bool reversal = false;       ///< F takes both signs on [-1,1]
    double flux = 0.0;
};

/// Exact classification by root analysis of the quadratic; no sampling.
AdmissibilityReport check_admissibility(const Profile& p);

/// Poiseuille profile (3/4) phi (1 - y^2) carrying flux phi > 0.
Profile poiseuille_for_flux(double phi);

/// dp*/dx of the base pressure p* = 6 A x.
double base_pressure_gradient(const Profile& p);

/// Throws InadmissibleProfile with `context` in the message when the profile
/// fails the no-reversal condition.
void require_admissible(const Profile& p, const std::string& context);

} // namespace cpflow
