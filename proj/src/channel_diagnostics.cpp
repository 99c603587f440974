#include "cpflow/channel.hpp"

#include "cpflow/error.hpp"
#include "cpflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpflow {
namespace {

/// Lag sums S_d = sum_{k-l=d} int w(y) a_k conj(a_l) dy for d = -2K..2K.
std::vector<cplx> lag_sums(const ChannelDiscretization& d, const ModeSet& a, const RealVector& weight) {
    const int K = d.K();
    std::vector<cplx> S(4 * K + 1, 0.0);
    const auto n = static_cast<std::size_t>(weight.size());
    for (int k = -K; k <= K; ++k) {
        for (int l = -K; l <= K; ++l) {
            S[k - l + 2 * K] += kernels::weighted_dot({weight.data(), n}, {a[k + K].data(), n}, {a[l + K].data(), n});
        }
    }
    return S;
}

/// int_a^b e^{i dd xi0 x} dx
cplx window_weight(double xi0, int dd, double a, double b) {
    if (dd == 0) return b - a;
    const double t = dd * xi0;
    const cplx i(0.0, 1.0);
    return (std::exp(i * t * b) - std::exp(i * t * a)) / (i * t);
}

double window_value(const ChannelDiscretization& d, const std::vector<cplx>& S, double a, double b) {
    const int K = d.K();
    cplx s = 0.0;
    for (int dd = -2 * K; dd <= 2 * K; ++dd) s += S[dd + 2 * K] * window_weight(d.xi0(), dd, a, b);
    return s.real();
}

void add_into(std::vector<cplx>& acc, const std::vector<cplx>& S, double c) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * S[i];
}

/// x-derivative of order ax applied to modes: (i k xi0)^ax u_k.
ModeSet dx(const ChannelDiscretization& d, const ModeSet& u, int ax) {
    ModeSet out(u.size());
    for (int k = -d.K(); k <= d.K(); ++k) out[k + d.K()] = std::pow(cplx(0.0, d.wavenumber(k)), ax) * u[k + d.K()];
    return out;
}

/// Combined lag sums of all derivatives D^alpha, |alpha| <= m, of the components.
std::vector<cplx> sobolev_lag_sums(const ChannelDiscretization& d, const std::vector<YDerivatives>& comps, int m) {
    if (m < 0 || m > 2) throw DomainError("norm order must be 0, 1 or 2");
    const RealVector& w = d.grid()->weights();
    std::vector<cplx> S(4 * d.K() + 1, 0.0);
    for (const auto& c : comps) {
        const ModeSet* dy[3] = {&c.d0, &c.d1, &c.d2};
        for (int ay = 0; ay <= m; ++ay) {
            for (int ax = 0; ax + ay <= m; ++ax) add_into(S, lag_sums(d, dx(d, *dy[ay], ax), w), 1.0);
        }
    }
    return S;
}

ModeSet parity_x(const ChannelDiscretization& d, const ModeSet& u, int sign) {
    ModeSet out(u.size());
    for (int k = -d.K(); k <= d.K(); ++k) out[k + d.K()] = 0.5 * (u[k + d.K()] + double(sign) * u[-k + d.K()]);
    return out;
}

ModeSet parity_y(const ModeSet& u, int sign) {
    ModeSet out(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = 0.5 * (u[k] + double(sign) * u[k].reverse());
    return out;
}

} // namespace

YDerivatives y_derivatives(const ChannelDiscretization& d, const ModeSet& modes) {
    YDerivatives r{modes, ModeSet(modes.size()), ModeSet(modes.size())};
    for (std::size_t k = 0; k < modes.size(); ++k) {
        r.d1[k] = d.grid()->D(1) * modes[k];
        r.d2[k] = d.grid()->D(2) * modes[k];
    }
    return r;
}

std::vector<YDerivatives> velocity_components(const ChannelField& field) {
    return {YDerivatives{field.v_modes(0), field.v_modes(1), field.v_modes(2)},
            YDerivatives{field.w_modes(0), field.w_modes(1), field.w_modes(2)}};
}

double cell_norm(const ChannelDiscretization& d, const std::vector<YDerivatives>& comps, int m) {
    const auto S = sobolev_lag_sums(d, comps, m);
    return std::sqrt(std::max(0.0, d.period() * S[2 * d.K()].real()));
}

double x_norm(const ChannelDiscretization& d, const std::vector<YDerivatives>& comps, int m) {
    const auto S = sobolev_lag_sums(d, comps, m);
    double best = 0.0;
    for (int i = 0; i < d.nx(); ++i) {
        const double a = d.x(i);
        best = std::max(best, window_value(d, S, a, a + 1.0));
    }
    return std::sqrt(std::max(0.0, best));
}

double x_window_norm(const ChannelDiscretization& d, const std::vector<YDerivatives>& comps, int m, double a) {
    return std::sqrt(std::max(0.0, window_value(d, sobolev_lag_sums(d, comps, m), a, a + 1.0)));
}

double x_norm(const ChannelField& field, int m) { return x_norm(*field.disc, velocity_components(field), m); }

double window_integral(const ChannelDiscretization& d, const std::vector<ModeSet>& comps, double a, double b) {
    std::vector<cplx> S(4 * d.K() + 1, 0.0);
    for (const auto& c : comps) add_into(S, lag_sums(d, c, d.grid()->weights()), 1.0);
    return window_value(d, S, a, b);
}

EnergyReport gamma_energy(const Profile& p, const ChannelField& field, const std::vector<double>& L_list) {
    const auto rep = check_admissibility(p);
    if (!rep.satisfies_abc || rep.reversal || !rep.positive_interior) {
        throw InadmissibleProfile("gamma_energy: profile must satisfy the no-reversal condition");
    }
    const ChannelDiscretization& d = *field.disc;
    const SpectralGrid& g = *d.grid();
    const int K = d.K();
    ModeSet s(d.modes()), s1(d.modes()), s2(d.modes());
    for (int k = -K; k <= K; ++k) {
        auto sd = sigma_from_clamped(g, p, field.psi[k + K]);
        s[k + K] = std::move(sd.s);
        s1[k + K] = std::move(sd.s1);
        s2[k + K] = std::move(sd.s2);
    }
    const RealVector& w = g.weights();
    RealVector wF(g.size());
    for (int j = 0; j < g.size(); ++j) wF[j] = w[j] * p.F(g.node(j));

    // Gamma integrand
    std::vector<cplx> G(4 * K + 1, 0.0);
    add_into(G, lag_sums(d, dx(d, s, 1), w), -6.0 * p.A());
    add_into(G, lag_sums(d, s1, w), -12.0 * p.A());
    add_into(G, lag_sums(d, dx(d, s, 2), wF), 1.0);
    add_into(G, lag_sums(d, dx(d, s1, 1), wF), 2.0);
    add_into(G, lag_sums(d, s2, wF), 1.0);

    // control integrand
    const ModeSet psi0 = field.psi_modes(0), psi1 = field.psi_modes(1), psi2 = field.psi_modes(2);
    std::vector<cplx> Cs(4 * K + 1, 0.0);
    add_into(Cs, lag_sums(d, s1, w), 1.0);
    add_into(Cs, lag_sums(d, dx(d, s, 1), w), 1.0);
    add_into(Cs, lag_sums(d, dx(d, psi0, 2), w), 1.0);
    add_into(Cs, lag_sums(d, dx(d, psi1, 1), w), 2.0);
    add_into(Cs, lag_sums(d, psi2, w), 1.0);

    EnergyReport r;
    double prev = -1.0;
    std::vector<double> Ls(L_list);
    std::sort(Ls.begin(), Ls.end());
    for (double L : Ls) {
        if (!(L > 0.0)) throw DomainError("gamma_energy: L must be positive");
        const double half = std::min(L, 0.5 * d.period());
        const double gam = window_value(d, G, -half, half);
        const double ctl = window_value(d, Cs, -half, half);
        r.gamma_L[L] = gam;
        r.control_L[L] = ctl;
        if (gam < prev) r.gamma_monotone = false;
        prev = gam;
        if (gam > 0.0) r.max_control_ratio = std::max(r.max_control_ratio, ctl / gam);
    }
    for (int m = 0; m <= 2; ++m) r.x_norms[m] = x_norm(field, m);
    r.h1_norm = field.velocity_norm(1);
    r.h2_norm = field.velocity_norm(2);
    return r;
}

const char* symmetry_name(SymmetryClass c) noexcept {
    switch (c) {
    case SymmetryClass::X1: return "X1";
    case SymmetryClass::X2: return "X2";
    case SymmetryClass::Y1: return "Y1";
    case SymmetryClass::Y2: return "Y2";
    }
    return "?";
}

ModeSet project_psi(const ChannelDiscretization& d, const ModeSet& psi, SymmetryClass c) {
    switch (c) {
    case SymmetryClass::X1: return parity_x(d, psi, +1);
    case SymmetryClass::X2: return parity_x(d, psi, -1);
    case SymmetryClass::Y1: return parity_y(psi, -1);
    case SymmetryClass::Y2: return parity_y(psi, +1);
    }
    return psi;
}

double symmetry_defect(const ChannelDiscretization& d, const ModeSet& psi, SymmetryClass c) {
    const ModeSet P = project_psi(d, psi, c);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        num += (psi[k] - P[k]).squaredNorm();
        den += psi[k].squaredNorm();
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

ChannelField symmetry_project(const ChannelField& field, SymmetryClass c) {
    const ChannelDiscretization& d = *field.disc;
    ChannelField out = field_from_psi(field.disc, project_psi(d, field.psi, c));
    if (!field.qx_hat.empty()) {
        // q takes the x-parity of psi in the X classes and the opposite
        // y-parity in the Y classes; the gradient components follow.
        switch (c) {
        case SymmetryClass::X1:
            out.qx_hat = parity_x(d, field.qx_hat, -1);
            out.qy_hat = parity_x(d, field.qy_hat, +1);
            break;
        case SymmetryClass::X2:
            out.qx_hat = parity_x(d, field.qx_hat, +1);
            out.qy_hat = parity_x(d, field.qy_hat, -1);
            break;
        case SymmetryClass::Y1:
            out.qx_hat = parity_y(field.qx_hat, +1);
            out.qy_hat = parity_y(field.qy_hat, -1);
            break;
        case SymmetryClass::Y2:
            out.qx_hat = parity_y(field.qx_hat, -1);
            out.qy_hat = parity_y(field.qy_hat, +1);
            break;
        }
        out.qx = d.synthesize(out.qx_hat);
        out.qy = d.synthesize(out.qy_hat);
        // the mean gradient is x-even and y-even, so it survives where qx does
        out.beta = (c == SymmetryClass::X2 || c == SymmetryClass::Y1) ? field.beta : 0.0;
    }
    return out;
}

SymmetryIntegrals symmetry_integrals(const Profile& p, const ChannelDiscretization& d, const ModeSet& psi) {
    const SpectralGrid& g = *d.grid();
    const int K = d.K();
    const RealVector& w = g.weights();
    const auto n = static_cast<std::size_t>(w.size());
    RealVector F(g.size());
    for (int j = 0; j < g.size(); ++j) F[j] = p.F(g.node(j));

    cplx i1 = 0.0, i2 = 0.0;
    double a1 = 0.0, a2 = 0.0, bx = 0.0;
    for (int k = -K; k <= K; ++k) {
        const double xi = d.wavenumber(k);
        const ComplexVector ph = g.clamped(0) * psi[k + K];
        const ComplexVector ph2 = g.clamped(2) * psi[k + K];
        const ComplexVector px = cplx(0.0, xi) * ph;
        const ComplexVector t1 = F.cast<cplx>().cwiseProduct(ph2);
        const ComplexVector t2 = (-xi * xi) * F.cast<cplx>().cwiseProduct(ph) - 6.0 * p.A() * ph;
        i1 += kernels::weighted_dot({w.data(), n}, {t1.data(), n}, {px.data(), n});
        i2 += kernels::weighted_dot({w.data(), n}, {t2.data(), n}, {px.data(), n});
        a1 += kernels::weighted_norm2({w.data(), n}, {t1.data(), n});
        a2 += kernels::weighted_norm2({w.data(), n}, {t2.data(), n});
        bx += kernels::weighted_norm2({w.data(), n}, {px.data(), n});
    }
    const double L = d.period();
    SymmetryIntegrals r;
    r.I1 = L * i1.real();
    r.I2 = L * i2.real();
    r.scale = L * (std::sqrt(a1 * bx) + std::sqrt(a2 * bx));
    return r;
}

SymmetryIntegrals check_symmetry_cancellation(const Profile& p, const ChannelDiscretization& d, const ModeSet& psi,
                                              double class_tolerance) {
    if (p.B() != 0.0) throw PreconditionError("symmetry cancellation requires an even profile (B = 0)");
    const double e = symmetry_defect(d, psi, SymmetryClass::X1);
    const double o = symmetry_defect(d, psi, SymmetryClass::X2);
    if (e > class_tolerance && o > class_tolerance) {
        std::ostringstream os;
        os << "stream function is neither x-even nor x-odd (defects " << e << ", " << o << ")";
        throw PreconditionError(os.str());
    }
    return symmetry_integrals(p, d, psi);
}

ModeSet random_stream_function(const ChannelDiscretization& d, std::mt19937_64& rng, double amplitude, int degree) {
    const SpectralGrid& g = *d.grid();
    const int K = d.K();
    std::normal_distribution<double> n;
    ModeSet psi(d.modes(), ComplexVector::Zero(g.interior_size()));
    for (int k = 0; k <= K; ++k) {
        std::vector<cplx> c(degree);
        for (int m = 0; m < degree; ++m) {
            c[m] = (k == 0 ? cplx(n(rng), 0.0) : cplx(n(rng), n(rng))) / std::pow((1.0 + k) * (1.0 + m), 2);
        }
        for (int j = 1; j < g.N(); ++j) {
            const double y = g.node(j);
            const double t = std::acos(y);
            cplx s = 0.0;
            for (int m = 0; m < degree; ++m) s += c[m] * std::cos(m * t);
            psi[k + K][j - 1] = std::pow(1.0 - y * y, 2) * s;
        }
    }
    for (int k = 1; k <= K; ++k) psi[K - k] = psi[K + k].conjugate();
    auto disc = std::make_shared<const ChannelDiscretization>(d);
    const double nrm = field_from_psi(disc, psi).velocity_h2();
    if (nrm > 0.0) {
        for (auto& p : psi) p *= amplitude / nrm;
    }
    return psi;
}

ForceModes random_force(const ChannelDiscretization& d, std::mt19937_64& rng, double amplitude, int degree) {
    const SpectralGrid& g = *d.grid();
    const int K = d.K();
    std::normal_distribution<double> n;
    ForceModes f = ForceModes::zero(d);
    for (ModeSet* comp : {&f.f, &f.g}) {
        for (int k = 0; k <= K; ++k) {
            std::vector<cplx> c(degree);
            for (int m = 0; m < degree; ++m) {
                c[m] = (k == 0 ? cplx(n(rng), 0.0) : cplx(n(rng), n(rng))) / std::pow((1.0 + k) * (1.0 + m), 2);
            }
            for (int j = 0; j <= g.N(); ++j) {
                const double t = std::acos(std::clamp(g.node(j), -1.0, 1.0));
                cplx s = 0.0;
                for (int m = 0; m < degree; ++m) s += c[m] * std::cos(m * t);
                (*comp)[k + K][j] = s;
            }
        }
        for (int k = 1; k <= K; ++k) (*comp)[K - k] = (*comp)[K + k].conjugate();
    }
    const double nrm = f.l2_norm(d);
    if (nrm > 0.0) f *= amplitude / nrm;
    return f;
}

} // namespace cpflow
