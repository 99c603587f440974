#include "cpflow/nonlinear.hpp"

#include "cpflow/error.hpp"
#include "cpflow/kernels.hpp"
#include "cpflow/parallel.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace cpflow {
namespace {

const cplx I(0.0, 1.0);

void check_modes(const ChannelDiscretization& d, const ModeSet& psi, const char* who) {
    if (static_cast<int>(psi.size()) != d.modes()) throw DomainError(std::string(who) + ": wrong number of modes");
    for (const auto& p : psi) {
        if (p.size() != d.grid()->interior_size()) throw DomainError(std::string(who) + ": wrong mode length");
    }
}

/// Restores psi_{-k} = conj(psi_k) and a real mean mode.
ModeSet make_real(const ChannelDiscretization& d, ModeSet psi) {
    const int K = d.K();
    psi[K] = psi[K].real().cast<cplx>();
    for (int k = 1; k <= K; ++k) psi[K - k] = psi[K + k].conjugate();
    return psi;
}

ModeSet difference(const ModeSet& a, const ModeSet& b) {
    ModeSet out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
    return out;
}

RealVector profile_values(const Profile& p, const SpectralGrid& g, bool derivative) {
    RealVector F(g.size());
    for (int j = 0; j < g.size(); ++j) F[j] = derivative ? p.Fp(g.node(j)) : p.F(g.node(j));
    return F;
}

/// (u.grad) w with u, w given by clamped stream functions.
ForceModes advect_pair(const ChannelDiscretization& d, const ModeSet& psi_u, const ModeSet& psi_w) {
    const SpectralGrid& g = *d.grid();
    const int K = d.K();
    ModeSet a(d.modes()), b(d.modes()), vx(d.modes()), vy(d.modes()), wx(d.modes()), wy(d.modes());
    for (int k = -K; k <= K; ++k) {
        const int i = k + K;
        const double xi = d.wavenumber(k);
        a[i] = g.clamped(1) * psi_u[i];
        b[i] = -I * xi * (g.clamped(0) * psi_u[i]);
        const ComplexVector v = g.clamped(1) * psi_w[i];
        vy[i] = g.clamped(2) * psi_w[i];
        vx[i] = I * xi * v;
        const ComplexVector w0 = g.clamped(0) * psi_w[i];
        wx[i] = xi * xi * w0;
        wy[i] = -I * xi * v;
    }
    const Field2D A = d.synthesize(a), B = d.synthesize(b);
    const Field2D Vx = d.synthesize(vx), Vy = d.synthesize(vy), Wx = d.synthesize(wx), Wy = d.synthesize(wy);
    Field2D Nx(d.nx(), d.ny()), Ny(d.nx(), d.ny());
    const auto n = static_cast<std::size_t>(d.ny());
    for (int r = 0; r < d.nx(); ++r) {
        kernels::advect({A.row(r).data(), n}, {Vx.row(r).data(), n}, {B.row(r).data(), n}, {Vy.row(r).data(), n},
                        {Nx.row(r).data(), n});
        kernels::advect({A.row(r).data(), n}, {Wx.row(r).data(), n}, {B.row(r).data(), n}, {Wy.row(r).data(), n},
                        {Ny.row(r).data(), n});
    }
    return {d.analyse(Nx), d.analyse(Ny)};
}

double force_l2(const ChannelDiscretization& d, const ForceModes& f) {
    return std::sqrt(d.l2_norm_squared(f.f) + d.l2_norm_squared(f.g));
}

double interior_norm2(const SpectralGrid& g, const ComplexVector& u) {
    double s = 0.0;
    for (int j = 1; j < g.N(); ++j) s += g.weights()[j] * std::norm(u[j]);
    return s;
}

} // namespace

void PicardConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("picard: delta must be positive");
    if (!(tol > 0.0) || !(tol < delta)) throw ConfigError("picard: need 0 < tol < delta");
    if (max_iter <= 0) throw ConfigError("picard: max_iter must be positive");
}

ForceModes advection_modes(const ChannelDiscretization& d, const ModeSet& psi) {
    check_modes(d, psi, "advection");
    return advect_pair(d, psi, psi);
}

ForceModes nonlinear_operator(const Profile& p, const ChannelDiscretization& d, const ModeSet& psi_in) {
    check_modes(d, psi_in, "nonlinear_operator");
    const ModeSet psi = make_real(d, psi_in);
    const SpectralGrid& g = *d.grid();
    const RealVector F = profile_values(p, g, false), Fp = profile_values(p, g, true);
    ForceModes out = advection_modes(d, psi);
    for (int k = -d.K(); k <= d.K(); ++k) {
        const int i = k + d.K();
        const double xi = d.wavenumber(k);
        ComplexVector ph[4];
        for (int o = 0; o < 4; ++o) ph[o] = g.clamped(o) * psi[i];
        const ComplexVector v = ph[1];
        const ComplexVector w = -I * xi * ph[0];
        const ComplexVector lap_v = ph[3] - xi * xi * ph[1];
        const ComplexVector lap_w = -I * xi * (ph[2] - xi * xi * ph[0]);
        out.f[i] += -lap_v + I * xi * F.cast<cplx>().cwiseProduct(v) + Fp.cast<cplx>().cwiseProduct(w);
        out.g[i] += -lap_w + I * xi * F.cast<cplx>().cwiseProduct(w);
    }
    return out;
}

double velocity_h2(const ChannelDiscretization& d, const ModeSet& psi) {
    check_modes(d, psi, "velocity_h2");
    const SpectralGrid& g = *d.grid();
    YDerivatives v{ModeSet(psi.size()), ModeSet(psi.size()), ModeSet(psi.size())};
    YDerivatives w = v;
    for (int k = -d.K(); k <= d.K(); ++k) {
        const int i = k + d.K();
        const cplx m = -I * d.wavenumber(k);
        v.d0[i] = g.clamped(1) * psi[i];
        v.d1[i] = g.clamped(2) * psi[i];
        v.d2[i] = g.clamped(3) * psi[i];
        w.d0[i] = m * (g.clamped(0) * psi[i]);
        w.d1[i] = m * v.d0[i];
        w.d2[i] = m * v.d1[i];
    }
    return cell_norm(d, {v, w}, 2);
}

NonlinearResidual nonlinear_residual(const Profile& p, const ChannelDiscretization& d, const ModeSet& psi_in,
                                     const ForceModes& f) {
    check_modes(d, psi_in, "nonlinear_residual");
    const ModeSet psi_m = make_real(d, psi_in);
    const SpectralGrid& g = *d.grid();
    const int K = d.K();
    const RealMatrix& D1 = g.D(1);
    const RealMatrix& D2 = g.D(2);
    const RealMatrix& D4 = g.D(4);
    const RealVector F = profile_values(p, g, false);

    // nodal psi and the Laplacian, per mode
    ModeSet psi(d.modes()), lap(d.modes()), px(d.modes()), py(d.modes()), lx(d.modes()), ly(d.modes());
    for (int k = -K; k <= K; ++k) {
        const int i = k + K;
        const double xi = d.wavenumber(k);
        psi[i] = g.clamped(0) * psi_m[i];
        lap[i] = D2 * psi[i] - xi * xi * psi[i];
        px[i] = I * xi * psi[i];
        py[i] = D1 * psi[i];
        lx[i] = I * xi * lap[i];
        ly[i] = D1 * lap[i];
    }
    const Field2D t1 = d.synthesize(px).cwiseProduct(d.synthesize(ly));
    const Field2D t2 = d.synthesize(py).cwiseProduct(d.synthesize(lx));
    const ModeSet T1 = d.analyse(t1), T2 = d.analyse(t2);

    double res = 0.0;
    double terms[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int k = -K; k <= K; ++k) {
        const int i = k + K;
        const double xi = d.wavenumber(k);
        const ComplexVector bih = D4 * psi[i] - 2.0 * xi * xi * (D2 * psi[i]) + std::pow(xi, 4) * psi[i];
        const ComplexVector adv = F.cast<cplx>().cwiseProduct(lx[i]);
        const ComplexVector tilt = 6.0 * p.A() * px[i];
        const ComplexVector gx = I * xi * f.g[i];
        const ComplexVector fy = D1 * f.f[i];
        const ComplexVector R = bih - adv + tilt + T1[i] - T2[i] - gx + fy;
        res += interior_norm2(g, R);
        const ComplexVector* parts[7] = {&bih, &adv, &tilt, &T1[i], &T2[i], &gx, &fy};
        for (int t = 0; t < 7; ++t) terms[t] += interior_norm2(g, *parts[t]);
    }
    double scale = 0.0;
    for (double t : terms) scale += std::sqrt(d.period() * t);
    NonlinearResidual r;
    r.absolute = std::sqrt(d.period() * res);
    r.relative = scale > 0.0 ? r.absolute / scale : 0.0;
    return r;
}

ModeSet picard_map(const LinearChannelSolver& solver, const ForceModes& f, const ModeSet& w) {
    const ChannelDiscretization& d = *solver.disc();
    check_modes(d, w, "picard_map");
    ForceModes rhs = advection_modes(d, w);
    rhs *= -1.0;
    rhs += f;
    const int K = d.K();
    const RealMatrix& D1 = d.grid()->D(1);
    ModeSet psi(d.modes(), ComplexVector::Zero(d.grid()->interior_size()));
    parallel_for(static_cast<std::size_t>(K + 1), [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        const ComplexVector h = cplx(0.0, d.wavenumber(k)) * rhs.g[k + K] - D1 * rhs.f[k + K];
        psi[k + K] = solver.mode_operator(k).solve(h).interior;
    });
    return make_real(d, std::move(psi));
}

PicardResult picard_solve(const LinearChannelSolver& solver, const ForceModes& f, const PicardConfig& cfg,
                          const std::optional<ModeSet>& w0) {
    cfg.validate();
    const auto& disc = solver.disc();
    const ChannelDiscretization& d = *disc;
    const Profile& p = solver.profile();

    ModeSet w = w0 ? make_real(d, *w0) : ModeSet(d.modes(), ComplexVector::Zero(d.grid()->interior_size()));
    check_modes(d, w, "picard_solve");
    if (cfg.symmetry_class) w = project_psi(d, w, *cfg.symmetry_class);

    PicardTrace trace;
    double prev_inc = 0.0;
    int rising = 0;
    for (int n = 0; n < cfg.max_iter; ++n) {
        ModeSet v = picard_map(solver, f, w);
        PicardStep step;
        if (cfg.symmetry_class) {
            step.leak = symmetry_defect(d, v, *cfg.symmetry_class);
            trace.max_leak = std::max(trace.max_leak, step.leak);
            v = project_psi(d, v, *cfg.symmetry_class);
        }
        step.norm = velocity_h2(d, v);
        step.increment = velocity_h2(d, difference(v, w));
        w = std::move(v);

        if (!(step.norm <= cfg.delta)) {
            trace.iterates.push_back(step);
            std::ostringstream os;
            os << "Picard iterate " << n + 1 << " left the delta-ball (||v||_H2 = " << step.norm
               << " > delta = " << cfg.delta << "); the force is too large for this radius";
            throw BallEscape(os.str(), n + 1, step.norm);
        }
        if (prev_inc > 0.0) {
            const double ratio = step.increment / prev_inc;
            trace.contraction_factor = std::max(trace.contraction_factor, ratio);
            rising = ratio >= 1.0 ? rising + 1 : 0;
            if (rising >= 3) {
                trace.iterates.push_back(step);
                std::ostringstream os;
                os << "Picard increments grew for 3 consecutive steps (last ratio " << ratio << ")";
                throw NonContraction(os.str());
            }
        }
        prev_inc = step.increment;

        if (step.increment <= cfg.tol) {
            step.residual = nonlinear_residual(p, d, w, f).relative;
            trace.final_residual = step.residual;
            if (step.residual <= 10.0 * cfg.tol) {
                trace.converged = trace.contraction_factor < 1.0;
                trace.iterates.push_back(step);
                break;
            }
        }
        trace.iterates.push_back(step);
    }
    if (!trace.converged && !trace.iterates.empty() && trace.iterates.back().residual < 0.0) {
        trace.final_residual = nonlinear_residual(p, d, w, f).relative;
    }

    ChannelField field = field_from_psi(disc, w);
    ForceModes rhs = advection_modes(d, field.psi);
    rhs *= -1.0;
    rhs += f;
    PressureReport pr = recover_pressure_gradient(p, field, rhs);
    field.qx_hat = std::move(pr.qx_hat);
    field.qy_hat = std::move(pr.qy_hat);
    field.qx = std::move(pr.qx);
    field.qy = std::move(pr.qy);
    field.beta = pr.beta;
    field.curl_residual = pr.curl_residual;
    return {std::move(field), std::move(trace)};
}

PicardResult picard_solve(const Profile& p, std::shared_ptr<const ChannelDiscretization> disc, const ForceModes& f,
                          const PicardConfig& cfg, const std::optional<ModeSet>& w0) {
    require_admissible(p, "picard_solve");
    return picard_solve(LinearChannelSolver(p, std::move(disc)), f, cfg, w0);
}

KappaEstimate measure_kappa0(const LinearChannelSolver& solver, int samples, unsigned long seed) {
    const ChannelDiscretization& d = *solver.disc();
    const SpectralGrid& g = *d.grid();
    const int K = d.K(), n = g.size();
    const RealVector F = profile_values(solver.profile(), g, false);
    const RealVector Fp = profile_values(solver.profile(), g, true);
    const RealVector sw = g.weights().cwiseSqrt();
    const RealMatrix& D1 = g.D(1);

    std::vector<double> sv(K + 1), sq(K + 1);
    parallel_for(static_cast<std::size_t>(K + 1), [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        const double xi = d.wavenumber(k);
        // multiplicities of ||d_y^j u||^2 in the H^2 norm: sum over x-orders <= 2 - j
        const double mult[3] = {1.0 + xi * xi + std::pow(xi, 4), 1.0 + xi * xi, 1.0};
        ComplexMatrix Mv(6 * n, 2 * n), Mq(2 * n, 2 * n);
        for (int c = 0; c < 2 * n; ++c) {
            ComplexVector fin = ComplexVector::Zero(n), gin = ComplexVector::Zero(n);
            if (c < n) {
                fin[c] = 1.0 / sw[c];
            } else {
                gin[c - n] = 1.0 / sw[c - n];
            }
            const ComplexVector h = I * xi * gin - D1 * fin;
            const ComplexVector psi = solver.mode_operator(k).solve(h).interior;
            ComplexVector ph[4];
            for (int o = 0; o < 4; ++o) ph[o] = g.clamped(o) * psi;
            for (int j = 0; j < 3; ++j) {
                const double m = std::sqrt(mult[j]);
                Mv.col(c).segment(j * n, n) = m * sw.cast<cplx>().cwiseProduct(ph[j + 1]);
                Mv.col(c).segment((3 + j) * n, n) = m * xi * sw.cast<cplx>().cwiseProduct(ph[j]);
            }
            const ComplexVector v = ph[1];
            const ComplexVector w = -I * xi * ph[0];
            const ComplexVector qx = fin + (ph[3] - xi * xi * ph[1]) - I * xi * F.cast<cplx>().cwiseProduct(v) -
                                     Fp.cast<cplx>().cwiseProduct(w);
            const ComplexVector qy = gin - I * xi * (ph[2] - xi * xi * ph[0]) - I * xi * F.cast<cplx>().cwiseProduct(w);
            Mq.col(c).head(n) = sw.cast<cplx>().cwiseProduct(qx);
            Mq.col(c).tail(n) = sw.cast<cplx>().cwiseProduct(qy);
        }
        sv[kk] = Eigen::JacobiSVD<ComplexMatrix>(Mv).singularValues()[0];
        sq[kk] = Eigen::JacobiSVD<ComplexMatrix>(Mq).singularValues()[0];
    });

    KappaEstimate e;
    e.velocity = *std::max_element(sv.begin(), sv.end());
    e.bound = e.velocity + *std::max_element(sq.begin(), sq.end());

    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        const ForceModes f = random_force(d, rng);
        const ChannelField v = solver.solve(f);
        e.sampled = std::max(e.sampled, (v.velocity_h2() + v.pressure_gradient_l2()) / force_l2(d, f));
    }
    return e;
}

C1Estimate measure_c1(const ChannelDiscretization& d, int pairs, unsigned long seed, int sweeps) {
    const SpectralGrid& g = *d.grid();
    const int K = d.K(), m = g.interior_size(), n = g.size();
    const int P = m * (2 * K + 1); // real parameters: Re psi_0, then Re/Im psi_k for k >= 1

    auto params_to_psi = [&](const RealVector& x) {
        ModeSet psi(d.modes(), ComplexVector::Zero(m));
        psi[K] = x.head(m).cast<cplx>();
        for (int k = 1; k <= K; ++k) {
            const auto re = x.segment(m * (2 * k - 1), m);
            const auto im = x.segment(m * 2 * k, m);
            for (int j = 0; j < m; ++j) psi[K + k][j] = cplx(re[j], im[j]);
        }
        return make_real(d, std::move(psi));
    };
    // Weighted real image of k >= 0 modes: ||image||^2 is the cell integral.
    auto mode_weight = [&](int k) { return d.period() * (k == 0 ? 1.0 : 2.0); };
    auto force_image = [&](const ForceModes& f) {
        RealVector out(4 * n * (K + 1));
        int at = 0;
        for (int k = 0; k <= K; ++k) {
            for (const ModeSet* c : {&f.f, &f.g}) {
                for (int j = 0; j < n; ++j) {
                    const double s = std::sqrt(mode_weight(k) * g.weights()[j]);
                    out[at++] = s * (*c)[k + K][j].real();
                    out[at++] = s * (*c)[k + K][j].imag();
                }
            }
        }
        return out;
    };
    // H^2 metric: ||B x|| = ||velocity||_{H^2}.
    RealMatrix B(12 * n * (K + 1), P);
    for (int p = 0; p < P; ++p) {
        RealVector e = RealVector::Zero(P);
        e[p] = 1.0;
        const ModeSet psi = params_to_psi(e);
        int at = 0;
        for (int k = 0; k <= K; ++k) {
            const double xi = d.wavenumber(k);
            const double mult[3] = {1.0 + xi * xi + std::pow(xi, 4), 1.0 + xi * xi, 1.0};
            ComplexVector ph[4];
            for (int o = 0; o < 4; ++o) ph[o] = g.clamped(o) * psi[k + K];
            for (int o = 0; o < 3; ++o) {
                for (const ComplexVector& u : {ComplexVector(ph[o + 1]), ComplexVector(xi * ph[o])}) {
                    for (int j = 0; j < n; ++j) {
                        const double s = std::sqrt(mode_weight(k) * g.weights()[j] * mult[o]);
                        B(at++, p) = s * u[j].real();
                        B(at++, p) = s * u[j].imag();
                    }
                }
            }
        }
    }
    const Eigen::HouseholderQR<RealMatrix> qr(B);
    const RealMatrix R = qr.matrixQR().topRows(P).triangularView<Eigen::Upper>();
    const auto Rtri = R.triangularView<Eigen::Upper>();

    // Best partner for a fixed argument: top singular pair of image(x) R^-1.
    auto best_partner = [&](const ModeSet& fixed, bool fixed_is_u) {
        RealMatrix A(4 * n * (K + 1), P);
        parallel_for(static_cast<std::size_t>(P), [&](std::size_t p) {
            RealVector e = RealVector::Zero(P);
            e[static_cast<Eigen::Index>(p)] = 1.0;
            const ModeSet psi = params_to_psi(e);
            A.col(static_cast<Eigen::Index>(p)) =
                force_image(fixed_is_u ? advect_pair(d, fixed, psi) : advect_pair(d, psi, fixed));
        });
        const RealMatrix S = Rtri.solve<Eigen::OnTheRight>(A);
        const Eigen::SelfAdjointEigenSolver<RealMatrix> es(S.transpose() * S);
        const RealVector z = es.eigenvectors().col(P - 1);
        return std::pair{std::sqrt(std::max(0.0, es.eigenvalues()[P - 1])), params_to_psi(Rtri.solve(z))};
    };

    C1Estimate est;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> degree(3, 12);
    ModeSet best_u, best_w;
    for (int s = 0; s < pairs; ++s) {
        const ModeSet u = random_stream_function(d, rng, 1.0, degree(rng));
        const ModeSet w = random_stream_function(d, rng, 1.0, degree(rng));
        const double nu = velocity_h2(d, u), nw = velocity_h2(d, w);
        if (nu == 0.0 || nw == 0.0) continue;
        const double r = force_l2(d, advect_pair(d, u, w)) / (nu * nw);
        if (r > est.sampled) {
            est.sampled = r;
            best_u = u;
            best_w = w;
        }
    }
    est.value = est.sampled;
    if (best_u.empty()) return est;
    ModeSet u = best_u, w = best_w;
    for (int it = 0; it < sweeps; ++it) {
        auto [su, nu] = best_partner(w, false);
        u = std::move(nu);
        auto [sw, nw] = best_partner(u, true);
        w = std::move(nw);
        ++est.sweeps;
        const double prev = est.value;
        est.value = std::max({est.value, su, sw});
        if (est.value <= prev * (1.0 + 1e-6)) break;
    }
    return est;
}

double contraction_radius(double kappa0, double c1) {
    if (!(kappa0 > 0.0) || !(c1 > 0.0)) throw DomainError("contraction_radius: constants must be positive");
    return 1.0 / (4.0 * kappa0 * c1);
}

double measure_contraction(const LinearChannelSolver& solver, const ForceModes& f, double delta, int pairs,
                           unsigned long seed) {
    if (!(delta > 0.0)) throw DomainError("measure_contraction: delta must be positive");
    const ChannelDiscretization& d = *solver.disc();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.1, 1.0);
    double best = 0.0;
    int done = 0;
    while (done < pairs) {
        const double r1 = radius(rng), r2 = radius(rng);
        const ModeSet w1 = random_stream_function(d, rng, delta * r1);
        const ModeSet w2 = random_stream_function(d, rng, delta * r2);
        const double den = velocity_h2(d, difference(w1, w2));
        if (den == 0.0) continue;
        const double num = velocity_h2(d, difference(picard_map(solver, f, w1), picard_map(solver, f, w2)));
        best = std::max(best, num / den);
        ++done;
    }
    return best;
}

UniquenessReport uniqueness_probe(const LinearChannelSolver& solver, int n_starts, double delta, double tol,
                                  std::optional<SymmetryClass> symmetry, unsigned long seed, int max_iter) {
    if (n_starts <= 0) throw DomainError("uniqueness_probe: need at least one start");
    const ChannelDiscretization& d = *solver.disc();
    const ForceModes zero = ForceModes::zero(d);
    PicardConfig cfg;
    cfg.delta = delta;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.symmetry_class = symmetry;
    cfg.validate();

    UniquenessReport rep;
    rep.delta = delta;
    rep.starts.resize(static_cast<std::size_t>(n_starts));
    parallel_for(static_cast<std::size_t>(n_starts), [&](std::size_t s) {
        std::mt19937_64 rng(seed + s);
        const double frac = n_starts == 1 ? 0.6 : 0.25 + 0.7 * static_cast<double>(s) / (n_starts - 1);
        ModeSet w0 = random_stream_function(d, rng, frac * delta);
        if (symmetry) w0 = project_psi(d, w0, *symmetry);
        ProbeStart& out = rep.starts[s];
        out.initial_norm = velocity_h2(d, w0);
        try {
            const PicardResult r = picard_solve(solver, zero, cfg, w0);
            out.iterations = static_cast<int>(r.trace.iterates.size());
            out.contraction_factor = r.trace.contraction_factor;
            out.final_norm = velocity_h2(d, r.field.psi);
            out.converged = r.trace.converged && out.final_norm <= tol;
        } catch (const SolverError& e) {
            out.error = e.what();
        }
    });
    rep.unique = std::all_of(rep.starts.begin(), rep.starts.end(), [](const ProbeStart& s) { return s.converged; });
    return rep;
}

ForceModes project_force(const ChannelDiscretization& d, const ForceModes& f, SymmetryClass c) {
    ForceModes out = f;
    const int K = d.K();
    const bool x_class = c == SymmetryClass::X1 || c == SymmetryClass::X2;
    // sign of the reflection applied to f; g takes the opposite sign
    const double sf = (c == SymmetryClass::X1 || c == SymmetryClass::Y1) ? 1.0 : -1.0;
    for (int k = -K; k <= K; ++k) {
        const std::size_t i = static_cast<std::size_t>(k + K);
        if (x_class) {
            const std::size_t j = static_cast<std::size_t>(-k + K);
            out.f[i] = 0.5 * (f.f[i] + sf * f.f[j]);
            out.g[i] = 0.5 * (f.g[i] - sf * f.g[j]);
        } else {
            out.f[i] = 0.5 * (f.f[i] + sf * f.f[i].reverse());
            out.g[i] = 0.5 * (f.g[i] - sf * f.g[i].reverse());
        }
    }
    return out;
}

} // namespace cpflow
