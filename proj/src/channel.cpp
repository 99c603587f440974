#include "cpflow/channel.hpp"

#include "cpflow/error.hpp"
#include "cpflow/kernels.hpp"
#include "cpflow/parallel.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace cpflow {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::span<const cplx> cspan(const ComplexVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<cplx> cspan(ComplexVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

/// e^{2 pi i m / n}, with m reduced mod n first so the table is exact in m.
cplx root_of_unity(long long m, int n) {
    m %= n;
    if (m < 0) m += n;
    const double t = two_pi * static_cast<double>(m) / n;
    return {std::cos(t), std::sin(t)};
}

double weighted_energy(const SpectralGrid& g, const ComplexVector& u) {
    const auto& w = g.weights();
    return kernels::weighted_norm2({w.data(), static_cast<std::size_t>(w.size())}, cspan(u));
}

double interior_energy(const SpectralGrid& g, const ComplexVector& u) {
    double s = 0.0;
    for (int j = 1; j < g.N(); ++j) s += g.weights()[j] * std::norm(u[j]);
    return s;
}

/// Modes -M..M of a real field sampled at n equispaced points per period (n > 2M).
ModeSet dft_modes(const Field2D& f, int M) {
    const int n = static_cast<int>(f.rows());
    const int ny = static_cast<int>(f.cols());
    ModeSet out(2 * M + 1, ComplexVector::Zero(ny));
    for (int i = 0; i < n; ++i) {
        const std::span<const double> row(f.row(i).data(), static_cast<std::size_t>(ny));
        for (int k = -M; k <= M; ++k) {
            const cplx c = root_of_unity(-static_cast<long long>(k) * i, n) / static_cast<double>(n);
            kernels::accumulate_scaled(c, row, cspan(out[k + M]));
        }
    }
    return out;
}

void check_tail(const SpectralGrid& g, const ModeSet& fx, const ModeSet& fy, int M, int K, double tol) {
    double total = 0.0, tail = 0.0;
    for (int k = -M; k <= M; ++k) {
        const double e = weighted_energy(g, fx[k + M]) + weighted_energy(g, fy[k + M]);
        total += e;
        if (std::abs(k) > K) tail += e;
    }
    if (total > 0.0 && tail > tol * total) {
        std::ostringstream os;
        os << "force not resolved by K=" << K << ": tail energy fraction " << tail / total << " exceeds " << tol;
        throw ResolutionError(os.str());
    }
}

ModeSet truncate(const ModeSet& m, int M, int K) {
    ModeSet out(2 * K + 1);
    for (int k = -K; k <= K; ++k) out[k + K] = (std::abs(k) <= M) ? m[k + M] : ComplexVector::Zero(m[0].size());
    return out;
}

} // namespace

// ------------------------------------------------------------ discretization

ChannelDiscretization::ChannelDiscretization(double xi0, int K, GridPtr grid) : xi0_(xi0), K_(K), grid_(std::move(grid)) {
    if (!(xi0 > 0.0) || !std::isfinite(xi0)) throw DomainError("channel: xi0 must be positive");
    if (K < 0) throw DomainError("channel: K must be non-negative");
    if (!grid_) throw DomainError("channel: null grid");
}

ChannelDiscretization::ChannelDiscretization(double xi0, int K, int N)
    : ChannelDiscretization(xi0, K, SpectralGrid::make(N)) {}

double ChannelDiscretization::period() const noexcept { return two_pi / xi0_; }

ModeSet ChannelDiscretization::zero_modes() const { return ModeSet(modes(), ComplexVector::Zero(ny())); }

Field2D ChannelDiscretization::synthesize(const ModeSet& m) const {
    if (static_cast<int>(m.size()) != modes()) throw DomainError("synthesize: wrong number of modes");
    const int n = nx();
    Field2D out = Field2D::Zero(n, ny());
    const ComplexVector m0 = m[K_].real().cast<cplx>();
    for (int i = 0; i < n; ++i) {
        std::span<double> row(out.row(i).data(), static_cast<std::size_t>(ny()));
        kernels::accumulate_real(1.0, cspan(m0), row);
        for (int k = 1; k <= K_; ++k) {
            kernels::accumulate_real(2.0 * root_of_unity(static_cast<long long>(k) * i, n), cspan(m[k + K_]), row);
        }
    }
    return out;
}

ModeSet ChannelDiscretization::analyse(const Field2D& f) const {
    if (f.rows() != nx() || f.cols() != ny()) throw DomainError("analyse: field shape mismatch");
    return dft_modes(f, K_);
}

double ChannelDiscretization::l2_norm_squared(const ModeSet& m) const {
    double s = 0.0;
    for (const auto& u : m) s += weighted_energy(*grid_, u);
    return period() * s;
}

// ------------------------------------------------------------------- forces

ForceModes ForceModes::zero(const ChannelDiscretization& d) { return {d.zero_modes(), d.zero_modes()}; }

ForceModes ForceModes::from_functions(const ChannelDiscretization& d, const std::function<double(double, double)>& fx,
                                      const std::function<double(double, double)>& fy, double tail_tolerance) {
    const int M = 4 * d.K() + 4;
    const int n = 2 * M + 2;
    Field2D a(n, d.ny()), b(n, d.ny());
    for (int i = 0; i < n; ++i) {
        const double x = d.period() * i / n;
        for (int j = 0; j < d.ny(); ++j) {
            const double y = d.grid()->node(j);
            a(i, j) = fx(x, y);
            b(i, j) = fy(x, y);
        }
    }
    if (!a.allFinite() || !b.allFinite()) throw DomainError("force: non-finite samples");
    const ModeSet ma = dft_modes(a, M), mb = dft_modes(b, M);
    check_tail(*d.grid(), ma, mb, M, d.K(), tail_tolerance);
    return {truncate(ma, M, d.K()), truncate(mb, M, d.K())};
}

ForceModes ForceModes::from_grid(const ChannelDiscretization& d, const Field2D& fx, const Field2D& fy,
                                 double tail_tolerance) {
    if (fx.rows() != d.nx() || fx.cols() != d.ny() || fy.rows() != d.nx() || fy.cols() != d.ny()) {
        throw DomainError("force: field shape mismatch");
    }
    const int M = (d.nx() - 1) / 2;
    const ModeSet ma = dft_modes(fx, M), mb = dft_modes(fy, M);
    check_tail(*d.grid(), ma, mb, M, d.K(), tail_tolerance);
    return {truncate(ma, M, d.K()), truncate(mb, M, d.K())};
}

double ForceModes::l2_norm(const ChannelDiscretization& d) const {
    return std::sqrt(d.l2_norm_squared(f) + d.l2_norm_squared(g));
}

ForceModes& ForceModes::operator+=(const ForceModes& o) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] += o.f[k];
        g[k] += o.g[k];
    }
    return *this;
}

ForceModes& ForceModes::operator*=(double s) {
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] *= s;
        g[k] *= s;
    }
    return *this;
}

// -------------------------------------------------------------------- field

ComplexVector ChannelField::psi_derivative(int k, int order) const {
    return disc->grid()->clamped(order) * psi[k + disc->K()];
}

ModeSet ChannelField::psi_modes(int order) const {
    ModeSet out(psi.size());
    for (int k = -disc->K(); k <= disc->K(); ++k) out[k + disc->K()] = psi_derivative(k, order);
    return out;
}

ModeSet ChannelField::v_modes(int y_order) const { return psi_modes(y_order + 1); }

ModeSet ChannelField::w_modes(int y_order) const {
    ModeSet out(psi.size());
    for (int k = -disc->K(); k <= disc->K(); ++k) {
        out[k + disc->K()] = cplx(0.0, -disc->wavenumber(k)) * psi_derivative(k, y_order);
    }
    return out;
}

Field2D ChannelField::psi_field() const { return disc->synthesize(psi_modes(0)); }

double ChannelField::velocity_norm(int m) const { return cell_norm(*disc, velocity_components(*this), m); }

double ChannelField::velocity_h2() const { return velocity_norm(2); }

double ChannelField::pressure_gradient_l2() const {
    if (qx_hat.empty()) return 0.0;
    return std::sqrt(disc->l2_norm_squared(qx_hat) + disc->l2_norm_squared(qy_hat));
}

ChannelField field_from_psi(std::shared_ptr<const ChannelDiscretization> disc, ModeSet psi) {
    const int K = disc->K();
    if (static_cast<int>(psi.size()) != disc->modes()) throw DomainError("field_from_psi: wrong number of modes");
    for (auto& p : psi) {
        if (p.size() != disc->grid()->interior_size()) throw DomainError("field_from_psi: wrong mode length");
    }
    psi[K] = psi[K].real().cast<cplx>();
    for (int k = 1; k <= K; ++k) psi[K - k] = psi[K + k].conjugate();
    ChannelField f;
    f.disc = std::move(disc);
    f.psi = std::move(psi);
    f.v = f.disc->synthesize(f.v_modes(0));
    f.w = f.disc->synthesize(f.w_modes(0));
    return f;
}

// ------------------------------------------------------------------- solver

LinearChannelSolver::LinearChannelSolver(const Profile& p, std::shared_ptr<const ChannelDiscretization> disc)
    : profile_(p), disc_(std::move(disc)) {
    const int K = disc_->K();
    std::vector<std::optional<OsModeOperator>> slots(K + 1);
    parallel_for(static_cast<std::size_t>(K + 1), [&](std::size_t k) {
        if (k == 0) {
            slots[0].emplace(OsModeOperator::zero_mode(disc_->grid()));
        } else {
            slots[k].emplace(profile_, disc_->wavenumber(static_cast<int>(k)), disc_->grid());
        }
    });
    ops_.reserve(K + 1);
    for (auto& s : slots) ops_.push_back(std::move(*s));
}

double LinearChannelSolver::worst_relative_condition() const {
    double r = 1.0;
    for (const auto& op : ops_) r = std::max(r, op.relative_condition());
    return r;
}

ChannelField LinearChannelSolver::solve(const ForceModes& force) const {
    const ChannelDiscretization& d = *disc_;
    const int K = d.K();
    if (static_cast<int>(force.f.size()) != d.modes() || static_cast<int>(force.g.size()) != d.modes()) {
        throw DomainError("linear solve: force has wrong number of modes");
    }
    const RealMatrix& D1 = d.grid()->D(1);
    ModeSet psi(d.modes(), ComplexVector::Zero(d.grid()->interior_size()));
    parallel_for(static_cast<std::size_t>(K + 1), [&](std::size_t kk) {
        const int k = static_cast<int>(kk);
        const double xi = d.wavenumber(k);
        const ComplexVector h = cplx(0.0, xi) * force.g[k + K] - D1 * force.f[k + K];
        psi[k + K] = ops_[k].solve(h).interior;
    });
    ChannelField field = field_from_psi(disc_, std::move(psi));
    PressureReport pr = recover_pressure_gradient(profile_, field, force);
    field.qx_hat = std::move(pr.qx_hat);
    field.qy_hat = std::move(pr.qy_hat);
    field.qx = std::move(pr.qx);
    field.qy = std::move(pr.qy);
    field.beta = pr.beta;
    field.curl_residual = pr.curl_residual;
    return field;
}

ChannelField solve_linearized(const Profile& p, std::shared_ptr<const ChannelDiscretization> disc,
                              const ForceModes& force) {
    require_admissible(p, "solve_linearized");
    return LinearChannelSolver(p, std::move(disc)).solve(force);
}

PressureReport recover_pressure_gradient(const Profile& p, const ChannelField& field, const ForceModes& force) {
    const ChannelDiscretization& d = *field.disc;
    const SpectralGrid& g = *d.grid();
    const int K = d.K(), ny = g.size();
    const RealMatrix& D1 = g.D(1);
    RealVector F(ny), Fp(ny);
    for (int j = 0; j < ny; ++j) {
        F[j] = p.F(g.node(j));
        Fp[j] = p.Fp(g.node(j));
    }
    const cplx I(0.0, 1.0);

    PressureReport r;
    r.qx_hat.assign(d.modes(), ComplexVector::Zero(ny));
    r.qy_hat.assign(d.modes(), ComplexVector::Zero(ny));
    double res2 = 0.0, scale = 0.0;
    for (int k = 0; k <= K; ++k) {
        const double xi = d.wavenumber(k);
        ComplexVector ph[4];
        for (int o = 0; o < 4; ++o) ph[o] = field.psi_derivative(k, o);
        const ComplexVector v = ph[1];
        const ComplexVector w = -I * xi * ph[0];
        const ComplexVector lap_v = ph[3] - xi * xi * ph[1];
        const ComplexVector lap_w = -I * xi * (ph[2] - xi * xi * ph[0]);
        const ComplexVector adv_x = (I * xi * (F.cast<cplx>().cwiseProduct(v))) + Fp.cast<cplx>().cwiseProduct(w);
        const ComplexVector adv_y = I * xi * F.cast<cplx>().cwiseProduct(w);
        const ComplexVector qx = force.f[k + K] + lap_v - adv_x;
        const ComplexVector qy = force.g[k + K] + lap_w - adv_y;
        r.qx_hat[k + K] = qx;
        r.qy_hat[k + K] = qy;
        if (k > 0) {
            r.qx_hat[K - k] = qx.conjugate();
            r.qy_hat[K - k] = qy.conjugate();
        }

        const ComplexVector curl = D1 * qx - I * xi * qy;
        const double mult = (k == 0) ? 1.0 : 2.0;
        res2 += mult * interior_energy(g, curl);
        double s = 0.0;
        for (const ComplexVector& t : {ComplexVector(D1 * force.f[k + K]), ComplexVector(xi * force.g[k + K]),
                                       ComplexVector(D1 * lap_v), ComplexVector(xi * lap_w),
                                       ComplexVector(D1 * adv_x), ComplexVector(xi * adv_y)}) {
            s += std::sqrt(interior_energy(g, t));
        }
        scale += mult * s * s;
    }
    r.curl_residual = scale > 0.0 ? std::sqrt(res2 / scale) : std::sqrt(res2);
    r.beta = 0.5 * g.integrate(r.qx_hat[K]).real();
    r.qx = d.synthesize(r.qx_hat);
    r.qy = d.synthesize(r.qy_hat);
    return r;
}

KinematicReport kinematic_report(const ChannelField& field) {
    const ChannelDiscretization& d = *field.disc;
    const SpectralGrid& g = *d.grid();
    const int K = d.K(), N = g.N();
    KinematicReport r;

    // v_x spectrally in x from the physical v; w_y by collocation on physical w.
    ModeSet vh = d.analyse(field.v);
    for (int k = -K; k <= K; ++k) vh[k + K] *= cplx(0.0, d.wavenumber(k));
    const Field2D vx = d.synthesize(vh);
    const Field2D wy = (g.D(1) * field.w.transpose()).transpose();
    r.divergence_max = (vx + wy).cwiseAbs().maxCoeff();

    for (int i = 0; i < d.nx(); ++i) {
        r.wall_max = std::max({r.wall_max, std::abs(field.v(i, 0)), std::abs(field.v(i, N)), std::abs(field.w(i, 0)),
                               std::abs(field.w(i, N))});
        double flux = 0.0;
        for (int j = 0; j <= N; ++j) flux += g.weights()[j] * field.v(i, j);
        r.flux_max = std::max(r.flux_max, std::abs(flux));
    }

    const Field2D psi = field.psi_field();
    const Field2D psi_y = (g.D(1) * psi.transpose()).transpose();
    ModeSet ph = d.analyse(psi);
    for (int k = -K; k <= K; ++k) ph[k + K] *= cplx(0.0, d.wavenumber(k));
    const Field2D psi_x = d.synthesize(ph);
    r.stream_max = std::max((field.v - psi_y).cwiseAbs().maxCoeff(), (field.w + psi_x).cwiseAbs().maxCoeff());

    for (int k = 1; k <= K; ++k) {
        r.reality = std::max(r.reality, (field.psi[K - k] - field.psi[K + k].conjugate()).cwiseAbs().maxCoeff());
    }
    r.reality = std::max(r.reality, field.psi[K].imag().cwiseAbs().maxCoeff());
    return r;
}

} // namespace cpflow
