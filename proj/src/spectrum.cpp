#include "cpflow/spectrum.hpp"

#include "cpflow/error.hpp"
#include "cpflow/os_mode.hpp"
#include "cpflow/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

namespace cpflow {
namespace {

const cplx I(0.0, 1.0);

bool by_real_part(cplx a, cplx b) { return a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag()); }

std::vector<cplx> sorted_eigenvalues(const Eigen::ComplexEigenSolver<ComplexMatrix>& es) {
    std::vector<cplx> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end(), by_real_part);
    return v;
}

void check_T(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("spectrum: T must be positive");
}

using lcplx = std::complex<long double>;

/// Newton correction of an eigenpair of L x = lambda B x on the bordered
/// system [L - lambda B, -Bx; e_s^T, 0], with the residual accumulated in
/// long double.  The jitter of the eigenvalue then drops from the double
/// rounding level to the extended one.
void refine_eigenpair(const ComplexMatrix& L, const RealMatrix& B, ComplexVector& x_out, cplx& lambda_out) {
    const Eigen::Index m = L.rows();
    Eigen::Index s = 0;
    x_out.cwiseAbs().maxCoeff(&s);
    std::vector<lcplx> x(static_cast<std::size_t>(m));
    const lcplx scale = lcplx(1.0L) / lcplx(x_out[s]);
    for (Eigen::Index j = 0; j < m; ++j) x[j] = lcplx(x_out[j]) * scale;
    lcplx lam = lambda_out;

    for (int step = 0; step < 4; ++step) {
        ComplexVector xd(m), Bx(m), r(m);
        for (Eigen::Index j = 0; j < m; ++j) xd[j] = cplx(x[j]);
        for (Eigen::Index i = 0; i < m; ++i) {
            lcplx lx = 0.0L, bx = 0.0L;
            for (Eigen::Index j = 0; j < m; ++j) {
                lx += lcplx(L(i, j)) * x[j];
                bx += static_cast<long double>(B(i, j)) * x[j];
            }
            r[i] = cplx(lx - lam * bx);
            Bx[i] = cplx(bx);
        }
        ComplexMatrix K = ComplexMatrix::Zero(m + 1, m + 1);
        K.topLeftCorner(m, m) = L - cplx(lam) * B.cast<cplx>();
        K.topRightCorner(m, 1) = -Bx;
        K(m, s) = 1.0;
        ComplexVector rhs = ComplexVector::Zero(m + 1);
        rhs.head(m) = -r;
        const ComplexVector d = Eigen::PartialPivLU<ComplexMatrix>(K).solve(rhs);
        if (!d.allFinite()) return;
        for (Eigen::Index j = 0; j < m; ++j) x[j] += lcplx(d[j]);
        lam += lcplx(d[m]);
        if (std::abs(d[m]) <= 1e-17 * std::abs(cplx(lam))) break;
    }
    for (Eigen::Index j = 0; j < m; ++j) x_out[j] = cplx(x[j]);
    x_out.normalize();
    lambda_out = cplx(lam);
}

} // namespace

ComplexMatrix spectrum_lhs(double A, double T, const SpectralGrid& g) {
    check_T(T);
    const int m = g.interior_size();
    ComplexMatrix L = biharmonic_matrix(T, g);
    RealMatrix C2 = g.clamped(2).middleRows(1, m);
    C2.diagonal().array() -= T * T;
    RealVector F(m);
    for (int j = 0; j < m; ++j) {
        const double y = g.node(j + 1);
        F[j] = -3.0 * A * (1.0 - y * y);
    }
    RealMatrix S = F.asDiagonal() * C2;
    S.diagonal().array() -= 6.0 * A;
    L -= I * T * S.cast<cplx>();
    return L;
}

RealMatrix spectrum_rhs(double T, const SpectralGrid& g) {
    check_T(T);
    RealMatrix B = g.clamped(2).middleRows(1, g.interior_size());
    B.diagonal().array() -= T * T;
    return B;
}

ComplexMatrix spectrum_matrix(double A, double T, const SpectralGrid& g) {
    const Eigen::PartialPivLU<ComplexMatrix> lu(spectrum_rhs(T, g).cast<cplx>());
    return lu.solve(spectrum_lhs(A, T, g));
}

SpectrumResult os_spectrum(double A, double T, int N, std::optional<int> N_check, double match_tol, int min_resolved) {
    check_T(T);
    const int N2 = N_check.value_or(3 * N / 2);
    if (N2 == N) throw DomainError("os_spectrum: the check resolution must differ from N");
    const auto g = SpectralGrid::make(N);
    const auto g2 = SpectralGrid::make(N2);

    Eigen::ComplexEigenSolver<ComplexMatrix> es(spectrum_matrix(A, T, *g), true);
    Eigen::ComplexEigenSolver<ComplexMatrix> es2(spectrum_matrix(A, T, *g2), false);
    if (es.info() != Eigen::Success || es2.info() != Eigen::Success) {
        throw SolverError("os_spectrum: eigenvalue iteration did not converge");
    }
    const std::vector<cplx> check = sorted_eigenvalues(es2);

    std::vector<int> order(static_cast<std::size_t>(es.eigenvalues().size()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return by_real_part(es.eigenvalues()[a], es.eigenvalues()[b]); });

    SpectrumResult r;
    r.A = A;
    r.T = T;
    r.N = N;
    r.N_check = N2;
    for (int idx : order) {
        const cplx lam = es.eigenvalues()[idx];
        double best = std::numeric_limits<double>::infinity();
        for (cplx mu : check) best = std::min(best, std::abs(lam - mu));
        const bool ok = best <= match_tol * std::max(std::abs(lam), 1e-300);
        r.raw.push_back(lam);
        r.raw_resolved.push_back(ok);
        if (ok) {
            r.eigenvalues.push_back(lam);
            r.eigenvectors.push_back(es.eigenvectors().col(idx).normalized());
        }
    }
    r.n_resolved = static_cast<int>(r.eigenvalues.size());
    if (r.n_resolved < min_resolved) {
        std::ostringstream os;
        os << "os_spectrum: only " << r.n_resolved << " eigenvalues agree between N=" << N << " and N=" << N2
           << " (need " << min_resolved << ")";
        throw ResolutionError(os.str());
    }
    r.leading = r.eigenvalues.front();
    return r;
}

double verify_energy_identity(double A, double T, const SpectralGrid& g, const ComplexVector& interior, cplx lambda) {
    check_T(T);
    const int N = g.N();
    if (interior.size() != g.interior_size()) throw DomainError("verify_energy_identity: wrong vector length");
    // phi = (1 - y^2) q with q the degree-N interpolant of phi / (1 - y^2), q(+-1) = 0
    ComplexVector q = ComplexVector::Zero(N + 1);
    for (int j = 1; j < N; ++j) q[j] = interior[j - 1] / (1.0 - g.node(j) * g.node(j));
    const ComplexVector q1 = g.D(1) * q;
    const ComplexVector q2 = g.D(2) * q;

    const int M = 2 * N + 4;
    const RealVector y = chebyshev_nodes(M);
    const RealVector w = clenshaw_curtis_weights(M);
    const RealMatrix P = barycentric_matrix(N, y);
    const ComplexVector Q0 = P * q, Q1 = P * q1, Q2 = P * q2;

    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    cplx e = 0.0;
    for (int i = 0; i <= M; ++i) {
        const double s = 1.0 - y[i] * y[i];
        const cplx p0 = s * Q0[i];
        const cplx p1 = s * Q1[i] - 2.0 * y[i] * Q0[i];
        const cplx p2 = s * Q2[i] - 4.0 * y[i] * Q1[i] - 2.0 * Q0[i];
        a += w[i] * std::norm(p2);
        b += w[i] * std::norm(p1);
        c += w[i] * std::norm(p0);
        d += w[i] * s * (std::norm(p1) + T * T * std::norm(p0));
        e += w[i] * y[i] * p1 * std::conj(p0);
    }
    const cplx lhs = a + (2.0 * T * T + lambda) * b + (std::pow(T, 4) + lambda * T * T) * c;
    const cplx rhs = 3.0 * A * T * I * (d - 2.0 * c) - 6.0 * A * T * I * e;
    const double scale = a + std::abs(2.0 * T * T + lambda) * b + std::abs(std::pow(T, 4) + lambda * T * T) * c +
                         std::abs(3.0 * A * T) * (d + 2.0 * c) + std::abs(6.0 * A * T) * std::abs(e);
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

TrackedEigenpair track_eigenpair(const ComplexMatrix& L, const RealMatrix& B, cplx guess, const ComplexVector* start,
                                 int max_iter) {
    const Eigen::Index m = L.rows();
    const ComplexMatrix Bc = B.cast<cplx>();
    ComplexVector x = start ? *start : ComplexVector::Ones(m);
    x.normalize();
    TrackedEigenpair t;
    t.lambda = guess;
    const double scaleL = L.cwiseAbs().colwise().sum().maxCoeff();
    const double scaleB = B.cwiseAbs().colwise().sum().maxCoeff();
    cplx sigma = guess;
    Eigen::PartialPivLU<ComplexMatrix> lu(L - sigma * Bc);
    int since_factor = 0;
    double last_change = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        const ComplexVector y = lu.solve(Bc * x);
        if (!y.allFinite()) break;
        x = y.normalized();
        const ComplexVector Lx = L * x, Bx = Bc * x;
        const cplx lam = Bx.dot(Lx) / Bx.squaredNorm();
        t.residual = (Lx - lam * Bx).norm() / (scaleL + std::abs(lam) * scaleB);
        t.iterations = it + 1;
        const double change = std::abs(lam - t.lambda);
        t.lambda = lam;
        // converged, or stagnated at the rounding level of L x
        if (it >= 2 && (change <= 1e-14 * std::abs(lam) || (change >= last_change && change <= 1e-9 * std::abs(lam))))
            break;
        last_change = change;
        // the first shift locks onto the eigenvalue nearest the guess; later
        // shifts move to the current estimate when convergence is slow
        if (++since_factor >= 3 && change > 1e-10 * std::abs(lam)) {
            sigma = lam;
            lu.compute(L - sigma * Bc);
            since_factor = 0;
        }
    }
    refine_eigenpair(L, B, x, t.lambda);
    {
        const ComplexVector Lx = L * x, Bx = Bc * x;
        t.residual = (Lx - t.lambda * Bx).norm() / (scaleL + std::abs(t.lambda) * scaleB);
    }
    t.vector = x;
    return t;
}

TrackedEigenpair track_eigenpair(double A, double T, const SpectralGrid& g, cplx guess, const ComplexVector* start,
                                 int max_iter) {
    return track_eigenpair(spectrum_lhs(A, T, g), spectrum_rhs(T, g), guess, start, max_iter);
}

CertificateReport small_at_certificate(const std::vector<std::pair<double, double>>& AT_samples, int N) {
    CertificateReport rep;
    rep.samples.resize(AT_samples.size());
    parallel_for(AT_samples.size(), [&](std::size_t i) {
        const auto [A, T] = AT_samples[i];
        rep.samples[i] = {A, T, os_spectrum(A, T, N).leading};
    });
    rep.stable = std::all_of(rep.samples.begin(), rep.samples.end(),
                             [](const StabilitySample& s) { return s.leading.real() < 0.0; });
    return rep;
}

CertificateReport small_at_certificate(double AT_bound, int n_A, int n_T, double T_min, double T_max, int N) {
    if (!(AT_bound > 0.0)) throw DomainError("small_at_certificate: AT_bound must be positive");
    if (n_A < 1 || n_T < 1 || !(T_min > 0.0) || !(T_max >= T_min)) throw DomainError("small_at_certificate: bad grid");
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i < n_T; ++i) {
        const double T = n_T == 1 ? T_min : T_min + (T_max - T_min) * i / (n_T - 1);
        for (int j = 0; j < n_A; ++j) s.emplace_back(-AT_bound / T * (j + 1) / n_A, T);
    }
    return small_at_certificate(s, N);
}

double kernel_witness(const Profile& p, double xi, const SpectralGrid& g) {
    const Eigen::PartialPivLU<ComplexMatrix> bih(biharmonic_matrix(xi, g));
    const ComplexMatrix W = bih.solve(os_operator_matrix(p, xi, g));
    const Eigen::BDCSVD<ComplexMatrix> svd(W);
    const auto& s = svd.singularValues();
    return s[s.size() - 1] / s[0];
}

} // namespace cpflow
