#include "cpflow/spectral.hpp"

#include "cpflow/error.hpp"
#include "cpflow/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cpflow {
namespace {

constexpr double pi = std::numbers::pi;

void reset_diagonal(RealMatrix& D) {
    for (Eigen::Index i = 0; i < D.rows(); ++i) {
        D(i, i) = 0.0;
        D(i, i) = -D.row(i).sum();
    }
}

RealMatrix first_derivative(int N) {
    const int n = N + 1;
    RealMatrix D = RealMatrix::Zero(n, n);
    auto c = [N](int j) { return (j == 0 || j == N) ? 2.0 : 1.0; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            // y_i - y_j = 2 sin(pi (i+j) / 2N) sin(pi (j-i) / 2N)
            const double diff = 2.0 * std::sin(pi * (i + j) / (2.0 * N)) * std::sin(pi * (j - i) / (2.0 * N));
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            D(i, j) = sign * c(i) / (c(j) * diff);
        }
    }
    return D;
}

RealVector clenshaw_curtis(int N) {
    RealVector w = RealVector::Zero(N + 1);
    RealVector v = RealVector::Ones(N - 1);
    auto theta = [N](int j) { return pi * j / N; };
    if (N % 2 == 0) {
        w[0] = w[N] = 1.0 / (static_cast<double>(N) * N - 1.0);
        for (int k = 1; k < N / 2; ++k) {
            for (int j = 1; j < N; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
        }
        for (int j = 1; j < N; ++j) v[j - 1] -= std::cos(N * theta(j)) / (static_cast<double>(N) * N - 1.0);
    } else {
        w[0] = w[N] = 1.0 / (static_cast<double>(N) * N);
        for (int k = 1; k <= (N - 1) / 2; ++k) {
            for (int j = 1; j < N; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
        }
    }
    for (int j = 1; j < N; ++j) w[j] = 2.0 * v[j - 1] / N;
    return w;
}

} // namespace

RealVector chebyshev_nodes(int N) {
    if (N < 1) throw DomainError("chebyshev_nodes: N must be positive");
    const int n = N + 1;
    RealVector y(n);
    for (int j = 0; j < n; ++j) y[j] = std::cos(pi * j / N);
    // exact symmetry and zero at the centre
    for (int j = 0; j < n / 2; ++j) y[N - j] = -y[j];
    if (N % 2 == 0) y[N / 2] = 0.0;
    return y;
}

RealVector clenshaw_curtis_weights(int N) {
    if (N < 2) throw DomainError("clenshaw_curtis_weights: N must be at least 2");
    return clenshaw_curtis(N);
}

RealMatrix barycentric_matrix(int N, const RealVector& x) {
    const RealVector y = chebyshev_nodes(N);
    RealMatrix P = RealMatrix::Zero(x.size(), N + 1);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        int hit = -1;
        for (int j = 0; j <= N; ++j) {
            if (x[i] == y[j]) hit = j;
        }
        if (hit >= 0) {
            P(i, hit) = 1.0;
            continue;
        }
        double den = 0.0;
        for (int j = 0; j <= N; ++j) {
            const double b = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == N) ? 0.5 : 1.0) / (x[i] - y[j]);
            P(i, j) = b;
            den += b;
        }
        P.row(i) /= den;
    }
    return P;
}

SpectralGrid::SpectralGrid(int N) : N_(N) {
    if (N < 8) throw DomainError("SpectralGrid: N must be at least 8, got " + std::to_string(N));
    const int n = N + 1;
    nodes_ = chebyshev_nodes(N);
    weights_ = clenshaw_curtis(N);

    D_[0] = first_derivative(N);
    reset_diagonal(D_[0]);
    for (int k = 1; k < 4; ++k) {
        D_[k] = D_[k - 1] * D_[0];
        reset_diagonal(D_[k]);
    }

    // phi = (1 - y^2) g, g = S phi with S = diag(1/(1 - y_j^2)) on interior nodes.
    const int m = N - 1;
    RealMatrix S = RealMatrix::Zero(n, m);
    for (int j = 1; j < N; ++j) S(j, j - 1) = 1.0 / (1.0 - nodes_[j] * nodes_[j]);
    const RealVector one_minus_y2 = (1.0 - nodes_.array().square()).matrix();
    auto Dk = [&](int k) -> RealMatrix {
        if (k == 0) return RealMatrix::Identity(n, n);
        return D_[k - 1];
    };
    for (int k = 0; k <= 4; ++k) {
        RealMatrix G = one_minus_y2.asDiagonal() * Dk(k);
        if (k >= 1) G -= 2.0 * k * (nodes_.asDiagonal() * Dk(k - 1));
        if (k >= 2) G -= static_cast<double>(k * (k - 1)) * Dk(k - 2);
        clamped_[k] = G * S;
    }

    neg_laplacian_.compute(-D_[1].block(1, 1, m, m));
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make(int N) { return std::make_shared<const SpectralGrid>(N); }

const RealMatrix& SpectralGrid::D(int order) const {
    if (order < 1 || order > 4) throw DomainError("SpectralGrid::D: order must be 1..4");
    return D_[order - 1];
}

const RealMatrix& SpectralGrid::clamped(int order) const {
    if (order < 0 || order > 4) throw DomainError("SpectralGrid::clamped: order must be 0..4");
    return clamped_[order];
}

double SpectralGrid::integrate(std::span<const double> values) const {
    return kernels::weighted_sum({weights_.data(), static_cast<std::size_t>(weights_.size())}, values);
}

cplx SpectralGrid::integrate(const ComplexVector& values) const {
    cplx s = 0.0;
    for (int j = 0; j <= N_; ++j) s += weights_[j] * values[j];
    return s;
}

ComplexVector SpectralGrid::dirichlet_poisson(const ComplexVector& h) const {
    const int m = N_ - 1;
    ComplexVector u = ComplexVector::Zero(N_ + 1);
    const ComplexVector rhs = h.segment(1, m);
    RealVector re = neg_laplacian_.solve(rhs.real());
    RealVector im = neg_laplacian_.solve(rhs.imag());
    for (int j = 0; j < m; ++j) u[j + 1] = {re[j], im[j]};
    return u;
}

GridFunction::GridFunction(GridPtr g, ComplexVector v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw DomainError("GridFunction: null grid");
    if (values.size() != grid->size()) throw DomainError("GridFunction: length does not match grid");
}

GridFunction GridFunction::sample(GridPtr g, const std::function<cplx(double)>& f) {
    ComplexVector v(g->size());
    for (int j = 0; j < g->size(); ++j) v[j] = f(g->node(j));
    return GridFunction(std::move(g), std::move(v));
}

GridFunction GridFunction::constant(GridPtr g, cplx c) {
    ComplexVector v = ComplexVector::Constant(g->size(), c);
    return GridFunction(std::move(g), std::move(v));
}

GridFunction GridFunction::derivative(int order) const {
    if (order == 0) return *this;
    return GridFunction(grid, grid->D(order) * values);
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    if (o.grid != grid && o.values.size() != values.size()) throw DomainError("GridFunction: grid mismatch");
    values += o.values;
    return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
    values *= s;
    return *this;
}

double l2_norm_squared(const GridFunction& f) {
    const auto& w = f.grid->weights();
    return kernels::weighted_norm2({w.data(), static_cast<std::size_t>(w.size())},
                                   {f.values.data(), static_cast<std::size_t>(f.values.size())});
}

double l2_norm(const GridFunction& f) { return std::sqrt(l2_norm_squared(f)); }

cplx l2_inner(const GridFunction& a, const GridFunction& b) {
    const auto& w = a.grid->weights();
    const auto n = static_cast<std::size_t>(w.size());
    return kernels::weighted_dot({w.data(), n}, {a.values.data(), n}, {b.values.data(), n});
}

double sobolev_norm(const GridFunction& f, int m) {
    if (m < 0 || m > 3) throw DomainError("sobolev_norm: m must be in {0,1,2,3}");
    double s = l2_norm_squared(f);
    for (int k = 1; k <= m; ++k) s += l2_norm_squared(f.derivative(k));
    return std::sqrt(s);
}

double h_minus1_norm(const GridFunction& h) {
    const ComplexVector u = h.grid->dirichlet_poisson(h.values);
    return l2_norm(GridFunction(h.grid, h.grid->D(1) * u));
}

} // namespace cpflow
