#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <span>

namespace cpflow {

using cplx = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Chebyshev–Gauss–Lobatto points cos(pi j / N), j = 0..N (descending).
RealVector chebyshev_nodes(int N);

/// Clenshaw–Curtis weights on those points; exact for degree <= N.
RealVector clenshaw_curtis_weights(int N);

/// Barycentric interpolation from the N+1 Lobatto points to the points x.
RealMatrix barycentric_matrix(int N, const RealVector& x);

/// Chebyshev–Gauss–Lobatto collocation on [-1,1].
///
/// Nodes are stored in descending order, y_j = cos(pi j / N), so y_0 = 1 and
/// y_N = -1.  D1 uses the trigonometric form of the node differences; D2..D4
/// are powers of D1, and every Dk has its diagonal reset so rows sum to zero.
///
/// Clamped functions (phi(+-1) = phi'(+-1) = 0) are represented as
/// phi = (1 - y^2) g with g(+-1) = 0 and parametrised by the N-1 interior
/// nodal values of phi.  clamped(k) maps those values to phi^(k) at all N+1
/// nodes; every derivative is exact for the same degree-(N+2) polynomial.
class SpectralGrid {
public:
    explicit SpectralGrid(int N);

    static std::shared_ptr<const SpectralGrid> make(int N);

    int N() const noexcept { return N_; }
    int size() const noexcept { return N_ + 1; }
    int interior_size() const noexcept { return N_ - 1; }

    const RealVector& nodes() const noexcept { return nodes_; }
    double node(int j) const noexcept { return nodes_[j]; }

    /// Ordinary differentiation matrix of order 1..4, (N+1) x (N+1).
    const RealMatrix& D(int order) const;

    /// Clamped-representation derivative matrix of order 0..4, (N+1) x (N-1).
    const RealMatrix& clamped(int order) const;

    /// Clenshaw–Curtis weights on the same nodes.
    const RealVector& weights() const noexcept { return weights_; }

    double integrate(std::span<const double> values) const;
    cplx integrate(const ComplexVector& values) const;

    /// Solves -u'' = h at the interior nodes with u(+-1) = 0.
    ComplexVector dirichlet_poisson(const ComplexVector& h) const;

private:
    int N_;
    RealVector nodes_;
    RealVector weights_;
    RealMatrix D_[4];
    RealMatrix clamped_[5];
    Eigen::PartialPivLU<RealMatrix> neg_laplacian_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Complex nodal values on a grid.
struct GridFunction {
    GridPtr grid;
    ComplexVector values;

    GridFunction() = default;
    GridFunction(GridPtr g, ComplexVector v);

    /// Samples f at the nodes.
    static GridFunction sample(GridPtr g, const std::function<cplx(double)>& f);
    static GridFunction constant(GridPtr g, cplx c);

    int size() const noexcept { return static_cast<int>(values.size()); }

    /// k-th derivative of the degree-N interpolant.
    GridFunction derivative(int order) const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator*=(cplx s);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator*(cplx s, GridFunction a) { return a *= s; }
};

/// integral of |f|^2 by Clenshaw–Curtis quadrature.
double l2_norm_squared(const GridFunction& f);
double l2_norm(const GridFunction& f);

/// integral of a conj(b).
cplx l2_inner(const GridFunction& a, const GridFunction& b);

/// (sum_{k<=m} ||D^k f||^2)^(1/2), m in {0,1,2,3}.
double sobolev_norm(const GridFunction& f, int m);

/// Dual norm of h against H^1_0(-1,1), realised as ||u'|| where -u'' = h, u(+-1) = 0.
double h_minus1_norm(const GridFunction& h);

} // namespace cpflow
