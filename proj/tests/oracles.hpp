#pragma once

// Independent reference computations for the tests.  Nothing here calls into
// the library's quadrature or differentiation code.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>

namespace oracle {

/// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double dp = (std::abs(x) < 1.0) ? n * (x * p1 - p0) / (x * x - 1.0) : 0.5 * n * (n + 1) * std::pow(x, n + 1);
    return {p1, dp};
}

struct Rule {
    std::vector<double> x, w;
};

/// n-point Gauss–Legendre rule on [a,b] by Newton iteration on P_n.
inline Rule gauss_legendre(int n, double a = -1.0, double b = 1.0) {
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto [p, dp] = legendre(n, x);
        (void)p;
        r.x[i] = 0.5 * (b - a) * x + 0.5 * (b + a);
        r.w[i] = (b - a) / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

/// ||h||_{H^-1} by Galerkin assembly over the basis (1-y^2) P_j, j < m.
/// Exact when h is a polynomial of degree < m.
template <class H>
double h_minus1_galerkin(const H& h, int m) {
    const Rule q = gauss_legendre(m + 40);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < q.x.size(); ++k) {
        const double y = q.x[k];
        Eigen::VectorXd b(m), db(m);
        for (int j = 0; j < m; ++j) {
            const auto [p, dp] = legendre(j, y);
            b[j] = (1.0 - y * y) * p;
            db[j] = -2.0 * y * p + (1.0 - y * y) * dp;
        }
        G += q.w[k] * db * db.transpose();
        rhs += q.w[k] * h(y) * b;
    }
    const Eigen::VectorXd c = G.ldlt().solve(rhs);
    return std::sqrt(rhs.dot(c));
}


/// Chebyshev coefficients of the derivative of a Chebyshev series.
inline Eigen::VectorXd cheb_coeff_derivative(const Eigen::VectorXd& a) {
    const Eigen::Index n = a.size();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = n - 2; k >= 0; --k) b[k] = (k + 2 < n ? b[k + 2] : 0.0) + 2.0 * (k + 1) * a[k + 1];
    b[0] *= 0.5;
    return b;
}

/// Chebyshev coefficients of y times a series (length is kept; the caller
/// leaves room for the degree increase).
inline Eigen::VectorXd cheb_coeff_times_y(const Eigen::VectorXd& a) {
    const Eigen::Index n = a.size();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (k == 0) {
            b[1] += a[0];
        } else {
            b[k + 1] += 0.5 * a[k];
            b[k - 1] += 0.5 * a[k];
        }
    }
    return b;
}

/// Phase speeds c of the classical plane-Poiseuille problem
///   (U - c)(D^2 - a^2) phi - U'' phi = (D^2 - a^2)^2 phi / (i a Re),  U = 1 - y^2,
/// phi(+-1) = phi'(+-1) = 0, by a Chebyshev tau method in coefficient space on
/// the basis (1 - y^2)^2 T_j, j = 0..M.
inline Eigen::VectorXcd poiseuille_phase_speeds(double a, double Re, int M) {
    using cd = std::complex<double>;
    const int Q = M + 8;
    const int n = M + 1;
    Eigen::MatrixXd Lap(n, n), Bih(n, n), Adv(n, n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd t = Eigen::VectorXd::Zero(Q);
        t[j] = 1.0;
        Eigen::VectorXd s = t - cheb_coeff_times_y(cheb_coeff_times_y(t));
        const Eigen::VectorXd phi = s - cheb_coeff_times_y(cheb_coeff_times_y(s));
        const Eigen::VectorXd lap = cheb_coeff_derivative(cheb_coeff_derivative(phi)) - a * a * phi;
        const Eigen::VectorXd bih = cheb_coeff_derivative(cheb_coeff_derivative(lap)) - a * a * lap;
        // U lap - U'' phi with U'' = -2
        const Eigen::VectorXd adv = lap - cheb_coeff_times_y(cheb_coeff_times_y(lap)) + 2.0 * phi;
        Lap.col(j) = lap.head(n);
        Bih.col(j) = bih.head(n);
        Adv.col(j) = adv.head(n);
    }
    const Eigen::MatrixXcd rhs = Adv.cast<cd>() - Bih.cast<cd>() / cd(0.0, a * Re);
    const Eigen::MatrixXcd S = Lap.cast<cd>().partialPivLu().solve(rhs);
    return Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(S, false).eigenvalues();
}

} // namespace oracle
