#include "gmfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gmfs/error.hpp"

namespace gmfs {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("Gauss rule needs at least one node");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on the recurrence.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pm = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule g = gauss_legendre(n);
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += g.weights[i] * f(c + h * g.nodes[i]);
    return h * acc;
}

int Spectral::effective() const {
    if (omega <= 0.0) return poly;
    return poly + static_cast<int>(std::ceil(omega + 10.0 * std::cbrt(omega) + 16.0));
}

Spectral basis_spectral(const BasisSystem& basis, int j) {
    if (basis.kind() == BasisKind::Legendre) return {j, 0.0};
    return {0, std::numbers::pi * BasisSystem::harmonic(j)};
}

int CollocationGrid::nodes_for(int integrand_degree, int final_degree) {
    return std::max({2, integrand_degree + 1, (final_degree + 2) / 2});
}

CollocationGrid::CollocationGrid(Interval interval, int n)
    : iv_(make_interval(interval.t, interval.T)), n_(n) {
    if (n < 1 || n > kMaxLegendreDegree)
        throw SizingError("collocation grid size " + std::to_string(n) + " outside [1, " +
                          std::to_string(kMaxLegendreDegree) + "]");
    const GaussRule g = gauss_legendre(n);
    const double half = 0.5 * iv_.length();
    s_.resize(n);
    w_.resize(n);
    for (int i = 0; i < n; ++i) {
        s_[i] = iv_.from_canonical(g.nodes[i]);
        w_[i] = half * g.weights[i];
    }
    // left = half * A * B with B the discrete Legendre transform on the nodes
    // and A the antiderivatives (P_{m+1} - P_{m-1}) / (2m + 1) at the nodes.
    Eigen::MatrixXd A(n, n), B(n, n);
    std::vector<double> P(n + 1);
    for (int i = 0; i < n; ++i) {
        const double x = g.nodes[i];
        legendre_P_all(x, P);
        A(i, 0) = x + 1.0;
        for (int m = 1; m < n; ++m) A(i, m) = (P[m + 1] - P[m - 1]) / (2.0 * m + 1.0);
        for (int m = 0; m < n; ++m) B(m, i) = 0.5 * (2.0 * m + 1.0) * g.weights[i] * P[m];
    }
    left_.noalias() = half * (A * B);
    right_ = -left_;
    right_.rowwise() += w_.transpose();
}

int resolve_degree(const std::function<double(double)>& f, const Interval& interval) {
    for (int n = 16; n <= 2048; n *= 2) {
        const GaussRule g = gauss_legendre(n);
        std::vector<double> fx(n), c(n, 0.0), P(n);
        for (int i = 0; i < n; ++i) {
            fx[i] = f(interval.from_canonical(g.nodes[i]));
            if (!std::isfinite(fx[i])) throw QuadratureError("weight is not finite on the interval");
        }
        for (int i = 0; i < n; ++i) {
            legendre_P_all(g.nodes[i], P);
            for (int m = 0; m < n; ++m) c[m] += 0.5 * (2.0 * m + 1.0) * g.weights[i] * P[m] * fx[i];
        }
        double scale = 0.0;
        for (double v : c) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) return 0;
        double tail = 0.0;
        for (int m = 3 * n / 4; m < n; ++m) tail = std::max(tail, std::abs(c[m]));
        if (tail <= 1e-14 * scale) {
            // Coefficients below the transform's own rounding floor carry no content.
            const double floor = std::max(1e-15, 4.0 * n * 2.2e-16) * scale;
            int deg = 0;
            for (int m = 0; m < n; ++m)
                if (std::abs(c[m]) > floor) deg = m;
            return deg;
        }
    }
    throw QuadratureError("weight not resolved by polynomial degree 2048 on the interval");
}

}  // namespace gmfs
