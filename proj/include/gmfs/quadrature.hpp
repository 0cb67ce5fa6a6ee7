#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "gmfs/basis.hpp"

namespace gmfs {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Fixed-order Gauss integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Polynomial degree plus oscillation content of an integrand, measured in the
/// canonical variable z in [-1, 1].
struct Spectral {
    int poly = 0;
    double omega = 0.0;

    Spectral operator+(const Spectral& o) const { return {poly + o.poly, omega + o.omega}; }
    /// Degree of a polynomial that reproduces the integrand to rounding.
    int effective() const;
};

/// Spectral content of basis function j.
Spectral basis_spectral(const BasisSystem& basis, int j);

/// Gauss nodes on [t, T] with exact left/right integration matrices:
/// (left f)_i = \int_t^{s_i} f and (right f)_i = \int_{s_i}^T f for f of degree < n.
class CollocationGrid {
public:
    CollocationGrid(Interval interval, int n);

    int size() const noexcept { return n_; }
    const Interval& interval() const noexcept { return iv_; }
    const Eigen::VectorXd& nodes() const noexcept { return s_; }
    const Eigen::VectorXd& weights() const noexcept { return w_; }
    const Eigen::MatrixXd& left() const noexcept { return left_; }
    const Eigen::MatrixXd& right() const noexcept { return right_; }

    /// Smallest n such that integrands of the given effective degree are
    /// integrated exactly by left/right and a final product of degree
    /// final_degree by the Gauss weights.
    static int nodes_for(int integrand_degree, int final_degree);

private:
    Interval iv_;
    int n_;
    Eigen::VectorXd s_, w_;
    Eigen::MatrixXd left_, right_;
};

/// Degree of a polynomial interpolant that resolves f on the interval to
/// relative 1e-14; throws QuadratureError if no degree up to 2048 does.
int resolve_degree(const std::function<double(double)>& f, const Interval& interval);

}  // namespace gmfs
