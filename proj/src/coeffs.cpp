#include "gmfs/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmfs/error.hpp"
#include "gmfs/quadrature.hpp"
#include "internal/grid_tools.hpp"

namespace gmfs {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

CoeffTensor::CoeffTensor(std::vector<int> p, BasisSystem basis, std::vector<WeightFn> weights,
                         std::vector<double> values)
    : p_(std::move(p)), basis_(basis), weights_(std::move(weights)), values_(std::move(values)) {
    if (p_.empty() || p_.size() > 4) throw DimensionError("tensor multiplicity must be 1..4");
    if (weights_.size() != p_.size()) throw DimensionError("one weight per tensor dimension");
    strides_.assign(p_.size(), 1);
    for (int l = k() - 2; l >= 0; --l) strides_[l] = strides_[l + 1] * (p_[l + 1] + 1);
    if (values_.size() != strides_[0] * (p_[0] + 1))
        throw DimensionError("tensor value count does not match its orders");
}

double CoeffTensor::at(std::span<const int> j) const {
    if (static_cast<int>(j.size()) != k()) throw DimensionError("index length differs from k");
    std::size_t off = 0;
    for (int l = 0; l < k(); ++l) {
        if (j[l] < 0 || j[l] > p_[l]) throw DimensionError("tensor index out of range");
        off += j[l] * strides_[l];
    }
    return values_[off];
}

std::vector<WeightFn> uniform_weights(int k, const WeightFn& w) {
    return std::vector<WeightFn>(static_cast<std::size_t>(k), w);
}

namespace detail {

void check_orders(std::span<const int> p, std::span<const WeightFn> weights,
                  const CoeffLimits& limits) {
    const int k = static_cast<int>(p.size());
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    if (weights.size() != p.size()) throw DimensionError("one weight per multiplicity level");
    std::size_t entries = 1;
    for (int v : p) {
        if (v < 0) throw DomainError("truncation orders must be nonnegative");
        if (k == 4 && v > limits.max_p_k4)
            throw SizingError("multiplicity-4 tensor order " + std::to_string(v) +
                              " exceeds the cap " + std::to_string(limits.max_p_k4));
        entries *= static_cast<std::size_t>(v) + 1;
        if (entries > limits.max_entries)
            throw SizingError("coefficient tensor needs more than " +
                              std::to_string(limits.max_entries) + " entries");
    }
}

Eigen::MatrixXd basis_rows(const BasisSystem& basis, int P, const Eigen::VectorXd& s) {
    Eigen::MatrixXd out(P + 1, s.size());
    std::vector<double> buf(P + 1);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        basis.phi_all(s[i], buf);
        for (int j = 0; j <= P; ++j) out(j, i) = buf[j];
    }
    return out;
}

Eigen::VectorXd weight_values(const WeightFn& w, const Interval& iv, const Eigen::VectorXd& s) {
    Eigen::VectorXd out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) out[i] = w(s[i], iv);
    return out;
}

}  // namespace detail

namespace {

int fast_grid_size(std::span<const int> p, std::span<const WeightFn> weights,
                   const BasisSystem& basis) {
    const int k = static_cast<int>(p.size());
    std::vector<Spectral> f(k);
    for (int l = 0; l < k; ++l)
        f[l] = basis_spectral(basis, p[l]) + weights[l].spectral(basis.interval());
    const Spectral one{1, 0.0};
    Spectral integrand = f[0], final_;
    switch (k) {
        case 1: final_ = f[0]; break;
        case 2: final_ = f[0] + one + f[1]; break;
        case 3:
            integrand = f[0].effective() > f[2].effective() ? f[0] : f[2];
            final_ = f[0] + f[1] + f[2] + one + one;
            break;
        default: {
            const Spectral b = f[2] + f[3] + one;
            integrand = b;
            if (f[0].effective() > integrand.effective()) integrand = f[0];
            final_ = f[0] + f[1] + f[2] + f[3] + one + one + one;
        }
    }
    return CollocationGrid::nodes_for(integrand.effective(), final_.effective());
}

}  // namespace

CoeffTensor coeff_tensor(std::span<const int> p, std::span<const WeightFn> weights,
                         const BasisSystem& basis, Execution exec, const CoeffLimits& limits) {
    detail::check_orders(p, weights, limits);
    const int k = static_cast<int>(p.size());
    const Interval& iv = basis.interval();
    const CollocationGrid grid(iv, fast_grid_size(p, weights, basis));
    const Eigen::VectorXd& s = grid.nodes();
    const Eigen::VectorXd& W = grid.weights();

    std::vector<Eigen::MatrixXd> phi(k);
    std::vector<Eigen::VectorXd> psi(k);
    for (int l = 0; l < k; ++l) {
        phi[l] = detail::basis_rows(basis, p[l], s);
        psi[l] = detail::weight_values(weights[l], iv, s);
    }
    std::size_t total = 1;
    for (int v : p) total *= static_cast<std::size_t>(v) + 1;
    std::vector<double> values(total);

    if (k == 1) {
        Eigen::Map<Eigen::VectorXd>(values.data(), p[0] + 1).noalias() =
            phi[0] * W.cwiseProduct(psi[0]);
        return CoeffTensor({p.begin(), p.end()}, basis, {weights.begin(), weights.end()},
                           std::move(values));
    }

    // A(j1, n) = \int_t^{s_n} psi_1 phi_{j1}.
    const Eigen::MatrixXd A = (phi[0] * psi[0].asDiagonal()) * grid.left().transpose();
    if (k == 2) {
        Eigen::Map<RowMatrix>(values.data(), p[0] + 1, p[1] + 1).noalias() =
            A * W.cwiseProduct(psi[1]).asDiagonal() * phi[1].transpose();
        return CoeffTensor({p.begin(), p.end()}, basis, {weights.begin(), weights.end()},
                           std::move(values));
    }

    const Eigen::MatrixXd G2 = phi[1] * W.cwiseProduct(psi[1]).asDiagonal();
    // Right factor: rows indexed by the trailing indices (j3) or (j3, j4).
    Eigen::MatrixXd right;
    if (k == 3) {
        right = (phi[2] * psi[2].asDiagonal()) * grid.right().transpose();
    } else {
        const Eigen::MatrixXd psi4 = (phi[3] * psi[3].asDiagonal()) * grid.right().transpose();
        const Eigen::MatrixXd g3 = phi[2] * psi[2].asDiagonal();
        const int d3 = p[2] + 1, d4 = p[3] + 1;
        Eigen::MatrixXd E(static_cast<Eigen::Index>(d3) * d4, s.size());
        for (int j3 = 0; j3 < d3; ++j3)
            for (int j4 = 0; j4 < d4; ++j4) E.row(j3 * d4 + j4) = g3.row(j3).cwiseProduct(psi4.row(j4));
        right = E * grid.right().transpose();
    }

    const int d1 = p[0] + 1, d2 = p[1] + 1;
    const Eigen::Index cols = right.rows();
    const Eigen::Index n = s.size();
    auto block = [&](int j1) {
        Eigen::MatrixXd D(d2, n);
        for (int j2 = 0; j2 < d2; ++j2) D.row(j2) = A.row(j1).cwiseProduct(G2.row(j2));
        Eigen::Map<RowMatrix>(values.data() + static_cast<std::size_t>(j1) * d2 * cols, d2, cols)
            .noalias() = D * right.transpose();
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int j1 = 0; j1 < d1; ++j1) block(j1);
    } else {
        for (int j1 = 0; j1 < d1; ++j1) block(j1);
    }
    return CoeffTensor({p.begin(), p.end()}, basis, {weights.begin(), weights.end()},
                       std::move(values));
}

CoeffTensor coeff_tensor(int k, int p, std::span<const WeightFn> weights, const BasisSystem& basis,
                         Execution exec, const CoeffLimits& limits) {
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    const std::vector<int> orders(static_cast<std::size_t>(k), p);
    return coeff_tensor(orders, weights, basis, exec, limits);
}

std::vector<double> trace_terms(int p, const WeightFn& psi1, const WeightFn& psi2,
                                const BasisSystem& basis) {
    if (p < 0) throw DomainError("truncation order must be nonnegative");
    const Interval& iv = basis.interval();
    const Spectral b = basis_spectral(basis, p);
    const Spectral f1 = b + psi1.spectral(iv), f2 = b + psi2.spectral(iv);
    const int n = CollocationGrid::nodes_for(f1.effective(), (f1 + f2 + Spectral{1, 0.0}).effective());
    const CollocationGrid grid(iv, n);
    const Eigen::MatrixXd phi = detail::basis_rows(basis, p, grid.nodes());
    const Eigen::VectorXd w1 = detail::weight_values(psi1, iv, grid.nodes());
    const Eigen::VectorXd w2 = detail::weight_values(psi2, iv, grid.nodes());
    const Eigen::MatrixXd A = (phi * w1.asDiagonal()) * grid.left().transpose();
    const Eigen::VectorXd g = grid.weights().cwiseProduct(w2);
    std::vector<double> out(p + 1);
    for (int j = 0; j <= p; ++j) out[j] = (A.row(j).cwiseProduct(phi.row(j))).dot(g);
    return out;
}

double trace_sum(int p, const WeightFn& psi1, const WeightFn& psi2, const BasisSystem& basis) {
    const std::vector<double> d = trace_terms(p, psi1, psi2, basis);
    double acc = 0.0;
    for (double v : d) acc += v;
    return acc;
}

}  // namespace gmfs
