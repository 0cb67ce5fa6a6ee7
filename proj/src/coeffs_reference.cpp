#include <functional>

#include "gmfs/coeffs.hpp"
#include "gmfs/error.hpp"
#include "gmfs/quadrature.hpp"
#include "internal/grid_tools.hpp"

namespace gmfs {

namespace {

/// Grid exact for the chain Phi_l = \int_t^s f_l Phi_{l-1}, final level by weights.
int chain_grid_size(const std::vector<Spectral>& f) {
    Spectral acc{};
    int worst = 0;
    for (std::size_t l = 0; l + 1 < f.size(); ++l) {
        acc = acc + f[l];
        worst = std::max(worst, acc.effective());
        acc = acc + Spectral{1, 0.0};
    }
    acc = acc + f.back();
    return CollocationGrid::nodes_for(worst, acc.effective());
}

}  // namespace

double fourier_coeff(std::span<const int> j, std::span<const WeightFn> weights,
                     const BasisSystem& basis) {
    const int k = static_cast<int>(j.size());
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    if (weights.size() != j.size()) throw DimensionError("one weight per multiplicity level");
    const Interval& iv = basis.interval();
    std::vector<Spectral> f(k);
    for (int l = 0; l < k; ++l) {
        if (j[l] < 0) throw DomainError("basis indices must be nonnegative");
        f[l] = basis_spectral(basis, j[l]) + weights[l].spectral(iv);
    }
    const CollocationGrid grid(iv, chain_grid_size(f));
    const Eigen::VectorXd& s = grid.nodes();
    Eigen::VectorXd chain = Eigen::VectorXd::Ones(s.size());
    for (int l = 0; l < k; ++l) {
        Eigen::VectorXd v(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i)
            v[i] = weights[l](s[i], iv) * basis.phi(j[l], s[i]) * chain[i];
        if (l + 1 == k) return grid.weights().dot(v);
        chain = grid.left() * v;
    }
    return 0.0;
}

CoeffTensor coeff_tensor_reference(std::span<const int> p, std::span<const WeightFn> weights,
                                   const BasisSystem& basis) {
    detail::check_orders(p, weights, CoeffLimits{});
    const int k = static_cast<int>(p.size());
    const Interval& iv = basis.interval();
    std::vector<Spectral> f(k);
    for (int l = 0; l < k; ++l) f[l] = basis_spectral(basis, p[l]) + weights[l].spectral(iv);
    const CollocationGrid grid(iv, chain_grid_size(f));
    const Eigen::VectorXd& s = grid.nodes();

    std::vector<Eigen::MatrixXd> g(k);
    for (int l = 0; l < k; ++l)
        g[l] = detail::basis_rows(basis, p[l], s) *
               detail::weight_values(weights[l], iv, s).asDiagonal();

    std::size_t total = 1;
    for (int v : p) total *= static_cast<std::size_t>(v) + 1;
    std::vector<double> values(total);
    std::size_t next = 0;
    std::function<void(int, const Eigen::VectorXd&)> level = [&](int l, const Eigen::VectorXd& chain) {
        for (int j = 0; j <= p[l]; ++j) {
            const Eigen::VectorXd v = g[l].row(j).transpose().cwiseProduct(chain);
            if (l + 1 == k)
                values[next++] = grid.weights().dot(v);
            else
                level(l + 1, grid.left() * v);
        }
    };
    level(0, Eigen::VectorXd::Ones(s.size()));
    return CoeffTensor({p.begin(), p.end()}, basis, {weights.begin(), weights.end()},
                       std::move(values));
}

double kernel_norm_sq(std::span<const WeightFn> weights, const Interval& interval) {
    const int k = static_cast<int>(weights.size());
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    const Interval iv = make_interval(interval.t, interval.T);
    std::vector<Spectral> f(k);
    for (int l = 0; l < k; ++l) {
        const Spectral w = weights[l].spectral(iv);
        f[l] = w + w;
    }
    const CollocationGrid grid(iv, chain_grid_size(f));
    const Eigen::VectorXd& s = grid.nodes();
    Eigen::VectorXd chain = Eigen::VectorXd::Ones(s.size());
    for (int l = 0; l < k; ++l) {
        Eigen::VectorXd v(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            const double w = weights[l](s[i], iv);
            v[i] = w * w * chain[i];
        }
        if (l + 1 == k) return grid.weights().dot(v);
        chain = grid.left() * v;
    }
    return 0.0;
}

}  // namespace gmfs
