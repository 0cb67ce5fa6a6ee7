#include "gmfs/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gmfs/error.hpp"
#include "gmfs/quadrature.hpp"
#include "internal/grid_tools.hpp"

namespace gmfs {

namespace {

void check_order(int p, int lowest) {
    if (p < lowest) throw DomainError("truncation order " + std::to_string(p) + " below " + std::to_string(lowest));
}

void check_interior(double s, const Interval& iv) {
    if (!(s > iv.t && s < iv.T))
        throw DomainError("tail kernels are evaluated at interior points only");
}

double sum_sq(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

}  // namespace

double tail_kernel_Fp(double s, double s1, int p, const BasisSystem& basis) {
    check_order(p, -1);
    const Interval& iv = basis.interval();
    check_interior(s, iv);
    check_interior(s1, iv);
    double acc = iv.T - std::max(s, s1);
    if (p < 0) return acc;
    std::vector<double> r(p + 1), r1(p + 1);
    basis.integral_all(s, iv.T, r);
    basis.integral_all(s1, iv.T, r1);
    for (int j = 0; j <= p; ++j) acc -= r[j] * r1[j];
    return acc;
}

double tail_left(double s, int p, const BasisSystem& basis) {
    check_order(p, -1);
    const Interval& iv = basis.interval();
    std::vector<double> l(p + 1);
    basis.integral_all(iv.t, s, l);
    return (s - iv.t) - sum_sq(l);
}

double tail_right(double s, int p, const BasisSystem& basis) {
    check_order(p, -1);
    const Interval& iv = basis.interval();
    std::vector<double> r(p + 1);
    basis.integral_all(s, iv.T, r);
    return (iv.T - s) - sum_sq(r);
}

double tail_between(double x, double y, int p, const BasisSystem& basis) {
    check_order(p, -1);
    std::vector<double> m(p + 1);
    basis.integral_all(x, y, m);
    return (y - x) - sum_sq(m);
}

char to_char(DeltaKind kind) noexcept { return static_cast<char>('a' + static_cast<int>(kind)); }

DeltaKind delta_kind_from_char(char tag) {
    if (tag < 'a' || tag > 'h') throw DomainError(std::string("unknown coefficient family '") + tag + "'");
    return static_cast<DeltaKind>(tag - 'a');
}

DeltaTable delta_table(DeltaKind kind, int p, const BasisSystem& basis) {
    check_order(p, 0);
    const Interval& iv = basis.interval();
    // Inner integrands carry phi_c times a tail of spectral content 2x basis(p).
    const Spectral b = basis_spectral(basis, p);
    const Spectral inner = b + b + b + Spectral{3, 0.0};
    const Spectral outer = inner + b + Spectral{2, 0.0};
    const CollocationGrid grid(iv, CollocationGrid::nodes_for(inner.effective(), outer.effective()));
    const Eigen::VectorXd& s = grid.nodes();
    const Eigen::VectorXd& W = grid.weights();
    const Eigen::Index n = s.size();

    const Eigen::MatrixXd Phi = detail::basis_rows(basis, p, s);
    Eigen::MatrixXd Lv(p + 1, n), Rv(p + 1, n);
    {
        std::vector<double> buf(p + 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            basis.integral_all(iv.t, s[i], buf);
            for (int j = 0; j <= p; ++j) Lv(j, i) = buf[j];
            basis.integral_all(s[i], iv.T, buf);
            for (int j = 0; j <= p; ++j) Rv(j, i) = buf[j];
        }
    }
    const Eigen::VectorXd SL = Lv.colwise().squaredNorm().transpose();
    const Eigen::VectorXd SR = Rv.colwise().squaredNorm().transpose();
    const Eigen::VectorXd TL = (s.array() - iv.t).matrix() - SL;
    const Eigen::VectorXd TR = (iv.T - s.array()).matrix() - SR;

    // Between-tail on node pairs as a polynomial in both arguments:
    // TM(x_k, y_n) = (s_n - s_k) - SL(n) - SL(k) + 2 L(k) . L(n).
    auto between = [&]() {
        Eigen::MatrixXd M = 2.0 * (Lv.transpose() * Lv);
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index i = 0; i < n; ++i) M(k, i) += s[i] - s[k] - SL[i] - SL[k];
        return M;  // M(k, i) = TM(s_k, s_i)
    };
    const Eigen::MatrixXd& Lm = grid.left();
    const Eigen::MatrixXd& Rm = grid.right();

    Eigen::MatrixXd x;
    switch (kind) {
        case DeltaKind::a: {
            const Eigen::MatrixXd Y = (Phi * TL.asDiagonal()) * Lm.transpose();
            x = 0.5 * Phi * W.asDiagonal() * Y.transpose();
            break;
        }
        case DeltaKind::b:
            x = 0.5 * Phi * W.cwiseProduct(TL).asDiagonal() * Lv.transpose();
            break;
        case DeltaKind::c: {
            // I(c, n) = \int_t^{s_n} phi_c(s3) TM(s3, s_n) ds3.
            const Eigen::MatrixXd Q = Lm.transpose().cwiseProduct(between());
            x = 0.5 * Phi * W.asDiagonal() * (Phi * Q).transpose();
            break;
        }
        case DeltaKind::d:
            x = 0.5 * Rv * W.cwiseProduct(TR).asDiagonal() * Phi.transpose();
            break;
        case DeltaKind::e: {
            // J(r, n) = \int_{s_n}^T phi_r(s) TM(s_n, s) ds.
            const Eigen::MatrixXd Q = Rm.transpose().cwiseProduct(between().transpose());
            x = 0.5 * (Phi * Q) * W.asDiagonal() * Phi.transpose();
            break;
        }
        case DeltaKind::f: {
            const Eigen::MatrixXd Y = (Phi * TR.asDiagonal()) * Rm.transpose();
            x = 0.5 * Y * W.asDiagonal() * Phi.transpose();
            break;
        }
        case DeltaKind::g: {
            // F(s_n, s_k) for s_k < s_n: (T - s_n) - R(n) . R(k).
            Eigen::MatrixXd F = -(Rv.transpose() * Rv);
            F.rowwise() += (iv.T - s.array()).matrix().transpose();
            const Eigen::MatrixXd Q = Lm.transpose().cwiseProduct(F);
            x = Phi * W.asDiagonal() * (Phi * Q).transpose();
            break;
        }
        case DeltaKind::h: {
            // F(s_n, s_k) for s_k > s_n: (T - s_k) - R(n) . R(k).
            Eigen::MatrixXd F = -(Rv.transpose() * Rv);
            F.colwise() += (iv.T - s.array()).matrix();
            const Eigen::MatrixXd Q = Rm.transpose().cwiseProduct(F);
            x = (Phi * Q) * W.asDiagonal() * Phi.transpose();
            break;
        }
    }
    return DeltaTable{kind, p, std::move(x)};
}

double delta_coeff(DeltaKind kind, int row, int col, int p, const BasisSystem& basis) {
    if (row < 0 || col < 0 || row > p || col > p) throw DomainError("coefficient indices must lie in 0..p");
    return delta_table(kind, p, basis)(row, col);
}

double delta_second_moment(const DeltaTable& t, IndexCase index_case, const Interval& iv) {
    const Eigen::MatrixXd& x = t.x;
    const Eigen::Index n = x.rows();
    switch (index_case) {
        case IndexCase::EqualNonzero: {
            double tr = 0.0, diag2 = 0.0, off = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                tr += x(j, j);
                diag2 += x(j, j) * x(j, j);
                for (Eigen::Index i = 0; i < j; ++i) {
                    const double v = x(i, j) + x(j, i);
                    off += v * v;
                }
            }
            return tr * tr + off + 2.0 * diag2;
        }
        case IndexCase::DistinctNonzero: return x.squaredNorm();
        // The deterministic row is sqrt(T - t) at j = 0 and zero elsewhere.
        case IndexCase::ColumnZero: return iv.length() * x.col(0).squaredNorm();
        case IndexCase::RowZero: return iv.length() * x.row(0).squaredNorm();
        case IndexCase::BothZero: return iv.length() * iv.length() * x(0, 0) * x(0, 0);
    }
    return 0.0;
}

double delta_second_moment(DeltaKind kind, int p, IndexCase index_case, const BasisSystem& basis) {
    return delta_second_moment(delta_table(kind, p, basis), index_case, basis.interval());
}

std::vector<TrendRow> delta_sum_trend(DeltaKind kind, std::span<const int> p_list, const BasisSystem& basis) {
    std::vector<TrendRow> out;
    int prev = -1;
    for (int p : p_list) {
        if (p <= prev) throw DomainError("trend orders must be strictly ascending");
        prev = p;
        out.push_back({p, delta_table(kind, p, basis).trace()});
    }
    return out;
}

double trace_residual(int p, const WeightFn& psi1, const WeightFn& psi2, const BasisSystem& basis) {
    const Interval& iv = basis.interval();
    const Spectral sp = psi1.spectral(iv) + psi2.spectral(iv);
    const int n = CollocationGrid::nodes_for(0, sp.effective());
    const double half = 0.5 * integrate([&](double s) { return psi1(s, iv) * psi2(s, iv); }, iv.t, iv.T, n);
    return std::abs(trace_sum(p, psi1, psi2, basis) - half);
}

BConstants b_constants(const CoeffTensor& C) {
    if (C.k() != 4) throw DimensionError("B constants need the multiplicity-4 tensor");
    for (const WeightFn& w : C.weights())
        if (!w.is_one()) throw DomainError("B constants are defined for unit weights");
    const int p = C.p()[0];
    BConstants b{0.0, 0.0, 0.0};
    for (int x = 0; x <= p; ++x)
        for (int y = 0; y <= p; ++y) {
            b.b1 += C(x, x, y, y);
            b.b2 += C(x, y, x, y);
            b.b3 += C(x, y, y, x);
        }
    return b;
}

BConstants b_constants(int p, const BasisSystem& basis, const CoeffLimits& limits) {
    return b_constants(coeff_tensor(4, p, uniform_weights(4), basis, Execution::Parallel, limits));
}

std::vector<double> interior_points(const Interval& iv, int count) {
    if (count < 1) throw DomainError("need at least one interior point");
    const double eps = 0.05 * iv.length();
    const double a = iv.t + eps, b = iv.T - eps;
    std::vector<double> pts(count);
    for (int i = 0; i < count; ++i) {
        const double z = std::cos(std::numbers::pi * (i + 0.5) / count);
        pts[count - 1 - i] = 0.5 * (a + b) + 0.5 * (b - a) * z;
    }
    return pts;
}

double pointwise_trace_deviation(const WeightFn& psi1, const WeightFn& psi2, int p, const BasisSystem& basis,
                                 bool mirror, int points) {
    check_order(p, 0);
    const Interval& iv = basis.interval();
    const Spectral sp = basis_spectral(basis, p) + psi1.spectral(iv);
    const GaussRule g = gauss_legendre(CollocationGrid::nodes_for(0, sp.effective()));
    std::vector<double> phi(p + 1), acc(p + 1), at(p + 1);
    double worst = 0.0;
    for (double s : interior_points(iv, points)) {
        const double a = mirror ? s : iv.t, b = mirror ? iv.T : s;
        const double h = 0.5 * (b - a), c = 0.5 * (b + a);
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double u = c + h * g.nodes[i];
            basis.phi_all(u, phi);
            const double w = h * g.weights[i] * psi1(u, iv);
            for (int j = 0; j <= p; ++j) acc[j] += w * phi[j];
        }
        basis.phi_all(s, at);
        double sum = 0.0;
        for (int j = 0; j <= p; ++j) sum += at[j] * acc[j];
        const double dev = std::abs(psi2(s, iv) * sum - 0.5 * psi1(s, iv) * psi2(s, iv));
        worst = std::max(worst, dev);
    }
    return worst;
}

}  // namespace gmfs
