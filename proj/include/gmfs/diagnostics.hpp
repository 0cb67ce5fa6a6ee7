#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/coeffs.hpp"
#include "gmfs/weight.hpp"

namespace gmfs {

/// Tail of the Parseval sum for indicators of [s1, T] and [s, T]:
/// sum_{j > p} R_j(s1) R_j(s) = (T - max(s, s1)) - sum_{j <= p} R_j(s1) R_j(s),
/// with R_j(x) = \int_x^T phi_j. p = -1 subtracts nothing. s, s1 must be interior.
double tail_kernel_Fp(double s, double s1, int p, const BasisSystem& basis);
/// (s - t) - sum_{j <= p} (\int_t^s phi_j)^2.
double tail_left(double s, int p, const BasisSystem& basis);
/// (T - s) - sum_{j <= p} (\int_s^T phi_j)^2.
double tail_right(double s, int p, const BasisSystem& basis);
/// (y - x) - sum_{j <= p} (\int_x^y phi_j)^2 for x <= y.
double tail_between(double x, double y, int p, const BasisSystem& basis);

/// Families of double integrals whose vanishing drives the multiplicity-4
/// Stratonovich result. Row/column follow the subscripts of each definition:
/// a, b, c, g are x_{j4 j2 or j3}; d, e, f, h are x_{j3 j1}.
enum class DeltaKind { a, b, c, d, e, f, g, h };

char to_char(DeltaKind kind) noexcept;
/// Throws DomainError for tags outside a..h.
DeltaKind delta_kind_from_char(char tag);

struct DeltaTable {
    DeltaKind kind;
    int p;
    Eigen::MatrixXd x;  // (p + 1) x (p + 1), x(row, col)

    double operator()(int row, int col) const { return x(row, col); }
    double trace() const { return x.trace(); }
};

/// Full (p + 1) x (p + 1) table with every tail written in closed form.
DeltaTable delta_table(DeltaKind kind, int p, const BasisSystem& basis);
double delta_coeff(DeltaKind kind, int row, int col, int p, const BasisSystem& basis);

/// Noise pattern of the pair (row noise, column noise) in sum x zeta^{row} zeta^{col}.
enum class IndexCase { EqualNonzero, DistinctNonzero, RowZero, ColumnZero, BothZero };

/// Exact second moment of sum_{row, col} x zeta_row zeta_col for the index case.
double delta_second_moment(const DeltaTable& table, IndexCase index_case, const Interval& interval);
double delta_second_moment(DeltaKind kind, int p, IndexCase index_case, const BasisSystem& basis);

struct TrendRow {
    int p;
    double diagonal_sum;
};
std::vector<TrendRow> delta_sum_trend(DeltaKind kind, std::span<const int> p_list, const BasisSystem& basis);

/// |sum_{j <= p} C_jj - (1/2) \int psi_1 psi_2|, the right side by an exact Gauss rule.
double trace_residual(int p, const WeightFn& psi1, const WeightFn& psi2, const BasisSystem& basis);

struct BConstants {
    double b1, b2, b3;
};
/// Partial sums sum C_{aabb}, sum C_{abab}, sum C_{abba} (index order j1..j4) of the
/// multiplicity-4 tensor with unit weights.
BConstants b_constants(int p, const BasisSystem& basis, const CoeffLimits& limits = {});
BConstants b_constants(const CoeffTensor& C4);

/// Interior Chebyshev points in (t + eps, T - eps), eps = 0.05 (T - t).
std::vector<double> interior_points(const Interval& interval, int count);

/// max over interior points of
/// |sum_{j <= p} psi_2(s) phi_j(s) \int_t^s psi_1 phi_j - psi_1(s) psi_2(s) / 2|;
/// with mirror = true the inner integral runs over [s, T].
double pointwise_trace_deviation(const WeightFn& psi1, const WeightFn& psi2, int p,
                                 const BasisSystem& basis, bool mirror = false, int points = 21);

}  // namespace gmfs
