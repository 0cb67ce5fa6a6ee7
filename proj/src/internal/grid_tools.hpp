#pragma once

#include <Eigen/Dense>
#include <span>

#include "gmfs/basis.hpp"
#include "gmfs/coeffs.hpp"
#include "gmfs/weight.hpp"

namespace gmfs::detail {

void check_orders(std::span<const int> p, std::span<const WeightFn> weights,
                  const CoeffLimits& limits);
/// (P + 1) x n matrix of phi_j at the nodes s.
Eigen::MatrixXd basis_rows(const BasisSystem& basis, int P, const Eigen::VectorXd& s);
Eigen::VectorXd weight_values(const WeightFn& w, const Interval& iv, const Eigen::VectorXd& s);

}  // namespace gmfs::detail
