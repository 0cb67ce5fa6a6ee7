#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/weight.hpp"

namespace gmfs {

enum class Execution { Parallel, Serial };

struct CoeffLimits {
    /// Largest per-dimension order accepted at multiplicity 4.
    int max_p_k4 = 63;
    /// Largest number of tensor entries at any multiplicity.
    std::size_t max_entries = std::size_t{64} * 64 * 64 * 64;
};

/// Dense coefficient tensor C with index order (j_1, ..., j_k), j_k fastest.
class CoeffTensor {
public:
    CoeffTensor(std::vector<int> p, BasisSystem basis, std::vector<WeightFn> weights,
                std::vector<double> values);

    int k() const noexcept { return static_cast<int>(p_.size()); }
    const std::vector<int>& p() const noexcept { return p_; }
    int dim(int l) const noexcept { return p_[l] + 1; }
    std::size_t stride(int l) const noexcept { return strides_[l]; }
    const BasisSystem& basis() const noexcept { return basis_; }
    const std::vector<WeightFn>& weights() const noexcept { return weights_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double at(std::span<const int> j) const;
    double operator()(int j1) const { return values_[j1]; }
    double operator()(int j1, int j2) const { return values_[j1 * strides_[0] + j2]; }
    double operator()(int j1, int j2, int j3) const {
        return values_[j1 * strides_[0] + j2 * strides_[1] + j3];
    }
    double operator()(int j1, int j2, int j3, int j4) const {
        return values_[j1 * strides_[0] + j2 * strides_[1] + j3 * strides_[2] + j4];
    }

private:
    std::vector<int> p_;
    std::vector<std::size_t> strides_;
    BasisSystem basis_;
    std::vector<WeightFn> weights_;
    std::vector<double> values_;
};

/// Single coefficient by the nested antiderivative chain on an exact grid.
double fourier_coeff(std::span<const int> j, std::span<const WeightFn> weights,
                     const BasisSystem& basis);

/// All coefficients with j_l <= p[l]. Entries are computed as independent
/// GEMM blocks over j_1, so the bytes do not depend on the thread count.
CoeffTensor coeff_tensor(std::span<const int> p, std::span<const WeightFn> weights,
                         const BasisSystem& basis, Execution exec = Execution::Parallel,
                         const CoeffLimits& limits = {});
CoeffTensor coeff_tensor(int k, int p, std::span<const WeightFn> weights, const BasisSystem& basis,
                         Execution exec = Execution::Parallel, const CoeffLimits& limits = {});

/// Serial reference: one antiderivative chain per multi-index prefix.
CoeffTensor coeff_tensor_reference(std::span<const int> p, std::span<const WeightFn> weights,
                                   const BasisSystem& basis);

/// Squared L2 norm of the kernel, i.e. the simplex integral of prod psi_l^2.
double kernel_norm_sq(std::span<const WeightFn> weights, const Interval& interval);

/// Diagonal coefficients C_jj, j = 0..p, of the multiplicity-2 tensor.
std::vector<double> trace_terms(int p, const WeightFn& psi1, const WeightFn& psi2,
                                const BasisSystem& basis);
double trace_sum(int p, const WeightFn& psi1, const WeightFn& psi2, const BasisSystem& basis);

/// Helper for uniform weight lists.
std::vector<WeightFn> uniform_weights(int k, const WeightFn& w = WeightFn::one());

}  // namespace gmfs
