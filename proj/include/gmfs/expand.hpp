#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/coeffs.hpp"
#include "gmfs/weight.hpp"

namespace gmfs {

/// Noise components i_1..i_k; 0 is the time component.
using NoiseIndexTuple = std::vector<int>;

/// Gaussian coordinates zeta_j^{(i)}, i = 0..m, j = 0..p. Row 0 holds the
/// deterministic integrals of phi_j over the interval.
class GaussianTable {
public:
    GaussianTable(int m, int p, std::uint64_t seed, std::vector<double> values);

    int m() const noexcept { return m_; }
    int p() const noexcept { return p_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double operator()(int i, int j) const noexcept { return values_[i * (p_ + 1) + j]; }
    std::span<const double> row(int i) const noexcept {
        return {values_.data() + static_cast<std::size_t>(i) * (p_ + 1), static_cast<std::size_t>(p_ + 1)};
    }
    std::span<double> row(int i) noexcept {
        return {values_.data() + static_cast<std::size_t>(i) * (p_ + 1), static_cast<std::size_t>(p_ + 1)};
    }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    int m_, p_;
    std::uint64_t seed_;
    std::vector<double> values_;
};

/// Truncation orders: per dimension for k <= 2, one shared order for k = 3, 4.
class TruncationSpec {
public:
    static TruncationSpec uniform(int k, int p);
    static TruncationSpec rectangular(std::vector<int> orders);

    int k() const noexcept { return static_cast<int>(orders_.size()); }
    int order(int l) const noexcept { return orders_[l]; }
    const std::vector<int>& orders() const noexcept { return orders_; }
    int min_order() const noexcept;

private:
    explicit TruncationSpec(std::vector<int> orders) : orders_(std::move(orders)) {}
    std::vector<int> orders_;
};

GaussianTable sample_table(std::uint64_t seed, int m, int p, const BasisSystem& basis);

enum class ItoMethod {
    /// Every bracket of the expansion evaluated term by term, indicators included.
    Bracket,
    /// Plain multiple sum minus the partial-trace correction; O(p^k) with small constant.
    Contracted,
};

double ito_truncated(const CoeffTensor& C, const GaussianTable& Z, const NoiseIndexTuple& idx,
                     const TruncationSpec& trunc, ItoMethod method = ItoMethod::Bracket);
double strat_truncated(const CoeffTensor& C, const GaussianTable& Z, const NoiseIndexTuple& idx,
                       const TruncationSpec& trunc);
/// strat_truncated - ito_truncated assembled from partial traces of C.
double strat_correction(const CoeffTensor& C, const GaussianTable& Z, const NoiseIndexTuple& idx,
                        const TruncationSpec& trunc);

/// Hermite closed form for a single component i >= 1 and common weight psi:
/// coeffs[j] = \int psi phi_j (j <= p used), weight_sq = \int psi^2.
double hermite_reference(int k, const GaussianTable& Z, int i, std::span<const double> coeffs,
                         double weight_sq, int p);
double hermite_reference(int k, const GaussianTable& Z, int i, const WeightFn& psi,
                         const BasisSystem& basis, int p);

/// Empty when the Stratonovich mean-square convergence result covers these
/// weights, otherwise the failed smoothness or weight precondition.
std::string strat_precondition_failure(std::span<const WeightFn> weights);

}  // namespace gmfs
