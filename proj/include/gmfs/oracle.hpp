#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/coeffs.hpp"
#include "gmfs/expand.hpp"
#include "gmfs/weight.hpp"

namespace gmfs {

/// Uniform grid tau_l = t + l (T - t) / N with Gaussian increments per component.
class WienerPath {
public:
    WienerPath(Interval interval, int m, int N, std::uint64_t seed, std::vector<double> dw);

    const Interval& interval() const noexcept { return iv_; }
    int m() const noexcept { return m_; }
    int N() const noexcept { return N_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double dt() const noexcept { return iv_.length() / N_; }
    double tau(int l) const noexcept { return l == N_ ? iv_.T : iv_.t + l * dt(); }
    /// Increments of component i >= 1.
    std::span<const double> increments(int i) const noexcept {
        return {dw_.data() + static_cast<std::size_t>(i - 1) * N_, static_cast<std::size_t>(N_)};
    }
    /// Increment of component i over cell l; the time step for i = 0.
    double increment(int i, int l) const noexcept { return i == 0 ? dt() : dw_[(i - 1) * N_ + l]; }

private:
    Interval iv_;
    int m_, N_;
    std::uint64_t seed_;
    std::vector<double> dw_;
};

WienerPath sample_path(std::uint64_t seed, int m, int N, Interval interval);

/// Left-endpoint iterated sum over l_1 < ... < l_k.
double ito_sum(const WienerPath& path, std::span<const WeightFn> weights, const NoiseIndexTuple& idx);

enum class StratRule {
    /// Pairs of cells form one step; inner sums are taken at the shared midpoint node.
    Midpoint,
    /// Inner sums averaged over the two cell endpoints.
    Trapezoidal,
};

double strat_sum(const WienerPath& path, std::span<const WeightFn> weights, const NoiseIndexTuple& idx,
                 StratRule rule = StratRule::Midpoint);

enum class ZetaRule {
    /// zeta_j = sum_l phi_j(tau_l) dw_l.
    LeftPoint,
    /// zeta_j = sum_l (mean of phi_j over cell l) dw_l; exact for the piecewise-linear path.
    CellAverage,
};

/// Precomputed projection of grid increments onto phi_0..phi_p.
class ZetaProjector {
public:
    ZetaProjector(const BasisSystem& basis, int p, int N, ZetaRule rule = ZetaRule::LeftPoint);

    int p() const noexcept { return p_; }
    int N() const noexcept { return N_; }
    GaussianTable project(const WienerPath& path) const;
    /// Projection of one increment sequence of length N.
    void project(std::span<const double> dw, std::span<double> out) const;
    std::span<const double> time_row() const noexcept { return row0_; }
    /// (p + 1) x N projection weights.
    const Eigen::MatrixXd& matrix() const noexcept { return a_; }

private:
    int p_, N_;
    Eigen::MatrixXd a_;  // (p + 1) x N
    std::vector<double> row0_;
};

GaussianTable zeta_from_path(const WienerPath& path, const BasisSystem& basis, int p,
                             ZetaRule rule = ZetaRule::LeftPoint);

enum class Flavor { Ito, Stratonovich };

struct MseConfig {
    std::vector<WeightFn> weights;
    NoiseIndexTuple idx;
    BasisSystem basis{BasisKind::Legendre, {0.0, 1.0}};
    std::vector<int> p_list;
    int N = 4096;
    int samples = 1000;
    std::uint64_t seed = 1;
    Flavor flavor = Flavor::Ito;
    StratRule strat_rule = StratRule::Midpoint;
    ZetaRule zeta_rule = ZetaRule::LeftPoint;
    Execution exec = Execution::Parallel;
};

struct MseRow {
    int p = 0;
    double mse = 0.0;
    double std_error = 0.0;
    /// Three standard errors.
    double ci_halfwidth = 0.0;
    /// kernel_norm_sq - sum C^2 where it equals the exact expansion error, NaN otherwise.
    double parseval_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Seed s of a study uses the path keyed by (config.seed, s).
std::uint64_t path_seed(std::uint64_t base, int sample) noexcept;

/// Pathwise E (expansion(zeta_from_path) - oracle_sum(path))^2 for each p.
std::vector<MseRow> mse_study(const MseConfig& config);
double mse_pathwise(const MseConfig& config, int p);

/// Exact expected squared difference between the multiplicity-2 expansion at
/// order p (distinct nonzero indices, zeta from the rule) and the left-point
/// Ito sum on the same N-cell grid: dt^2 sum_{a,b} (Kbar_p(a, b) - 1{a < b})^2.
double discrete_expected_mse(const CoeffTensor& C, int p, int N, ZetaRule rule = ZetaRule::LeftPoint);

/// Mean and standard error of values, summed with Neumaier compensation.
struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
};
SampleStats sample_stats(std::span<const double> values);

}  // namespace gmfs
