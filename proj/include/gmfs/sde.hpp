#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/coeffs.hpp"
#include "gmfs/oracle.hpp"

namespace gmfs {

/// dx = a(x, s) ds + sum_i B_i(x, s) dw_i on [t, T].
struct SdeModel {
    std::string name;
    int n = 0;
    int m = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> drift;
    /// Column i = 1..m.
    std::function<Eigen::VectorXd(int, const Eigen::VectorXd&, double)> diffusion;
    /// d B_i / d x, n x n.
    std::function<Eigen::MatrixXd(int, const Eigen::VectorXd&, double)> diffusion_jacobian;
    Eigen::VectorXd x0;
    Interval interval{0.0, 1.0};

    /// Linear model x' = A0 x, B_i = A_i x.
    static SdeModel linear(std::string name, Eigen::MatrixXd A0, std::vector<Eigen::MatrixXd> A,
                           Eigen::VectorXd x0, Interval interval = {0.0, 1.0});
    /// Two states, two noises with A1 A2 != A2 A1.
    static SdeModel noncommutative();
    /// Two states, two noises with commuting diagonal diffusion matrices.
    static SdeModel commutative();
    /// dx = lambda x dw.
    static SdeModel scalar_linear(double lambda, double x0 = 1.0);
};

enum class Scheme { Euler, Milstein };
std::string to_string(Scheme s);

/// Increments and double integrals I_{(i1 i2)} = \int dw_{i2} \int dw_{i1} of one step.
struct StepNoise {
    double h = 0.0;
    Eigen::VectorXd dw;  // m
    Eigen::MatrixXd I;   // m x m, I(i1 - 1, i2 - 1)
};

/// Euler: x + a h + sum B_i dw_i. Milstein adds sum (dB_{i2}/dx B_{i1}) I_{(i1 i2)}.
/// Throws IntegrationAbort (step index `step`) on a non-finite state.
Eigen::VectorXd strong_step(const SdeModel& model, Scheme scheme, const Eigen::VectorXd& x, double s,
                            const StepNoise& noise, long step = 0);

enum class IntegralSourceKind {
    /// Multiplicity-2 expansion at order p with zeta projected from the sub-increments.
    Expansion,
    /// Iterated sums of the piecewise-linear path through the sub-increments.
    Oracle,
};

struct IntegralSource {
    IntegralSourceKind kind = IntegralSourceKind::Expansion;
    int p = 64;
    BasisKind basis = BasisKind::Legendre;
    ZetaRule zeta_rule = ZetaRule::CellAverage;
};

/// Builds StepNoise for steps of length h made of `cells` equal sub-cells.
class StepIntegrals {
public:
    StepIntegrals(const IntegralSource& source, int m, double h, int cells);

    /// dw(i - 1) holds the `cells` sub-increments of component i.
    StepNoise operator()(std::span<const std::span<const double>> dw) const;

private:
    IntegralSource src_;
    int m_, cells_;
    double h_;
    std::optional<ZetaProjector> proj_;
    std::optional<CoeffTensor> C_;
};

struct StudyConfig {
    Scheme scheme = Scheme::Milstein;
    IntegralSource source;
    /// Coarse step counts over [t, T]; each must divide fine_steps.
    std::vector<int> steps{16, 32, 64, 128, 256, 512};
    int fine_steps = 1 << 14;
    int paths = 1000;
    std::uint64_t seed = 1;
    Execution exec = Execution::Parallel;
};

struct StudyRow {
    int steps = 0;
    double h = 0.0;
    double mean_error = 0.0;
    double std_error = 0.0;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    /// Least-squares slope of log(mean_error) against log(h).
    double slope = 0.0;
};

/// Fine Milstein on piecewise-linear cell integrals as reference.
Eigen::VectorXd reference_solution(const SdeModel& model, const WienerPath& path);
Eigen::VectorXd coarse_solution(const SdeModel& model, Scheme scheme, const StepIntegrals& integrals,
                                const WienerPath& path, int steps);

/// E|x_h(T) - x_ref(T)| over shared fine paths.
StudyResult strong_order_study(const SdeModel& model, const StudyConfig& config);

double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace gmfs
