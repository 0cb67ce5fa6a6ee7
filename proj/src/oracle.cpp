#include "gmfs/oracle.hpp"

#include <array>
#include <cmath>

#include "gmfs/error.hpp"
#include "gmfs/rng.hpp"

namespace gmfs {

WienerPath::WienerPath(Interval interval, int m, int N, std::uint64_t seed, std::vector<double> dw)
    : iv_(make_interval(interval.t, interval.T)), m_(m), N_(N), seed_(seed), dw_(std::move(dw)) {
    if (N < 2) throw DomainError("a path needs N >= 2 cells");
    if (m < 1) throw DomainError("a path needs at least one Wiener component");
    if (dw_.size() != static_cast<std::size_t>(m) * N) throw DimensionError("increment count is not m * N");
}

WienerPath sample_path(std::uint64_t seed, int m, int N, Interval interval) {
    if (N < 2) throw DomainError("a path needs N >= 2 cells");
    if (m < 1) throw DomainError("a path needs at least one Wiener component");
    const double sd = std::sqrt(interval.length() / N);
    std::vector<double> dw(static_cast<std::size_t>(m) * N);
    for (int i = 1; i <= m; ++i)
        for (int l = 0; l < N; ++l)
            dw[static_cast<std::size_t>(i - 1) * N + l] = sd * rng::normal(seed, rng::Stream::Path, i, l);
    return WienerPath(interval, m, N, seed, std::move(dw));
}

namespace {

void check_sum_args(const WienerPath& path, std::span<const WeightFn> weights,
                    const NoiseIndexTuple& idx) {
    const std::size_t k = idx.size();
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    if (weights.size() != k) throw DimensionError("one weight per multiplicity level");
    for (int i : idx)
        if (i < 0 || i > path.m()) throw DimensionError("noise index outside 0..m");
}

}  // namespace

double ito_sum(const WienerPath& path, std::span<const WeightFn> weights, const NoiseIndexTuple& idx) {
    check_sum_args(path, weights, idx);
    const int k = static_cast<int>(idx.size());
    const Interval& iv = path.interval();
    std::array<double, 5> F{1.0, 0.0, 0.0, 0.0, 0.0};
    for (int l = 0; l < path.N(); ++l) {
        const double tau = path.tau(l);
        // Descending r keeps F[r - 1] at its value before cell l (strict ordering).
        for (int r = k; r >= 1; --r)
            F[r] += weights[r - 1](tau, iv) * F[r - 1] * path.increment(idx[r - 1], l);
    }
    return F[k];
}

double strat_sum(const WienerPath& path, std::span<const WeightFn> weights, const NoiseIndexTuple& idx,
                 StratRule rule) {
    check_sum_args(path, weights, idx);
    const int k = static_cast<int>(idx.size());
    const Interval& iv = path.interval();
    std::array<double, 5> F{1.0, 0.0, 0.0, 0.0, 0.0};
    if (rule == StratRule::Trapezoidal) {
        const double h = path.dt();
        for (int l = 0; l < path.N(); ++l) {
            const double mid = path.tau(l) + 0.5 * h;
            std::array<double, 5> old = F;
            for (int r = 1; r <= k; ++r)
                F[r] += weights[r - 1](mid, iv) * 0.5 * (old[r - 1] + F[r - 1]) *
                        path.increment(idx[r - 1], l);
        }
        return F[k];
    }
    if (path.N() % 2 != 0) throw DomainError("midpoint Stratonovich sums need an even N");
    std::array<double, 5> mid{};
    for (int c = 0; c < path.N() / 2; ++c) {
        const int l0 = 2 * c, l1 = 2 * c + 1;
        const double a = path.tau(l0), b = path.tau(l1);
        mid[0] = 1.0;
        for (int r = 1; r < k; ++r)
            mid[r] = F[r] + weights[r - 1](a, iv) * F[r - 1] * path.increment(idx[r - 1], l0);
        for (int r = 1; r <= k; ++r) {
            const double dW = path.increment(idx[r - 1], l0) + path.increment(idx[r - 1], l1);
            F[r] += weights[r - 1](b, iv) * mid[r - 1] * dW;
        }
    }
    return F[k];
}

ZetaProjector::ZetaProjector(const BasisSystem& basis, int p, int N, ZetaRule rule)
    : p_(p), N_(N), a_(p + 1, N), row0_(p + 1) {
    if (p < 0) throw DomainError("truncation order must be nonnegative");
    if (N < 2) throw DomainError("a path needs N >= 2 cells");
    const Interval& iv = basis.interval();
    const double h = iv.length() / N;
    std::vector<double> buf(p + 1);
    for (int l = 0; l < N; ++l) {
        const double a = iv.t + l * h;
        const double b = l + 1 == N ? iv.T : iv.t + (l + 1) * h;
        if (rule == ZetaRule::LeftPoint) {
            basis.phi_all(a, buf);
        } else {
            basis.integral_all(a, b, buf);
            for (double& v : buf) v /= (b - a);
        }
        for (int j = 0; j <= p; ++j) a_(j, l) = buf[j];
    }
    basis.integral_all(iv.t, iv.T, row0_);
}

void ZetaProjector::project(std::span<const double> dw, std::span<double> out) const {
    if (static_cast<int>(dw.size()) != N_ || static_cast<int>(out.size()) != p_ + 1)
        throw DimensionError("projection sizes do not match the projector");
    Eigen::Map<Eigen::VectorXd>(out.data(), p_ + 1).noalias() =
        a_ * Eigen::Map<const Eigen::VectorXd>(dw.data(), N_);
}

GaussianTable ZetaProjector::project(const WienerPath& path) const {
    if (path.N() != N_) throw DimensionError("path grid differs from the projector grid");
    std::vector<double> v(static_cast<std::size_t>(path.m() + 1) * (p_ + 1));
    std::copy(row0_.begin(), row0_.end(), v.begin());
    for (int i = 1; i <= path.m(); ++i)
        project(path.increments(i),
                std::span<double>(v.data() + static_cast<std::size_t>(i) * (p_ + 1), p_ + 1));
    return GaussianTable(path.m(), p_, path.seed(), std::move(v));
}

GaussianTable zeta_from_path(const WienerPath& path, const BasisSystem& basis, int p, ZetaRule rule) {
    return ZetaProjector(basis, p, path.N(), rule).project(path);
}

std::uint64_t path_seed(std::uint64_t base, int sample) noexcept {
    return rng::key(base, rng::Stream::PathSeed, static_cast<std::uint64_t>(sample), 0);
}

SampleStats sample_stats(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return {};
    auto neumaier = [&](auto&& f) {
        double sum = 0.0, comp = 0.0;
        for (double x : values) {
            const double v = f(x);
            const double t = sum + v;
            comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
            sum = t;
        }
        return sum + comp;
    };
    SampleStats s;
    s.mean = neumaier([](double x) { return x; }) / n;
    if (n > 1) {
        const double m = s.mean;
        const double ss = neumaier([m](double x) { return (x - m) * (x - m); });
        s.std_error = std::sqrt(ss / (n - 1) / n);
    }
    return s;
}

std::vector<MseRow> mse_study(const MseConfig& cfg) {
    const int k = static_cast<int>(cfg.idx.size());
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    if (cfg.weights.size() != cfg.idx.size()) throw DimensionError("one weight per multiplicity level");
    if (cfg.p_list.empty()) throw DimensionError("at least one truncation order is needed");
    if (cfg.samples < 2) throw DomainError("a study needs at least two samples");
    int m = 1;
    for (int i : cfg.idx) {
        if (i < 0) throw DimensionError("noise indices must be nonnegative");
        m = std::max(m, i);
    }
    int pmax = 0;
    for (int p : cfg.p_list) {
        if (p < 0) throw DomainError("truncation order must be nonnegative");
        pmax = std::max(pmax, p);
    }
    const Interval& iv = cfg.basis.interval();
    const CoeffTensor C = coeff_tensor(k, pmax, cfg.weights, cfg.basis, cfg.exec);
    const ZetaProjector proj(cfg.basis, pmax, cfg.N, cfg.zeta_rule);
    const std::size_t np = cfg.p_list.size();
    std::vector<TruncationSpec> specs;
    for (int p : cfg.p_list) specs.push_back(TruncationSpec::uniform(k, p));

    std::vector<double> sq(np * cfg.samples);
    auto one = [&](int s) {
        const WienerPath path = sample_path(path_seed(cfg.seed, s), m, cfg.N, iv);
        const double exact = cfg.flavor == Flavor::Ito ? ito_sum(path, cfg.weights, cfg.idx)
                                                       : strat_sum(path, cfg.weights, cfg.idx, cfg.strat_rule);
        const GaussianTable Z = proj.project(path);
        for (std::size_t q = 0; q < np; ++q) {
            const double approx = cfg.flavor == Flavor::Ito
                                      ? ito_truncated(C, Z, cfg.idx, specs[q], ItoMethod::Contracted)
                                      : strat_truncated(C, Z, cfg.idx, specs[q]);
            const double d = approx - exact;
            sq[q * cfg.samples + s] = d * d;
        }
    };
    if (cfg.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int s = 0; s < cfg.samples; ++s) one(s);
    } else {
        for (int s = 0; s < cfg.samples; ++s) one(s);
    }

    bool parseval = k == 1 ? cfg.idx[0] != 0 : k == 2 && cfg.idx[0] != cfg.idx[1] && cfg.idx[0] != 0 &&
                                                   cfg.idx[1] != 0;
    const double norm = parseval ? kernel_norm_sq(cfg.weights, iv) : 0.0;
    std::vector<MseRow> rows;
    for (std::size_t q = 0; q < np; ++q) {
        MseRow r;
        r.p = cfg.p_list[q];
        const SampleStats st = sample_stats(std::span<const double>(sq.data() + q * cfg.samples, cfg.samples));
        r.mse = st.mean;
        r.std_error = st.std_error;
        r.ci_halfwidth = 3.0 * st.std_error;
        if (parseval) {
            double acc = 0.0;
            if (k == 1) {
                for (int a = 0; a <= r.p; ++a) acc += C(a) * C(a);
            } else {
                for (int a = 0; a <= r.p; ++a)
                    for (int b = 0; b <= r.p; ++b) acc += C(a, b) * C(a, b);
            }
            r.parseval_bound = norm - acc;
        }
        rows.push_back(r);
    }
    return rows;
}

double discrete_expected_mse(const CoeffTensor& C, int p, int N, ZetaRule rule) {
    if (C.k() != 2) throw DimensionError("discrete expected error is defined for multiplicity 2");
    if (p > C.p()[0] || p > C.p()[1]) throw DimensionError("order exceeds the tensor");
    const ZetaProjector proj(C.basis(), p, N, rule);
    const Eigen::MatrixXd& A = proj.matrix();
    Eigen::MatrixXd Cp(p + 1, p + 1);
    for (int a = 0; a <= p; ++a)
        for (int b = 0; b <= p; ++b) Cp(a, b) = C(a, b);
    const Eigen::MatrixXd left = A.transpose() * Cp;  // N x (p + 1)
    const double dt = C.basis().interval().length() / N;
    double acc = 0.0;
    constexpr int kBlock = 256;
    for (int r0 = 0; r0 < N; r0 += kBlock) {
        const int rows = std::min(kBlock, N - r0);
        Eigen::MatrixXd K = left.middleRows(r0, rows) * A;
        for (int r = 0; r < rows; ++r)
            for (int c = r0 + r + 1; c < N; ++c) K(r, c) -= 1.0;
        acc += K.squaredNorm();
    }
    return dt * dt * acc;
}

double mse_pathwise(const MseConfig& config, int p) {
    MseConfig c = config;
    c.p_list = {p};
    return mse_study(c).front().mse;
}

}  // namespace gmfs
