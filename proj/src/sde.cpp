#include "gmfs/sde.hpp"

#include <cmath>
#include <string>

#include "gmfs/error.hpp"
#include "gmfs/expand.hpp"

namespace gmfs {

SdeModel SdeModel::linear(std::string name, Eigen::MatrixXd A0, std::vector<Eigen::MatrixXd> A,
                          Eigen::VectorXd x0, Interval interval) {
    const Eigen::Index n = x0.size();
    if (A0.rows() != n || A0.cols() != n) throw DimensionError("drift matrix must be n x n");
    for (const auto& a : A)
        if (a.rows() != n || a.cols() != n) throw DimensionError("diffusion matrices must be n x n");
    SdeModel mdl;
    mdl.name = std::move(name);
    mdl.n = static_cast<int>(n);
    mdl.m = static_cast<int>(A.size());
    mdl.drift = [A0](const Eigen::VectorXd& x, double) -> Eigen::VectorXd { return A0 * x; };
    mdl.diffusion = [A](int i, const Eigen::VectorXd& x, double) -> Eigen::VectorXd { return A[i - 1] * x; };
    mdl.diffusion_jacobian = [A](int i, const Eigen::VectorXd&, double) -> Eigen::MatrixXd { return A[i - 1]; };
    mdl.x0 = std::move(x0);
    mdl.interval = make_interval(interval.t, interval.T);
    return mdl;
}

SdeModel SdeModel::noncommutative() {
    Eigen::MatrixXd A0(2, 2), A1(2, 2), A2(2, 2);
    A0 << -0.2, 0.1, 0.0, -0.1;
    A1 << 0.5, 0.0, 0.0, -0.3;
    A2 << 0.0, 0.5, 0.4, 0.0;
    return linear("noncommutative", A0, {A1, A2}, Eigen::Vector2d(1.0, 1.0));
}

SdeModel SdeModel::commutative() {
    Eigen::MatrixXd A0(2, 2), A1(2, 2), A2(2, 2);
    A0 << -0.2, 0.1, 0.0, -0.1;
    A1 << 0.5, 0.0, 0.0, -0.3;
    A2 << 0.2, 0.0, 0.0, 0.4;
    return linear("commutative", A0, {A1, A2}, Eigen::Vector2d(1.0, 1.0));
}

SdeModel SdeModel::scalar_linear(double lambda, double x0) {
    Eigen::MatrixXd A0 = Eigen::MatrixXd::Zero(1, 1), A1(1, 1);
    A1 << lambda;
    return linear("scalar_linear", A0, {A1}, Eigen::VectorXd::Constant(1, x0));
}

std::string to_string(Scheme s) { return s == Scheme::Euler ? "euler" : "milstein"; }

Eigen::VectorXd strong_step(const SdeModel& model, Scheme scheme, const Eigen::VectorXd& x, double s,
                            const StepNoise& noise, long step) {
    if (!(noise.h > 0.0)) throw DomainError("step length must be positive");
    if (noise.dw.size() != model.m) throw DimensionError("one increment per noise component");
    Eigen::VectorXd y = x + model.drift(x, s) * noise.h;
    std::vector<Eigen::VectorXd> B(model.m);
    for (int i = 1; i <= model.m; ++i) {
        B[i - 1] = model.diffusion(i, x, s);
        y += B[i - 1] * noise.dw(i - 1);
    }
    if (scheme == Scheme::Milstein) {
        if (noise.I.rows() != model.m || noise.I.cols() != model.m)
            throw DimensionError("Milstein needs the m x m double integrals");
        for (int i2 = 1; i2 <= model.m; ++i2) {
            const Eigen::MatrixXd J = model.diffusion_jacobian(i2, x, s);
            for (int i1 = 1; i1 <= model.m; ++i1) y += (J * B[i1 - 1]) * noise.I(i1 - 1, i2 - 1);
        }
    }
    if (!y.allFinite()) throw IntegrationAbort("non-finite state at step " + std::to_string(step), step);
    return y;
}

StepIntegrals::StepIntegrals(const IntegralSource& source, int m, double h, int cells)
    : src_(source), m_(m), cells_(cells), h_(h) {
    if (m < 1) throw DimensionError("at least one noise component");
    if (!(h > 0.0)) throw DomainError("step length must be positive");
    if (cells < 1) throw DomainError("a step needs at least one cell");
    if (src_.kind == IntegralSourceKind::Expansion) {
        if (cells < 2) throw DomainError("projecting onto a basis needs at least two cells per step");
        const BasisSystem basis(src_.basis, make_interval(0.0, h));
        proj_.emplace(basis, src_.p, cells, src_.zeta_rule);
        C_.emplace(coeff_tensor(2, src_.p, uniform_weights(2), basis, Execution::Serial));
    }
}

StepNoise StepIntegrals::operator()(std::span<const std::span<const double>> dw) const {
    if (static_cast<int>(dw.size()) != m_) throw DimensionError("one increment sequence per component");
    StepNoise out{h_, Eigen::VectorXd(m_), Eigen::MatrixXd(m_, m_)};
    if (src_.kind == IntegralSourceKind::Oracle) {
        for (int i = 0; i < m_; ++i) {
            if (static_cast<int>(dw[i].size()) != cells_) throw DimensionError("increment count per step");
            double acc = 0.0;
            for (double v : dw[i]) acc += v;
            out.dw(i) = acc;
        }
        for (int i1 = 0; i1 < m_; ++i1)
            for (int i2 = 0; i2 < m_; ++i2) {
                if (i1 == i2) {
                    out.I(i1, i2) = 0.5 * (out.dw(i1) * out.dw(i1) - h_);
                    continue;
                }
                // Straight segments within a cell contribute half the product.
                double run = 0.0, acc = 0.0;
                for (int l = 0; l < cells_; ++l) {
                    acc += (run + 0.5 * dw[i1][l]) * dw[i2][l];
                    run += dw[i1][l];
                }
                out.I(i1, i2) = acc;
            }
        return out;
    }
    const int p = src_.p;
    std::vector<double> values(static_cast<std::size_t>(m_ + 1) * (p + 1));
    std::copy(proj_->time_row().begin(), proj_->time_row().end(), values.begin());
    for (int i = 0; i < m_; ++i) {
        if (static_cast<int>(dw[i].size()) != cells_) throw DimensionError("increment count per step");
        proj_->project(dw[i], std::span<double>(values).subspan(static_cast<std::size_t>(i + 1) * (p + 1), p + 1));
    }
    const GaussianTable Z(m_, p, 0, std::move(values));
    const double root = std::sqrt(h_);
    for (int i = 0; i < m_; ++i) out.dw(i) = root * Z(i + 1, 0);
    const TruncationSpec spec = TruncationSpec::uniform(2, p);
    for (int i1 = 0; i1 < m_; ++i1)
        for (int i2 = 0; i2 < m_; ++i2)
            out.I(i1, i2) = ito_truncated(*C_, Z, {i1 + 1, i2 + 1}, spec, ItoMethod::Contracted);
    return out;
}

Eigen::VectorXd reference_solution(const SdeModel& model, const WienerPath& path) {
    const StepIntegrals cell({IntegralSourceKind::Oracle}, model.m, path.dt(), 1);
    Eigen::VectorXd x = model.x0;
    std::vector<std::span<const double>> dw(model.m);
    for (int l = 0; l < path.N(); ++l) {
        for (int i = 1; i <= model.m; ++i) dw[i - 1] = path.increments(i).subspan(l, 1);
        x = strong_step(model, Scheme::Milstein, x, path.tau(l), cell(dw), l);
    }
    return x;
}

Eigen::VectorXd coarse_solution(const SdeModel& model, Scheme scheme, const StepIntegrals& integrals,
                                const WienerPath& path, int steps) {
    if (steps < 1 || path.N() % steps != 0) throw DomainError("coarse steps must divide the fine grid");
    const int cells = path.N() / steps;
    const double h = path.interval().length() / steps;
    Eigen::VectorXd x = model.x0;
    std::vector<std::span<const double>> dw(model.m);
    for (int n = 0; n < steps; ++n) {
        for (int i = 1; i <= model.m; ++i) dw[i - 1] = path.increments(i).subspan(static_cast<std::size_t>(n) * cells, cells);
        StepNoise noise;
        if (scheme == Scheme::Milstein) {
            noise = integrals(dw);
        } else {
            noise.h = h;
            noise.dw.resize(model.m);
            for (int i = 0; i < model.m; ++i) {
                double acc = 0.0;
                for (double v : dw[i]) acc += v;
                noise.dw(i) = acc;
            }
        }
        x = strong_step(model, scheme, x, path.interval().t + n * h, noise, n);
    }
    return x;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DimensionError("slope needs two or more matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

StudyResult strong_order_study(const SdeModel& model, const StudyConfig& cfg) {
    if (cfg.paths < 2) throw DomainError("a study needs at least two paths");
    if (cfg.steps.empty()) throw DomainError("a study needs at least one step count");
    const double L = model.interval.length();
    std::vector<StepIntegrals> integrals;
    for (int steps : cfg.steps) {
        if (steps < 1 || cfg.fine_steps % steps != 0) throw DomainError("coarse steps must divide the fine grid");
        integrals.emplace_back(cfg.source, model.m, L / steps, cfg.fine_steps / steps);
    }
    const std::size_t nh = cfg.steps.size();
    std::vector<double> err(nh * cfg.paths);
    auto one = [&](int s) {
        const WienerPath path = sample_path(path_seed(cfg.seed, s), model.m, cfg.fine_steps, model.interval);
        const Eigen::VectorXd ref = reference_solution(model, path);
        for (std::size_t q = 0; q < nh; ++q)
            err[q * cfg.paths + s] = (coarse_solution(model, cfg.scheme, integrals[q], path, cfg.steps[q]) - ref).norm();
    };
    if (cfg.exec == Execution::Parallel) {
        // Exceptions cannot cross the parallel region; the first one is rethrown after it.
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
        for (int s = 0; s < cfg.paths; ++s) {
            try {
                one(s);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (int s = 0; s < cfg.paths; ++s) one(s);
    }
    StudyResult res;
    std::vector<double> hs, es;
    for (std::size_t q = 0; q < nh; ++q) {
        const SampleStats st = sample_stats(std::span<const double>(err).subspan(q * cfg.paths, cfg.paths));
        res.rows.push_back({cfg.steps[q], L / cfg.steps[q], st.mean, st.std_error});
        hs.push_back(L / cfg.steps[q]);
        es.push_back(st.mean);
    }
    res.slope = nh >= 2 ? loglog_slope(hs, es) : std::nan("");
    return res;
}

}  // namespace gmfs
