#include "gmfs/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gmfs/error.hpp"

namespace gmfs {

namespace {

double slack(const Interval& iv) {
    return 1e-12 * std::max({1.0, std::abs(iv.t), std::abs(iv.T)});
}

void check_degree(int n) {
    if (n < 0 || n > kMaxLegendreDegree)
        throw DomainError("Legendre degree " + std::to_string(n) + " outside [0, " +
                          std::to_string(kMaxLegendreDegree) + "]");
}

double clamp_canonical(double x) {
    if (!(std::abs(x) <= 1.0 + 1e-12))
        throw DomainError("Legendre argument " + std::to_string(x) + " outside [-1, 1]");
    return std::clamp(x, -1.0, 1.0);
}

}  // namespace

bool Interval::contains(double s) const noexcept {
    const double e = slack(*this);
    return s >= t - e && s <= T + e;
}

Interval make_interval(double t, double T) {
    if (!std::isfinite(t) || !std::isfinite(T) || !(T > t))
        throw DomainError("interval requires finite t < T");
    return Interval{t, T};
}

double legendre_P(int n, double x) {
    check_degree(n);
    x = clamp_canonical(x);
    if (n == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

void legendre_P_all(double x, std::span<double> out) {
    if (out.empty()) return;
    check_degree(static_cast<int>(out.size()) - 1);
    x = clamp_canonical(x);
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = x;
    for (std::size_t k = 1; k + 1 < out.size(); ++k)
        out[k + 1] = ((2.0 * k + 1.0) * x * out[k] - k * out[k - 1]) / (k + 1.0);
}

double legendre_P_derivative(int n, double x) {
    check_degree(n);
    x = clamp_canonical(x);
    if (n == 0) return 0.0;
    if (std::abs(x) == 1.0) {
        const double sign = (x > 0 || (n - 1) % 2 == 0) ? 1.0 : -1.0;
        return sign * 0.5 * n * (n + 1.0);
    }
    return n * (x * legendre_P(n, x) - legendre_P(n - 1, x)) / (x * x - 1.0);
}

const char* to_string(BasisKind kind) noexcept {
    return kind == BasisKind::Legendre ? "legendre" : "trigonometric";
}

BasisSystem::BasisSystem(BasisKind kind, Interval interval)
    : kind_(kind), iv_(make_interval(interval.t, interval.T)) {}

void BasisSystem::check_point(double s) const {
    if (!iv_.contains(s))
        throw DomainError("point " + std::to_string(s) + " outside [" + std::to_string(iv_.t) +
                          ", " + std::to_string(iv_.T) + "]");
}

double BasisSystem::phi(int j, double s) const {
    if (j < 0) throw DomainError("negative basis index");
    check_point(s);
    const double L = iv_.length();
    if (kind_ == BasisKind::Legendre)
        return std::sqrt((2.0 * j + 1.0) / L) * legendre_P(j, iv_.to_canonical(s));
    if (j == 0) return 1.0 / std::sqrt(L);
    const double arg = 2.0 * std::numbers::pi * harmonic(j) * (s - iv_.t) / L;
    const double c = std::sqrt(2.0 / L);
    return j % 2 == 1 ? c * std::sin(arg) : c * std::cos(arg);
}

void BasisSystem::phi_all(double s, std::span<double> out) const {
    if (out.empty()) return;
    check_point(s);
    const double L = iv_.length();
    if (kind_ == BasisKind::Legendre) {
        legendre_P_all(iv_.to_canonical(s), out);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::sqrt((2.0 * j + 1.0) / L);
        return;
    }
    out[0] = 1.0 / std::sqrt(L);
    const double c = std::sqrt(2.0 / L);
    const double base = 2.0 * std::numbers::pi * (s - iv_.t) / L;
    for (std::size_t j = 1; j < out.size(); ++j) {
        const double arg = base * harmonic(static_cast<int>(j));
        out[j] = j % 2 == 1 ? c * std::sin(arg) : c * std::cos(arg);
    }
}

double BasisSystem::integral(int j, double a, double b) const {
    if (j < 0) throw DomainError("negative basis index");
    if (!(a <= b) || !iv_.contains(a) || !iv_.contains(b))
        throw DomainError("integration range not inside the basis interval");
    const double L = iv_.length();
    if (j == 0) return (b - a) / std::sqrt(L);
    if (kind_ == BasisKind::Legendre) {
        check_degree(j + 1);
        const double za = clamp_canonical(iv_.to_canonical(a));
        const double zb = clamp_canonical(iv_.to_canonical(b));
        const auto q = [j](double z) { return legendre_P(j + 1, z) - legendre_P(j - 1, z); };
        return std::sqrt(L) / (2.0 * std::sqrt(2.0 * j + 1.0)) * (q(zb) - q(za));
    }
    // Product forms avoid cancellation for short ranges.
    const double w = 2.0 * std::numbers::pi * harmonic(j) / L;
    const double c = std::sqrt(2.0 / L) / w;
    const double mid = 0.5 * w * ((a - iv_.t) + (b - iv_.t));
    const double half = std::sin(0.5 * w * (b - a));
    return j % 2 == 1 ? 2.0 * c * std::sin(mid) * half : 2.0 * c * std::cos(mid) * half;
}

void BasisSystem::integral_all(double a, double b, std::span<double> out) const {
    if (out.empty()) return;
    if (!(a <= b) || !iv_.contains(a) || !iv_.contains(b))
        throw DomainError("integration range not inside the basis interval");
    const double L = iv_.length();
    out[0] = (b - a) / std::sqrt(L);
    if (out.size() == 1) return;
    if (kind_ == BasisKind::Legendre) {
        const std::size_t n = out.size() + 1;
        check_degree(static_cast<int>(n) - 1);
        std::vector<double> pa(n), pb(n);
        legendre_P_all(clamp_canonical(iv_.to_canonical(a)), pa);
        legendre_P_all(clamp_canonical(iv_.to_canonical(b)), pb);
        for (std::size_t j = 1; j < out.size(); ++j) {
            const double qa = pa[j + 1] - pa[j - 1];
            const double qb = pb[j + 1] - pb[j - 1];
            out[j] = std::sqrt(L) / (2.0 * std::sqrt(2.0 * j + 1.0)) * (qb - qa);
        }
        return;
    }
    for (std::size_t j = 1; j < out.size(); ++j) out[j] = integral(static_cast<int>(j), a, b);
}

}  // namespace gmfs
