#pragma once

#include <span>

namespace gmfs {

/// Legendre degrees above this are rejected; upward recurrence stays accurate below it.
inline constexpr int kMaxLegendreDegree = 4096;

struct Interval {
    double t = 0.0;
    double T = 1.0;

    double length() const noexcept { return T - t; }
    /// Canonical Legendre variable z(s) in [-1, 1].
    double to_canonical(double s) const noexcept { return (s - 0.5 * (T + t)) * 2.0 / (T - t); }
    double from_canonical(double z) const noexcept { return 0.5 * (T + t) + 0.5 * (T - t) * z; }
    bool contains(double s) const noexcept;
};

/// Validated constructor; throws DomainError unless t < T and both finite.
Interval make_interval(double t, double T);

double legendre_P(int n, double x);
/// Fills out[n] = P_n(x) for n < out.size().
void legendre_P_all(double x, std::span<double> out);
/// P_n'(x) from the recurrence (n P_{n-1} - n x P_n) / (1 - x^2), endpoint values handled separately.
double legendre_P_derivative(int n, double x);

enum class BasisKind { Legendre, Trigonometric };

const char* to_string(BasisKind kind) noexcept;

class BasisSystem {
public:
    BasisSystem(BasisKind kind, Interval interval);

    BasisKind kind() const noexcept { return kind_; }
    const Interval& interval() const noexcept { return iv_; }

    double phi(int j, double s) const;
    /// out[j] = phi_j(s) for j < out.size().
    void phi_all(double s, std::span<double> out) const;

    /// Closed-form integral of phi_j over [a, b] with t <= a <= b <= T.
    double integral(int j, double a, double b) const;
    void integral_all(double a, double b, std::span<double> out) const;

    /// Harmonic number r of a trig index (0 for j = 0); j itself for Legendre.
    static int harmonic(int j) noexcept { return (j + 1) / 2; }

private:
    void check_point(double s) const;

    BasisKind kind_;
    Interval iv_;
};

inline double phi(const BasisSystem& b, int j, double s) { return b.phi(j, s); }
inline double phi_integral(const BasisSystem& b, int j, double a, double b_) { return b.integral(j, a, b_); }

}  // namespace gmfs
