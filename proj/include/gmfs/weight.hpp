#pragma once

#include <climits>
#include <functional>
#include <memory>
#include <string>

#include "gmfs/basis.hpp"
#include "gmfs/quadrature.hpp"

namespace gmfs {

enum class WeightKind { ConstantOne, Monomial, CustomSmooth };

/// Weight psi(tau) attached to one level of an iterated integral. Monomial q
/// means (t - tau)^q with t the start of the interval the weight is used on.
class WeightFn {
public:
    static constexpr int kSmooth = INT_MAX;

    static WeightFn one();
    static WeightFn monomial(int q);
    /// f receives (tau, interval). smoothness is the number of continuous derivatives.
    static WeightFn custom(std::function<double(double, const Interval&)> f, int smoothness,
                           std::string label);

    WeightKind kind() const noexcept { return kind_; }
    int q() const noexcept { return q_; }
    int smoothness() const noexcept { return smoothness_; }
    const std::string& label() const noexcept { return label_; }
    bool is_one() const noexcept { return kind_ == WeightKind::ConstantOne; }

    double operator()(double tau, const Interval& iv) const;
    /// Polynomial content on the interval; resolves CustomSmooth adaptively.
    Spectral spectral(const Interval& iv) const;

    friend bool operator==(const WeightFn& a, const WeightFn& b);

private:
    WeightKind kind_ = WeightKind::ConstantOne;
    int q_ = 0;
    int smoothness_ = kSmooth;
    std::string label_ = "one";
    std::shared_ptr<const std::function<double(double, const Interval&)>> f_;
};

}  // namespace gmfs
