#include "gmfs/weight.hpp"

#include <cmath>

#include "gmfs/error.hpp"

namespace gmfs {

WeightFn WeightFn::one() { return WeightFn{}; }

WeightFn WeightFn::monomial(int q) {
    if (q < 0) throw DomainError("monomial weight needs q >= 0");
    if (q == 0) return one();
    WeightFn w;
    w.kind_ = WeightKind::Monomial;
    w.q_ = q;
    w.label_ = "monomial(" + std::to_string(q) + ")";
    return w;
}

WeightFn WeightFn::custom(std::function<double(double, const Interval&)> f, int smoothness,
                          std::string label) {
    if (!f) throw DomainError("custom weight needs a callable");
    if (smoothness < 0) throw DomainError("smoothness order must be nonnegative");
    WeightFn w;
    w.kind_ = WeightKind::CustomSmooth;
    w.smoothness_ = smoothness;
    w.label_ = std::move(label);
    w.f_ = std::make_shared<const std::function<double(double, const Interval&)>>(std::move(f));
    return w;
}

double WeightFn::operator()(double tau, const Interval& iv) const {
    switch (kind_) {
        case WeightKind::ConstantOne: return 1.0;
        case WeightKind::Monomial: return std::pow(iv.t - tau, q_);
        case WeightKind::CustomSmooth: return (*f_)(tau, iv);
    }
    return 0.0;
}

Spectral WeightFn::spectral(const Interval& iv) const {
    switch (kind_) {
        case WeightKind::ConstantOne: return {0, 0.0};
        case WeightKind::Monomial: return {q_, 0.0};
        case WeightKind::CustomSmooth:
            return {resolve_degree([&](double s) { return (*f_)(s, iv); }, iv), 0.0};
    }
    return {};
}

bool operator==(const WeightFn& a, const WeightFn& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ == WeightKind::CustomSmooth) return a.f_ == b.f_;
    return a.q_ == b.q_;
}

}  // namespace gmfs
