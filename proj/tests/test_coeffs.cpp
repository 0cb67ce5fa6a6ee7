#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "gmfs/coeffs.hpp"
#include "gmfs/error.hpp"
#include "oracle_quad.hpp"

using namespace gmfs;

namespace {

const BasisSystem kLeg{BasisKind::Legendre, {0.0, 1.0}};
const BasisSystem kTrig{BasisKind::Trigonometric, {0.0, 1.0}};

WeightFn exp_weight() {
    return WeightFn::custom([](double s, const Interval& iv) { return std::exp(0.7 * (s - iv.t)); },
                            WeightFn::kSmooth, "exp");
}

// Nested simplex integral by Boost Gauss, independent of the collocation grids.
double nested_oracle(const std::vector<int>& j, const std::vector<WeightFn>& w, const BasisSystem& b) {
    const Interval& iv = b.interval();
    std::function<double(int, double)> inner = [&](int l, double upper) -> double {
        // \int_t^upper psi_l phi_{j_l} * inner(l - 1, s) ds
        return oracle::panels(
            [&](double s) {
                const double rest = l == 0 ? 1.0 : inner(l - 1, s);
                return w[l](s, iv) * b.phi(j[l], s) * rest;
            },
            iv.t, upper, 2);
    };
    return inner(static_cast<int>(j.size()) - 1, iv.T);
}

double bessel_sum(const CoeffTensor& c) {
    double acc = 0.0;
    for (double v : c.values()) acc += v * v;
    return acc;
}

}  // namespace

TEST(Coeffs, MultiplicityOneLegendre) {
    const BasisSystem b{BasisKind::Legendre, {0.0, 2.0}};
    const auto w = uniform_weights(1);
    const CoeffTensor c = coeff_tensor(1, 8, w, b);
    EXPECT_NEAR(c(0), std::sqrt(2.0), 1e-14);
    for (int j = 1; j <= 8; ++j) EXPECT_NEAR(c(j), 0.0, 1e-14);
}

TEST(Coeffs, MultiplicityTwoExamples) {
    const auto w = uniform_weights(2);
    const std::vector<int> j00{0, 0};
    EXPECT_NEAR(fourier_coeff(j00, w, kLeg), 0.5, 1e-15);
    const CoeffTensor c = coeff_tensor(2, 2, w, kLeg);
    EXPECT_NEAR(c(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(c(1, 1), 0.0, 1e-15);
    EXPECT_NEAR(c(2, 2), 0.0, 1e-15);
    for (const BasisSystem* b : {&kLeg, &kTrig})
        for (int j = 0; j < 12; ++j) {
            const std::vector<int> jj{j, j};
            const double I = b->integral(j, 0.0, 1.0);
            EXPECT_NEAR(fourier_coeff(jj, w, *b), 0.5 * I * I, 1e-14);
        }
}

TEST(Coeffs, EntriesMatchNestedQuadrature) {
    const std::vector<WeightFn> w2{WeightFn::monomial(1), WeightFn::one()};
    const std::vector<WeightFn> w3{WeightFn::one(), exp_weight(), WeightFn::monomial(2)};
    for (const BasisSystem* b : {&kLeg, &kTrig}) {
        for (std::vector<int> j : {std::vector<int>{3, 1}, {0, 4}, {5, 5}}) {
            EXPECT_NEAR(fourier_coeff(j, w2, *b), nested_oracle(j, w2, *b), 1e-12);
        }
        for (std::vector<int> j : {std::vector<int>{1, 2, 0}, {3, 0, 2}}) {
            EXPECT_NEAR(fourier_coeff(j, w3, *b), nested_oracle(j, w3, *b), 1e-12);
        }
    }
}

TEST(Coeffs, FastKernelMatchesReference) {
    struct Case {
        std::vector<int> p;
        std::vector<WeightFn> w;
    };
    const std::vector<Case> cases{
        {{6}, {WeightFn::monomial(2)}},
        {{5, 7}, {WeightFn::one(), WeightFn::monomial(1)}},
        {{4, 3, 5}, {WeightFn::monomial(1), exp_weight(), WeightFn::one()}},
        {{4, 4, 4, 4}, uniform_weights(4)},
        {{3, 2, 4, 3}, {WeightFn::one(), WeightFn::monomial(1), WeightFn::one(), exp_weight()}},
    };
    for (const BasisSystem* b : {&kLeg, &kTrig})
        for (const Case& cs : cases) {
            const CoeffTensor fast = coeff_tensor(cs.p, cs.w, *b);
            const CoeffTensor ref = coeff_tensor_reference(cs.p, cs.w, *b);
            ASSERT_EQ(fast.values().size(), ref.values().size());
            for (std::size_t i = 0; i < ref.values().size(); ++i)
                EXPECT_NEAR(fast.values()[i], ref.values()[i], 1e-13) << i;
        }
}

TEST(Coeffs, TensorMatchesSingleEntries) {
    const std::vector<WeightFn> w{WeightFn::one(), WeightFn::monomial(1), WeightFn::one()};
    const CoeffTensor c = coeff_tensor(3, 4, w, kTrig);
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; b += 2)
            for (int d = 0; d <= 4; d += 3) {
                const std::vector<int> j{a, b, d};
                EXPECT_NEAR(c(a, b, d), fourier_coeff(j, w, kTrig), 1e-13);
                EXPECT_EQ(c(a, b, d), c.at(j));
            }
}

TEST(Coeffs, DeterministicBytesAcrossRunsAndExecution) {
    const auto w = uniform_weights(4);
    const CoeffTensor a = coeff_tensor(4, 9, w, kLeg);
    const CoeffTensor b = coeff_tensor(4, 9, w, kLeg);
    const CoeffTensor s = coeff_tensor(4, 9, w, kLeg, Execution::Serial);
    ASSERT_EQ(a.values().size(), b.values().size());
    EXPECT_EQ(0, std::memcmp(a.values().data(), b.values().data(), a.values().size() * sizeof(double)));
    EXPECT_EQ(0, std::memcmp(a.values().data(), s.values().data(), a.values().size() * sizeof(double)));
}

TEST(Coeffs, SymmetrizationIdentity) {
    for (const BasisSystem* b : {&kLeg, &kTrig}) {
        const WeightFn psi = WeightFn::monomial(1);
        std::vector<double> m(9);
        for (int j = 0; j <= 8; ++j)
            m[j] = oracle::panels([&](double s) { return psi(s, b->interval()) * b->phi(j, s); }, 0.0, 1.0);
        const CoeffTensor c2 = coeff_tensor(2, 8, uniform_weights(2, psi), *b);
        for (int x = 0; x <= 8; ++x)
            for (int y = 0; y <= 8; ++y) EXPECT_NEAR(c2(x, y) + c2(y, x), m[x] * m[y], 1e-10);
        const CoeffTensor c3 = coeff_tensor(3, 8, uniform_weights(3, psi), *b);
        for (int x = 0; x <= 8; ++x)
            for (int y = 0; y <= 8; ++y)
                for (int z = 0; z <= 8; ++z) {
                    const double sym = c3(x, y, z) + c3(x, z, y) + c3(y, x, z) + c3(y, z, x) +
                                       c3(z, x, y) + c3(z, y, x);
                    EXPECT_NEAR(sym, m[x] * m[y] * m[z], 1e-10);
                }
    }
}

TEST(Coeffs, ConstantWeightSymmetricPart) {
    const BasisSystem b{BasisKind::Legendre, {1.0, 3.5}};
    const CoeffTensor c = coeff_tensor(2, 10, uniform_weights(2), b);
    for (int x = 0; x <= 10; ++x)
        for (int y = 0; y <= 10; ++y)
            EXPECT_NEAR(c(x, y) + c(y, x), (x == 0 && y == 0) ? 2.5 : 0.0, 1e-13);
}

TEST(Coeffs, KernelNorm) {
    const Interval iv{0.0, 1.0};
    EXPECT_NEAR(kernel_norm_sq(uniform_weights(2), iv), 0.5, 1e-15);
    EXPECT_NEAR(kernel_norm_sq(uniform_weights(3), iv), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(kernel_norm_sq(uniform_weights(4), iv), 1.0 / 24.0, 1e-15);
    const std::vector<WeightFn> w1{WeightFn::monomial(1)};
    EXPECT_NEAR(kernel_norm_sq(w1, iv), oracle::adaptive([](double s) { return s * s; }, 0, 1), 1e-14);
    const std::vector<WeightFn> w2{exp_weight(), WeightFn::monomial(1)};
    const double ref = oracle::panels(
        [](double s2) {
            return s2 * s2 * oracle::panels([](double s1) { return std::exp(1.4 * s1); }, 0.0, s2, 2);
        },
        0.0, 1.0, 4);
    EXPECT_NEAR(kernel_norm_sq(w2, iv), ref, 1e-13);
}

TEST(Coeffs, BesselInequalityGrowsToNorm) {
    const auto w = uniform_weights(2);
    double prev = 0.0;
    for (int p = 0; p <= 24; ++p) {
        const double s = bessel_sum(coeff_tensor(2, p, w, kLeg));
        EXPECT_GT(s, prev);
        EXPECT_LE(s, 0.5 + 1e-15);
        prev = s;
    }
    const std::vector<WeightFn> w3{WeightFn::one(), WeightFn::monomial(1), WeightFn::one()};
    EXPECT_LE(bessel_sum(coeff_tensor(3, 10, w3, kTrig)), kernel_norm_sq(w3, kTrig.interval()));
}

TEST(Coeffs, TraceSumExamples) {
    const auto one = WeightFn::one();
    for (int p : {0, 1, 7, 40}) {
        EXPECT_NEAR(trace_sum(p, one, one, kLeg), 0.5, 1e-14);
        EXPECT_NEAR(trace_sum(p, one, one, kTrig), 0.5, 1e-14);
    }
    const auto lin = WeightFn::monomial(1);
    const double half = 0.5 * oracle::adaptive([](double s) { return s * s; }, 0, 1);
    double prev = 1.0;
    for (int p : {8, 16, 32, 64, 128}) {
        const double r = std::abs(trace_sum(p, lin, lin, kTrig) - half);
        EXPECT_LE(r, prev);
        prev = r;
    }
    EXPECT_LT(std::abs(trace_sum(128, lin, lin, kLeg) - half), 1e-4);
}

TEST(Coeffs, Errors) {
    const auto w4 = uniform_weights(4);
    EXPECT_THROW(coeff_tensor(4, 64, w4, kLeg), SizingError);
    CoeffLimits tight;
    tight.max_entries = 1000;
    EXPECT_THROW(coeff_tensor(3, 10, uniform_weights(3), kLeg, Execution::Parallel, tight), SizingError);
    EXPECT_THROW(coeff_tensor(3, 2, uniform_weights(2), kLeg), DimensionError);
    const std::vector<WeightFn> rough{WeightFn::custom(
        [](double s, const Interval&) { return std::abs(s - 0.5); }, 0, "kink")};
    const std::vector<int> j{1};
    EXPECT_THROW(fourier_coeff(j, rough, kLeg), QuadratureError);
    EXPECT_THROW(kernel_norm_sq(rough, kLeg.interval()), QuadratureError);
}
