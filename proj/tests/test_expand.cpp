#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gmfs/coeffs.hpp"
#include "gmfs/error.hpp"
#include "gmfs/expand.hpp"

using namespace gmfs;

namespace {

const BasisSystem kLeg{BasisKind::Legendre, {0.0, 1.0}};
const BasisSystem kTrig{BasisKind::Trigonometric, {0.0, 1.0}};

struct Moments {
    double mean = 0.0, var = 0.0;
};

template <class F>
Moments moments(int n, F&& f) {
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = f(i);
        s += x;
        s2 += x * x;
    }
    Moments m;
    m.mean = s / n;
    m.var = s2 / n - m.mean * m.mean;
    return m;
}

}  // namespace

TEST(Table, RowZeroAndDeterminism) {
    const BasisSystem b{BasisKind::Legendre, {0.0, 3.0}};
    const GaussianTable a = sample_table(7, 2, 6, b);
    EXPECT_NEAR(a(0, 0), std::sqrt(3.0), 1e-15);
    for (int j = 1; j <= 6; ++j) EXPECT_NEAR(a(0, j), 0.0, 1e-15);
    const GaussianTable c = sample_table(7, 2, 6, b);
    EXPECT_EQ(a.values(), c.values());
    const GaussianTable wider = sample_table(7, 3, 12, b);
    for (int i = 1; i <= 2; ++i)
        for (int j = 0; j <= 6; ++j) EXPECT_EQ(a(i, j), wider(i, j));
    EXPECT_NE(a(1, 2), sample_table(8, 2, 6, b)(1, 2));
}

TEST(Table, EntryStatistics) {
    const int n = 100000;
    const Moments m = moments(n, [](int s) { return sample_table(s, 1, 3, kLeg)(1, 3); });
    EXPECT_LT(std::abs(m.mean), 4.0 / std::sqrt(n));
    EXPECT_NEAR(m.var, 1.0, 0.05);
    // Entries within one table are uncorrelated.
    const Moments cross = moments(n, [](int s) {
        const GaussianTable t = sample_table(s, 2, 3, kLeg);
        return t(1, 3) * t(2, 1);
    });
    EXPECT_LT(std::abs(cross.mean), 4.0 / std::sqrt(n));
}

TEST(Truncation, SharedOrderEnforced) {
    EXPECT_NO_THROW(TruncationSpec::rectangular({3, 7}));
    EXPECT_THROW(TruncationSpec::rectangular({3, 3, 4}), DimensionError);
    EXPECT_THROW(TruncationSpec::rectangular({2, 2, 2, 2, 2}), DimensionError);
    EXPECT_EQ(TruncationSpec::uniform(4, 5).order(3), 5);
}

TEST(Expand, MultiplicityOne) {
    const BasisSystem b{BasisKind::Legendre, {0.0, 2.0}};
    const CoeffTensor c = coeff_tensor(1, 9, uniform_weights(1), b);
    const GaussianTable z = sample_table(3, 1, 9, b);
    for (int p : {0, 4, 9})
        EXPECT_NEAR(ito_truncated(c, z, {1}, TruncationSpec::uniform(1, p)), std::sqrt(2.0) * z(1, 0), 1e-14);
    EXPECT_NEAR(ito_truncated(c, z, {0}, TruncationSpec::uniform(1, 9)), 2.0, 1e-14);
    EXPECT_EQ(strat_truncated(c, z, {1}, TruncationSpec::uniform(1, 9)),
              ito_truncated(c, z, {1}, TruncationSpec::uniform(1, 9)));
}

TEST(Expand, SameIndexMultiplicityTwo) {
    const BasisSystem b{BasisKind::Legendre, {0.5, 2.0}};
    const CoeffTensor c = coeff_tensor(2, 16, uniform_weights(2), b);
    for (int seed = 0; seed < 20; ++seed) {
        const GaussianTable z = sample_table(seed, 2, 16, b);
        const double z0 = z(2, 0);
        for (int p : {0, 3, 16}) {
            const auto tr = TruncationSpec::uniform(2, p);
            EXPECT_NEAR(ito_truncated(c, z, {2, 2}, tr), 0.75 * (z0 * z0 - 1.0), 1e-13);
            EXPECT_NEAR(strat_truncated(c, z, {2, 2}, tr), 0.75 * z0 * z0, 1e-13);
            EXPECT_NEAR(hermite_reference(2, z, 2, WeightFn::one(), b, p),
                        ito_truncated(c, z, {2, 2}, tr), 1e-13);
        }
    }
}

TEST(Expand, DistinctIndexVarianceMatchesCoefficients) {
    const CoeffTensor c = coeff_tensor(2, 3, uniform_weights(2), kLeg);
    double parseval = 0.0;
    for (double v : c.values()) parseval += v * v;
    const int n = 100000;
    const auto tr = TruncationSpec::uniform(2, 3);
    const Moments m = moments(n, [&](int s) { return ito_truncated(c, sample_table(s, 2, 3, kLeg), {1, 2}, tr); });
    // Var of the sample variance for a product-Gaussian sum is bounded by ~3 v^2 / n.
    EXPECT_NEAR(m.var, parseval, 4.0 * std::sqrt(3.0 / n) * parseval);
}

TEST(Expand, StratVarianceIncreasesToKernelNorm) {
    const int n = 100000;
    double prev = 0.0;
    for (int p : {0, 2, 8}) {
        const CoeffTensor c = coeff_tensor(2, p, uniform_weights(2), kLeg);
        const auto tr = TruncationSpec::uniform(2, p);
        const Moments m = moments(n, [&](int s) { return strat_truncated(c, sample_table(s, 2, p, kLeg), {1, 2}, tr); });
        const double ci = 4.0 * std::sqrt(3.0 / n) * 0.5;
        EXPECT_LE(m.var, 0.5 + ci);
        EXPECT_GT(m.var, prev - ci);
        prev = m.var;
    }
}

TEST(Expand, CorrectionIdentityRandomConfigs) {
    std::mt19937_64 gen(20261018);
    for (int k = 2; k <= 4; ++k)
        for (const BasisSystem* b : {&kLeg, &kTrig}) {
            const int p = k == 4 ? 5 : 7;
            std::vector<WeightFn> w = uniform_weights(k);
            if (k < 4) w[1] = WeightFn::monomial(1);
            const CoeffTensor c = coeff_tensor(k, p, w, *b);
            for (int trial = 0; trial < 40; ++trial) {
                NoiseIndexTuple idx(k);
                for (int& i : idx) i = static_cast<int>(gen() % 3);
                const GaussianTable z = sample_table(gen(), 2, p, *b);
                const int q = static_cast<int>(gen() % (p + 1));
                const auto tr = TruncationSpec::uniform(k, q);
                const double strat = strat_truncated(c, z, idx, tr);
                const double ito = ito_truncated(c, z, idx, tr);
                EXPECT_NEAR(strat - ito - strat_correction(c, z, idx, tr), 0.0, 1e-12);
                EXPECT_NEAR(ito_truncated(c, z, idx, tr, ItoMethod::Contracted), ito, 1e-12);
            }
        }
}

TEST(Expand, RectangularMultiplicityTwoCorrection) {
    const std::vector<WeightFn> w{WeightFn::monomial(1), WeightFn::one()};
    const CoeffTensor c = coeff_tensor(std::vector<int>{9, 5}, w, kTrig);
    const GaussianTable z = sample_table(11, 1, 9, kTrig);
    const auto tr = TruncationSpec::rectangular({9, 5});
    const std::vector<double> d = trace_terms(5, w[0], w[1], kTrig);
    double tr5 = 0.0;
    for (double v : d) tr5 += v;
    EXPECT_NEAR(strat_correction(c, z, {1, 1}, tr), tr5, 1e-14);
    EXPECT_NEAR(strat_truncated(c, z, {1, 1}, tr) - ito_truncated(c, z, {1, 1}, tr), tr5, 1e-13);
}

TEST(Expand, DistinctIndicesNeedNoCorrection) {
    const CoeffTensor c3 = coeff_tensor(3, 6, uniform_weights(3), kLeg);
    const CoeffTensor c4 = coeff_tensor(4, 4, uniform_weights(4), kTrig);
    const GaussianTable z = sample_table(5, 4, 6, kLeg);
    const GaussianTable zt = sample_table(5, 4, 6, kTrig);
    EXPECT_EQ(strat_correction(c3, z, {1, 2, 3}, TruncationSpec::uniform(3, 6)), 0.0);
    EXPECT_EQ(strat_correction(c4, zt, {1, 2, 3, 4}, TruncationSpec::uniform(4, 4)), 0.0);
    EXPECT_NEAR(strat_truncated(c3, z, {1, 2, 3}, TruncationSpec::uniform(3, 6)),
                ito_truncated(c3, z, {1, 2, 3}, TruncationSpec::uniform(3, 6)), 1e-14);
    // Time components never trigger indicators.
    EXPECT_EQ(strat_correction(c3, z, {0, 0, 1}, TruncationSpec::uniform(3, 6)), 0.0);
}

TEST(Expand, LinearInEachRow) {
    const CoeffTensor c = coeff_tensor(3, 5, uniform_weights(3), kLeg);
    GaussianTable z = sample_table(9, 3, 5, kLeg);
    const auto tr = TruncationSpec::uniform(3, 5);
    const double base = ito_truncated(c, z, {1, 2, 3}, tr);
    for (double& v : z.row(2)) v *= -2.5;
    EXPECT_NEAR(ito_truncated(c, z, {1, 2, 3}, tr), -2.5 * base, 1e-13);
}

TEST(Expand, CorrectionLimitMultiplicityThree) {
    // i1 = i2 != 0: the correction tends to (1/2) \int (s - t) dw^{(i3)}.
    const int p = 64, n = 10000;
    const CoeffTensor c = coeff_tensor(3, p, uniform_weights(3), kLeg);
    const CoeffTensor lin = coeff_tensor(1, p, std::vector<WeightFn>{WeightFn::monomial(1)}, kLeg);
    const auto tr = TruncationSpec::uniform(3, p);
    double mse = 0.0;
    for (int s = 0; s < n; ++s) {
        const GaussianTable z = sample_table(s, 2, p, kLeg);
        double target = 0.0;
        for (int j = 0; j <= p; ++j) target -= 0.5 * lin(j) * z(2, j);
        const double d = strat_correction(c, z, {1, 1, 2}, tr) - target;
        mse += d * d;
    }
    EXPECT_LT(mse / n, 1e-3);
}

TEST(Expand, HermiteMultiplicityOne) {
    const GaussianTable z = sample_table(2, 1, 8, kTrig);
    const CoeffTensor c = coeff_tensor(1, 8, std::vector<WeightFn>{WeightFn::monomial(2)}, kTrig);
    double d = 0.0;
    for (int j = 0; j <= 8; ++j) d += c(j) * z(1, j);
    EXPECT_NEAR(hermite_reference(1, z, 1, WeightFn::monomial(2), kTrig, 8), d, 1e-14);
}

TEST(Expand, DimensionErrors) {
    const CoeffTensor c = coeff_tensor(2, 4, uniform_weights(2), kLeg);
    const GaussianTable z = sample_table(1, 2, 4, kLeg);
    EXPECT_THROW(ito_truncated(c, z, {1, 2, 1}, TruncationSpec::uniform(2, 4)), DimensionError);
    EXPECT_THROW(ito_truncated(c, z, {1, 3}, TruncationSpec::uniform(2, 4)), DimensionError);
    EXPECT_THROW(ito_truncated(c, z, {1, 2}, TruncationSpec::uniform(2, 5)), DimensionError);
    EXPECT_THROW(strat_truncated(c, z, {1, 2}, TruncationSpec::uniform(3, 2)), DimensionError);
    EXPECT_THROW(hermite_reference(2, z, 0, WeightFn::one(), kLeg, 4), DimensionError);
}

TEST(Expand, StratPreconditions) {
    EXPECT_TRUE(strat_precondition_failure(uniform_weights(4)).empty());
    EXPECT_FALSE(strat_precondition_failure(uniform_weights(4, WeightFn::monomial(1))).empty());
    const auto c1 = WeightFn::custom([](double s, const Interval&) { return s; }, 1, "c1");
    EXPECT_FALSE(strat_precondition_failure(std::vector<WeightFn>{c1, WeightFn::one()}).empty());
    EXPECT_TRUE(strat_precondition_failure(std::vector<WeightFn>{WeightFn::one(), c1}).empty());
    EXPECT_FALSE(strat_precondition_failure(std::vector<WeightFn>{WeightFn::one(), c1, c1}).empty());
}
