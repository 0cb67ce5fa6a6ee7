#include "gmfs/expand.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "gmfs/error.hpp"
#include "gmfs/rng.hpp"

namespace gmfs {

GaussianTable::GaussianTable(int m, int p, std::uint64_t seed, std::vector<double> values)
    : m_(m), p_(p), seed_(seed), values_(std::move(values)) {
    if (m < 0 || p < 0) throw DimensionError("table needs m >= 0 and p >= 0");
    if (values_.size() != static_cast<std::size_t>(m + 1) * (p + 1))
        throw DimensionError("table value count does not match (m + 1)(p + 1)");
}

TruncationSpec TruncationSpec::uniform(int k, int p) {
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    if (p < 0) throw DomainError("truncation order must be nonnegative");
    return TruncationSpec(std::vector<int>(static_cast<std::size_t>(k), p));
}

TruncationSpec TruncationSpec::rectangular(std::vector<int> orders) {
    const std::size_t k = orders.size();
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    for (int v : orders)
        if (v < 0) throw DomainError("truncation order must be nonnegative");
    if (k >= 3 && std::adjacent_find(orders.begin(), orders.end(), std::not_equal_to<>()) != orders.end())
        throw DimensionError("multiplicity-" + std::to_string(k) +
                             " expansions are only established for one shared truncation order");
    return TruncationSpec(std::move(orders));
}

int TruncationSpec::min_order() const noexcept {
    return *std::min_element(orders_.begin(), orders_.end());
}

GaussianTable sample_table(std::uint64_t seed, int m, int p, const BasisSystem& basis) {
    if (m < 1) throw DomainError("table needs at least one Wiener component");
    if (p < 0) throw DomainError("truncation order must be nonnegative");
    std::vector<double> v(static_cast<std::size_t>(m + 1) * (p + 1));
    basis.integral_all(basis.interval().t, basis.interval().T, std::span<double>(v.data(), p + 1));
    for (int i = 1; i <= m; ++i)
        for (int j = 0; j <= p; ++j)
            v[static_cast<std::size_t>(i) * (p + 1) + j] = rng::normal(seed, rng::Stream::Table, i, j);
    return GaussianTable(m, p, seed, std::move(v));
}

namespace {

struct Setup {
    int k;
    std::array<int, 4> P{};
    std::array<std::span<const double>, 4> z{};
    std::array<std::array<bool, 4>, 4> e{};  // e[a][b]: i_a = i_b != 0
};

Setup prepare(const CoeffTensor& C, const GaussianTable& Z, const NoiseIndexTuple& idx,
              const TruncationSpec& trunc) {
    const int k = C.k();
    if (static_cast<int>(idx.size()) != k) throw DimensionError("noise tuple length differs from k");
    if (trunc.k() != k) throw DimensionError("truncation spec length differs from k");
    if (k >= 3 && trunc.min_order() != trunc.order(0))
        throw DimensionError("multiplicity 3 and 4 need one shared truncation order");
    Setup s;
    s.k = k;
    for (int l = 0; l < k; ++l) {
        if (idx[l] < 0 || idx[l] > Z.m()) throw DimensionError("noise index outside 0..m");
        if (trunc.order(l) > C.p()[l]) throw DimensionError("truncation exceeds the tensor order");
        if (trunc.order(l) > Z.p()) throw DimensionError("truncation exceeds the table order");
        s.P[l] = trunc.order(l);
        s.z[l] = Z.row(idx[l]);
    }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) s.e[a][b] = a != b && idx[a] == idx[b] && idx[a] != 0;
    return s;
}

}  // namespace

double strat_truncated(const CoeffTensor& C, const GaussianTable& Z, const NoiseIndexTuple& idx,
                       const TruncationSpec& trunc) {
    const Setup s = prepare(C, Z, idx, trunc);
    const std::vector<double>& c = C.values();
    // Contract the fastest index first.
    switch (s.k) {
        case 1: {
            double acc = 0.0;
            for (int a = 0; a <= s.P[0]; ++a) acc += c[a] * s.z[0][a];
            return acc;
        }
        case 2: {
            double acc = 0.0;
            for (int a = 0; a <= s.P[0]; ++a) {
                const double* row = c.data() + a * C.stride(0);
                double r = 0.0;
                for (int b = 0; b <= s.P[1]; ++b) r += row[b] * s.z[1][b];
                acc += r * s.z[0][a];
            }
            return acc;
        }
        case 3: {
            double acc = 0.0;
            for (int a = 0; a <= s.P[0]; ++a) {
                double ra = 0.0;
                for (int b = 0; b <= s.P[1]; ++b) {
                    const double* row = c.data() + a * C.stride(0) + b * C.stride(1);
                    double r = 0.0;
                    for (int d = 0; d <= s.P[2]; ++d) r += row[d] * s.z[2][d];
                    ra += r * s.z[1][b];
                }
                acc += ra * s.z[0][a];
            }
            return acc;
        }
        default: {
            double acc = 0.0;
            for (int a = 0; a <= s.P[0]; ++a) {
                double ra = 0.0;
                for (int b = 0; b <= s.P[1]; ++b) {
                    double rb = 0.0;
                    for (int d = 0; d <= s.P[2]; ++d) {
                        const double* row =
                            c.data() + a * C.stride(0) + b * C.stride(1) + d * C.stride(2);
                        double r = 0.0;
                        for (int f = 0; f <= s.P[3]; ++f) r += row[f] * s.z[3][f];
                        rb += r * s.z[2][d];
                    }
                    ra += rb * s.z[1][b];
                }
                acc += ra * s.z[0][a];
            }
            return acc;
        }
    }
}

double strat_correction(const CoeffTensor& C, const GaussianTable& Z, const NoiseIndexTuple& idx,
                        const TruncationSpec& trunc) {
    const Setup s = prepare(C, Z, idx, trunc);
    if (s.k == 1) return 0.0;
    if (s.k == 2) {
        if (!s.e[0][1]) return 0.0;
        double acc = 0.0;
        for (int j = 0; j <= std::min(s.P[0], s.P[1]); ++j) acc += C(j, j);
        return acc;
    }
    const int P = s.P[0];
    if (s.k == 3) {
        double acc = 0.0;
        for (int b = 0; b <= P; ++b) {
            double t12 = 0.0, t13 = 0.0, t23 = 0.0;
            for (int a = 0; a <= P; ++a) {
                t12 += C(a, a, b);
                t13 += C(a, b, a);
                t23 += C(b, a, a);
            }
            if (s.e[0][1]) acc += t12 * s.z[2][b];
            if (s.e[0][2]) acc += t13 * s.z[1][b];
            if (s.e[1][2]) acc += t23 * s.z[0][b];
        }
        return acc;
    }
    // k = 4: pair (a, b) traced, remaining positions (c, d) contracted with zeta.
    static constexpr std::array<std::array<int, 4>, 6> pairs{{
        {0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}, {1, 2, 0, 3}, {1, 3, 0, 2}, {2, 3, 0, 1}}};
    double acc = 0.0;
    std::array<int, 4> j{};
    for (const auto& pr : pairs) {
        const int a = pr[0], b = pr[1], c = pr[2], d = pr[3];
        const bool single = s.e[a][b];
        // Double pairing counted once, from the pair that contains position 0.
        const bool twice = a == 0 && s.e[a][b] && s.e[c][d];
        if (!single && !twice) continue;
        double lin = 0.0, tr = 0.0;
        for (int x = 0; x <= P; ++x)
            for (int y = 0; y <= P; ++y) {
                double m = 0.0;
                for (int t = 0; t <= P; ++t) {
                    j[a] = j[b] = t;
                    j[c] = x;
                    j[d] = y;
                    m += C(j[0], j[1], j[2], j[3]);
                }
                lin += m * s.z[c][x] * s.z[d][y];
                if (x == y) tr += m;
            }
        if (single) acc += lin;
        if (twice) acc -= tr;
    }
    return acc;
}

double ito_truncated(const CoeffTensor& C, const GaussianTable& Z, const NoiseIndexTuple& idx,
                     const TruncationSpec& trunc, ItoMethod method) {
    if (method == ItoMethod::Contracted)
        return strat_truncated(C, Z, idx, trunc) - strat_correction(C, Z, idx, trunc);
    const Setup s = prepare(C, Z, idx, trunc);
    const auto& z = s.z;
    const auto& e = s.e;
    double acc = 0.0;
    switch (s.k) {
        case 1:
            for (int a = 0; a <= s.P[0]; ++a) acc += C(a) * z[0][a];
            return acc;
        case 2:
            for (int a = 0; a <= s.P[0]; ++a)
                for (int b = 0; b <= s.P[1]; ++b) {
                    double br = z[0][a] * z[1][b];
                    if (e[0][1] && a == b) br -= 1.0;
                    acc += C(a, b) * br;
                }
            return acc;
        case 3:
            for (int a = 0; a <= s.P[0]; ++a)
                for (int b = 0; b <= s.P[1]; ++b)
                    for (int c = 0; c <= s.P[2]; ++c) {
                        double br = z[0][a] * z[1][b] * z[2][c];
                        if (e[0][1] && a == b) br -= z[2][c];
                        if (e[1][2] && b == c) br -= z[0][a];
                        if (e[0][2] && a == c) br -= z[1][b];
                        acc += C(a, b, c) * br;
                    }
            return acc;
        default:
            for (int a = 0; a <= s.P[0]; ++a)
                for (int b = 0; b <= s.P[1]; ++b)
                    for (int c = 0; c <= s.P[2]; ++c)
                        for (int d = 0; d <= s.P[3]; ++d) {
                            const bool ab = e[0][1] && a == b, ac = e[0][2] && a == c,
                                       ad = e[0][3] && a == d, bc = e[1][2] && b == c,
                                       bd = e[1][3] && b == d, cd = e[2][3] && c == d;
                            double br = z[0][a] * z[1][b] * z[2][c] * z[3][d];
                            if (ab) br -= z[2][c] * z[3][d];
                            if (ac) br -= z[1][b] * z[3][d];
                            if (ad) br -= z[1][b] * z[2][c];
                            if (bc) br -= z[0][a] * z[3][d];
                            if (bd) br -= z[0][a] * z[2][c];
                            if (cd) br -= z[0][a] * z[1][b];
                            if (ab && cd) br += 1.0;
                            if (ac && bd) br += 1.0;
                            if (ad && bc) br += 1.0;
                            acc += C(a, b, c, d) * br;
                        }
            return acc;
    }
}

double hermite_reference(int k, const GaussianTable& Z, int i, std::span<const double> coeffs,
                         double weight_sq, int p) {
    if (k < 1 || k > 4) throw DimensionError("multiplicity must be 1..4");
    if (i < 1 || i > Z.m()) throw DimensionError("Hermite form needs a Wiener component 1..m");
    if (p > Z.p() || p + 1 > static_cast<int>(coeffs.size()))
        throw DimensionError("truncation exceeds table or coefficient length");
    double d = 0.0;
    for (int j = 0; j <= p; ++j) d += coeffs[j] * Z(i, j);
    const double D = weight_sq;
    switch (k) {
        case 1: return d;
        case 2: return (d * d - D) / 2.0;
        case 3: return (d * d * d - 3.0 * d * D) / 6.0;
        default: return (d * d * d * d - 6.0 * d * d * D + 3.0 * D * D) / 24.0;
    }
}

double hermite_reference(int k, const GaussianTable& Z, int i, const WeightFn& psi,
                         const BasisSystem& basis, int p) {
    const std::vector<WeightFn> w{psi};
    const CoeffTensor c = coeff_tensor(1, p, w, basis);
    return hermite_reference(k, Z, i, c.values(), kernel_norm_sq(w, basis.interval()), p);
}

std::string strat_precondition_failure(std::span<const WeightFn> weights) {
    const int k = static_cast<int>(weights.size());
    auto smooth = [&](int l, int order) { return weights[l].smoothness() >= order; };
    switch (k) {
        case 1: return {};
        case 2:
            if (!smooth(0, 2) || !smooth(1, 1))
                return "multiplicity-2 Stratonovich expansion needs psi_1 twice and psi_2 once "
                       "continuously differentiable";
            return {};
        case 3:
            if (!smooth(0, 2) || !smooth(1, 1) || !smooth(2, 2))
                return "multiplicity-3 Stratonovich expansion needs psi_1, psi_3 twice and psi_2 "
                       "once continuously differentiable";
            return {};
        case 4:
            for (const WeightFn& w : weights)
                if (!w.is_one())
                    return "multiplicity-4 Stratonovich expansion is only established for "
                           "psi_1 = ... = psi_4 = 1";
            return {};
        default: throw DimensionError("multiplicity must be 1..4");
    }
}

}  // namespace gmfs
