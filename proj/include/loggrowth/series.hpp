#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "loggrowth/padic.hpp"

/*
 * Truncated power series carriers for the rank-2 family.
 *
 * The family is cut out by parameters (p, sigma, sigma'), with
 * delta = (sigma - sigma')/(1 - sigma), and is generated by the series
 *
 *     f = sum_r  p^{floor(sigma'*r)} * X^{s(r)},
 *     s(r) = p^r * (p^{floor(delta*r)+1} + 1) - 1.
 *
 * Support exponents grow like p^{r(1+delta)}, so series are stored
 * sparsely as (exponent, valuation, optional exact coefficient) triples
 * with big-integer exponents; only O(r_max) terms ever exist.
 *
 * Recentering f at the generic point t rewrites X = (X - t) + t; the
 * coefficient at (X-t)^n is a series in t whose exponents k - n are
 * pairwise distinct, so its Gauss valuation is the exact minimum of the
 * listed term valuations.
 */

namespace loggrowth {

/// Parameters (p, sigma, sigma') of the rank-2 family, with derived delta.
struct FamilyParams {
    Prime p;
    Rational sigma;
    Rational sigma_prime;
    Rational delta; // (sigma - sigma') / (1 - sigma)
    std::uint32_t r_max;
    std::optional<BigInt> n_max;

    // Validates 0 <= sigma' <= sigma < 1 and r_max >= 1.  The degenerate
    // sigma' == sigma (delta = 0) is accepted; it collapses the polygon gap
    // to zero and serves as a control configuration.
    static FamilyParams create(Prime p, Rational sigma, Rational sigma_prime, std::uint32_t r_max,
                               std::optional<BigInt> n_max = std::nullopt) {
        if (sigma_prime < 0)
            throw std::invalid_argument("FamilyParams: sigma_prime must be >= 0");
        if (sigma_prime > sigma)
            throw std::invalid_argument("FamilyParams: sigma_prime must be <= sigma");
        if (sigma >= 1)
            throw std::invalid_argument("FamilyParams: sigma must be < 1");
        if (r_max < 1)
            throw std::invalid_argument("FamilyParams: r_max must be >= 1");
        Rational delta = (sigma - sigma_prime) / (Rational(1) - sigma);
        return FamilyParams{p, std::move(sigma), std::move(sigma_prime), std::move(delta), r_max,
                            std::move(n_max)};
    }

    bool degenerate() const { return sigma == sigma_prime; }
};

/*
 * One term of a sparse series: X^exponent with known p-adic valuation.
 * The exact rational coefficient is carried only while it stays small;
 * the asymptotic analysis consumes valuations alone.
 */
struct SparseTerm {
    BigInt exponent;
    std::int64_t valuation;
    std::optional<Rational> coefficient;

    friend bool operator==(const SparseTerm&, const SparseTerm&) = default;
};

/// Sparse power series known through degree `truncation_bound`, exponents strictly increasing.
struct SparseValSeries {
    std::vector<SparseTerm> terms;
    BigInt truncation_bound;

    friend bool operator==(const SparseValSeries&, const SparseValSeries&) = default;
};

/// Dense truncated series: coefficient i belongs to X^i, degree = size() - 1.
using DenseSeries = std::vector<Rational>;

/// One t-series term of a recentered coefficient: valuation of the t^t_exponent slot.
struct TTerm {
    BigInt t_exponent;
    std::int64_t valuation;

    friend bool operator==(const TTerm&, const TTerm&) = default;
};

/*
 * The coefficient of the generic solution at (X-t)^{n+1}: a t-series with
 * strictly increasing exponents, enumerated over the r <= r_range support
 * window.  Distinct exponents rule out p-adic cancellation, so the Gauss
 * valuation of the truncated sum is exact.
 */
struct GenericCoeff {
    BigInt n;
    std::vector<TTerm> t_terms;
    std::uint32_t r_range = 0;

    friend bool operator==(const GenericCoeff&, const GenericCoeff&) = default;
};

/// s(r) = p^r * (p^{floor(delta*r)+1} + 1) - 1, strictly increasing in r.
inline BigInt support_index(std::uint32_t r, const FamilyParams& params) {
    const std::int64_t dr = floor_mul_i64(params.delta, r);
    return prime_power(params.p, r) * (prime_power(params.p, static_cast<std::uint64_t>(dr) + 1) + 1) - 1;
}

// Exact coefficients are materialized only through this support rank;
// beyond it the series is valuation-only.
inline constexpr std::uint32_t kExactCoefficientRankLimit = 30;

/*
 * f = sum_{r <= r_max} p^{floor(sigma'*r)} X^{s(r)}.  All valuations are
 * >= 0: f has p-adically integral coefficients.
 */
inline SparseValSeries build_f(const FamilyParams& params) {
    SparseValSeries f;
    f.terms.reserve(params.r_max + 1);
    for (std::uint32_t r = 0; r <= params.r_max; ++r) {
        const std::int64_t v = floor_mul_i64(params.sigma_prime, r);
        std::optional<Rational> coeff;
        if (r <= kExactCoefficientRankLimit)
            coeff = Rational(prime_power(params.p, static_cast<std::uint64_t>(v)));
        f.terms.push_back(SparseTerm{support_index(r, params), v, std::move(coeff)});
    }
    f.truncation_bound = f.terms.back().exponent;
    return f;
}

/*
 * Formal antiderivative with zero constant term:
 * (n, v, c) -> (n+1, v - v_p(n+1), c/(n+1)).
 */
inline SparseValSeries antiderivative(const SparseValSeries& s, Prime p) {
    SparseValSeries out;
    out.terms.reserve(s.terms.size());
    for (const SparseTerm& t : s.terms) {
        const BigInt n1 = t.exponent + 1;
        SparseTerm mapped;
        mapped.exponent = n1;
        mapped.valuation = t.valuation - vp_int(n1, p).value();
        if (t.coefficient)
            mapped.coefficient = *t.coefficient / Rational(n1);
        out.terms.push_back(std::move(mapped));
    }
    out.truncation_bound = s.truncation_bound + 1;
    return out;
}

/// Term-by-term d/dX; a constant term is dropped.
inline SparseValSeries derivative(const SparseValSeries& s, Prime p) {
    SparseValSeries out;
    out.terms.reserve(s.terms.size());
    for (const SparseTerm& t : s.terms) {
        if (t.exponent == 0) continue;
        SparseTerm mapped;
        mapped.exponent = t.exponent - 1;
        mapped.valuation = t.valuation + vp_int(t.exponent, p).value();
        if (t.coefficient)
            mapped.coefficient = *t.coefficient * Rational(t.exponent);
        out.terms.push_back(std::move(mapped));
    }
    out.truncation_bound = s.truncation_bound == 0 ? BigInt(0) : BigInt(s.truncation_bound - 1);
    return out;
}

/*
 * Rewrites f in powers of (X - t) and returns the coefficient of (X-t)^n:
 * the t-series sum_{k >= n, k in support} a_k C(k, n) t^{k-n}, recorded
 * through valuations v_p(a_k) + v_p(C(k, n)).
 */
inline GenericCoeff recenter_coeff(const SparseValSeries& f, const BigInt& n,
                                   const FamilyParams& params) {
    if (n > f.truncation_bound)
        throw std::invalid_argument("recenter_coeff: n exceeds the series truncation bound");
    if (n < 0)
        throw std::invalid_argument("recenter_coeff: n must be >= 0");
    GenericCoeff out;
    out.n = n;
    out.r_range = params.r_max;
    for (const SparseTerm& t : f.terms) {
        if (t.exponent < n) continue;
        const std::uint64_t binom_val = vp_binomial(t.exponent, n, params.p);
        out.t_terms.push_back(TTerm{t.exponent - n,
                                    t.valuation + static_cast<std::int64_t>(binom_val)});
    }
    return out;
}

/// Minimum valuation over t_terms; exact because exponents are pairwise distinct.
inline Valuation gauss_valuation(const GenericCoeff& c) {
    Valuation v = Valuation::infinity();
    for (const TTerm& t : c.t_terms) v = min(v, Valuation(t.valuation));
    return v;
}

} // namespace loggrowth
