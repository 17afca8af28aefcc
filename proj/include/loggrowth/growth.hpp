#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loggrowth/nabla.hpp"
#include "loggrowth/newton_polygon.hpp"
#include "loggrowth/parallel.hpp"
#include "loggrowth/series.hpp"

/*
 * Log-growth measurement and exact verification for the rank-2 family.
 *
 * A solution is of log-growth lambda when its coefficient norms are
 * O((n+1)^lambda).  Two independent instruments are provided:
 *
 *  - a numeric estimator: max of -v(c_{n+1}) * ln(p) / ln(n+1) over a tail
 *    of characteristic indices, converging to the true order at O(1/r);
 *
 *  - exact verifiers that machine-check, for every index in range, the
 *    inequality chains certifying boundedness at the critical lambda and
 *    divergence below it.  Boundedness at lambda and unboundedness below
 *    lambda together certify "exactly of log-growth lambda" at desk scale.
 *
 * The special (X = 0) solution has order 1 - sigma; the generic-point
 * solution has order 1 - sigma', strictly larger whenever sigma' < sigma.
 * The polygon report anchors both orders as Newton polygon slopes and
 * compares left endpoints: the gap is exactly sigma - sigma'.
 */

namespace loggrowth {

/// One measured coefficient: index n+1 and -v_p of the coefficient there.
struct GrowthSample {
    BigInt n1;
    std::int64_t neg_valuation;
};

inline constexpr std::size_t kEstimatorTail = 10;

namespace detail {

/// ln(x) for big x >= 1 without overflowing double conversion.
inline double log_big(const BigInt& x) {
    const unsigned bits = static_cast<unsigned>(msb(x));
    if (bits <= 900) return std::log(x.convert_to<double>());
    const BigInt top = x >> (bits - 52);
    return std::log(top.convert_to<double>()) + static_cast<double>(bits - 52) * std::log(2.0);
}

} // namespace detail

/*
 * max over the last `tail` samples of neg_valuation * ln(p) / ln(n1).
 * When n1 is exactly a power of p the ratio is computed as a quotient of
 * integers, so characteristic subsequences evaluate without float noise.
 */
inline double loggrowth_estimate(const std::vector<GrowthSample>& samples, Prime p,
                                 std::size_t tail) {
    if (samples.empty())
        throw std::invalid_argument("loggrowth_estimate: no samples");
    if (tail == 0 || tail > samples.size())
        throw std::invalid_argument("loggrowth_estimate: tail must satisfy 1 <= tail <= #samples");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = samples.size() - tail; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (s.n1 < 1) throw std::invalid_argument("loggrowth_estimate: sample with n1 < 1");
        double value;
        if (s.n1 == 1) {
            if (s.neg_valuation != 0)
                throw std::domain_error("loggrowth_estimate: unnormalizable sample at n1 = 1");
            value = 0.0;
        } else if (const Valuation e = vp_int(s.n1, p);
                   prime_power(p, static_cast<std::uint64_t>(e.value())) == s.n1) {
            value = static_cast<double>(s.neg_valuation) / static_cast<double>(e.value());
        } else {
            value = static_cast<double>(s.neg_valuation) * std::log(static_cast<double>(p.value())) /
                    detail::log_big(s.n1);
        }
        best = std::max(best, value);
    }
    return best;
}

/// Samples -v_p of the special solution coefficient at each X^{s(r)+1}.
inline std::vector<GrowthSample> special_growth_samples(const FamilyParams& params) {
    const SparseValSeries ys = antiderivative(build_f(params), params.p);
    std::vector<GrowthSample> out;
    out.reserve(ys.terms.size());
    for (const SparseTerm& t : ys.terms) out.push_back({t.exponent, -t.valuation});
    return out;
}

/*
 * Samples the Gauss valuation of the generic solution coefficient at
 * (X-t)^{n+1} along the subsequence n = p^r - 1, r = 1..r_max (r = 0 is
 * skipped: n+1 = 1 carries no growth information).
 */
inline std::vector<GrowthSample> generic_growth_samples(const FamilyParams& params) {
    std::vector<BigInt> ns;
    ns.reserve(params.r_max);
    for (std::uint32_t r = 1; r <= params.r_max; ++r) ns.push_back(prime_power(params.p, r) - 1);
    const auto coeffs = generic_pullback_coeffs(params, ns);
    std::vector<GrowthSample> out;
    out.reserve(coeffs.size());
    for (const GenericCoeff& c : coeffs) {
        const Valuation v = gauss_valuation(c);
        if (v.is_infinity())
            throw std::logic_error("generic_growth_samples: empty coefficient on the sampled subsequence");
        out.push_back({c.n + 1, -v.value()});
    }
    return out;
}

/// Exponent of p bounding |a_{s(r)}/(s(r)+1)|_p / (s(r)+1)^lambda: -floor(sigma' r) + r - (r + floor(delta r) + 1) lambda.
inline Rational special_exponent(const FamilyParams& params, const Rational& lambda, std::uint32_t r) {
    const std::int64_t sr = floor_mul_i64(params.sigma_prime, r);
    const std::int64_t dr = floor_mul_i64(params.delta, r);
    return Rational(-sr) + Rational(r) - Rational(r + dr + 1) * lambda;
}

/// Exponent of p for the generic coefficient at n = p^r - 1: -floor(sigma' r) + r - r lambda.
inline Rational generic_exponent(const FamilyParams& params, const Rational& lambda, std::uint32_t r) {
    const std::int64_t sr = floor_mul_i64(params.sigma_prime, r);
    return Rational(-sr) + Rational(r) - Rational(r) * lambda;
}

struct BoundedCheck {
    bool pass;
    std::uint32_t worst_r;
    Rational worst_exponent;
};

/*
 * Boundedness of the special solution at log-growth lambda >= 1 - sigma:
 * the normalized norm exponent stays <= 1 for every r <= r_max.
 */
inline BoundedCheck verify_special_bounded(const FamilyParams& params, const Rational& lambda) {
    if (lambda < Rational(1) - params.sigma)
        throw std::invalid_argument("verify_special_bounded: requires lambda >= 1 - sigma");
    BoundedCheck out{true, 0, special_exponent(params, lambda, 0)};
    for (std::uint32_t r = 0; r <= params.r_max; ++r) {
        const Rational e = special_exponent(params, lambda, r);
        if (e > out.worst_exponent) {
            out.worst_exponent = e;
            out.worst_r = r;
        }
    }
    out.pass = out.worst_exponent <= 1;
    return out;
}

/*
 * Divergence of the special solution below the critical order: for
 * lambda < 1 - sigma the exponent grows linearly in r; returns the least
 * r whose exponent exceeds B.
 */
inline std::uint32_t verify_special_unbounded(const FamilyParams& params, const Rational& lambda,
                                              std::int64_t B) {
    if (lambda >= Rational(1) - params.sigma)
        throw std::invalid_argument("verify_special_unbounded: requires lambda < 1 - sigma");
    for (std::uint32_t r = 0; r <= params.r_max; ++r)
        if (special_exponent(params, lambda, r) > B) return r;
    throw std::runtime_error("verify_special_unbounded: no witness within r_max; increase r_max");
}

/*
 * Divergence of the generic solution below 1 - sigma' along n = p^r - 1.
 * Each step first certifies that the governing binomial C(s(r), p^r - 1)
 * is a p-adic unit; a failure there would falsify the construction and
 * is raised loudly rather than folded into the scan.
 */
inline std::uint32_t verify_generic_unbounded(const FamilyParams& params, const Rational& lambda,
                                              std::int64_t B) {
    if (lambda >= Rational(1) - params.sigma_prime)
        throw std::invalid_argument("verify_generic_unbounded: requires lambda < 1 - sigma_prime");
    std::optional<std::uint32_t> witness;
    for (std::uint32_t r = 0; r <= params.r_max; ++r) {
        const std::int64_t dr = floor_mul_i64(params.delta, r);
        const BigInt u = prime_power(params.p, static_cast<std::uint64_t>(dr) + 1) + 1;
        if (!is_unit_binomial(r, u, r, params.p))
            throw std::logic_error("verify_generic_unbounded: binomial C(s(r), p^r-1) is not a unit "
                                   "at r = " + std::to_string(r) + "; construction falsified");
        if (!witness && generic_exponent(params, lambda, r) > B) witness = r;
    }
    if (!witness)
        throw std::runtime_error("verify_generic_unbounded: no witness within r_max; increase r_max");
    return *witness;
}

struct GenericCounterexample {
    BigInt n;
    std::uint32_t r;
    int case_id; // 1, 2, or 3 for the term-wise norm bound
};

struct GenericBoundedResult {
    bool pass = true;
    std::optional<GenericCounterexample> counterexample;
    std::optional<Rational> max_case1_exponent;
    std::optional<Rational> max_case2_exponent;
    double max_term_log = -std::numeric_limits<double>::infinity(); // log_p of the largest normalized term norm
    bool term_bound_attained = false; // whether the term-wise bound was hit with equality
    BigInt n_checked = -1;
};

/*
 * Boundedness of the generic solution at lambda = 1 - sigma': for every
 * n <= n_max and every support index k = s(r) >= n, r <= r_max, checks
 * with m = v_p(n+1)
 *
 *   Case 1 (r >= m):  -floor(sigma' r) + m (1 - lambda) <= 1,
 *   Case 2 (r <  m):  -floor(sigma' r) + r - m lambda   <  1 (strict),
 *
 * and, term-wise, that the fully normalized norm
 * |a_k C(k,n) / (n+1)|_p / (n+1)^lambda is <= p, using the true Kummer
 * valuation of the binomial (sharper than the case split, which discards
 * it in Case 1).  Any failure is reported with its least (n, r) witness.
 */
inline GenericBoundedResult verify_generic_bounded(const FamilyParams& params, const BigInt& n_max) {
    if (n_max < 0) throw std::invalid_argument("verify_generic_bounded: n_max must be >= 0");
    if (n_max > BigInt(std::uint64_t{1} << 32))
        throw std::invalid_argument("verify_generic_bounded: n_max too large to enumerate");
    const Rational lambda = Rational(1) - params.sigma_prime;

    std::vector<BigInt> support(params.r_max + 1);
    std::vector<std::int64_t> sfloor(params.r_max + 1);
    for (std::uint32_t r = 0; r <= params.r_max; ++r) {
        support[r] = support_index(r, params);
        sfloor[r] = floor_mul_i64(params.sigma_prime, r);
    }

    const std::uint64_t count = n_max.convert_to<std::uint64_t>() + 1;
    const unsigned workers = worker_count();
    std::vector<GenericBoundedResult> partial(workers);

    parallel_chunks(count, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned chunk) {
        GenericBoundedResult local;
        for (std::uint64_t nv = begin; nv < end; ++nv) {
            const BigInt n(nv);
            const BigInt n1 = n + 1;
            const std::int64_t m = vp_int(n1, params.p).value();
            for (std::uint32_t r = 0; r <= params.r_max; ++r) {
                if (support[r] < n) continue;
                int failed_case = 0;
                if (static_cast<std::int64_t>(r) >= m) {
                    const Rational e = Rational(-sfloor[r]) + Rational(m) * (Rational(1) - lambda);
                    if (!local.max_case1_exponent || e > *local.max_case1_exponent)
                        local.max_case1_exponent = e;
                    if (e > 1) failed_case = 1;
                } else {
                    const Rational e = Rational(-sfloor[r]) + Rational(r) - Rational(m) * lambda;
                    if (!local.max_case2_exponent || e > *local.max_case2_exponent)
                        local.max_case2_exponent = e;
                    if (e >= 1) failed_case = 2;
                }
                if (failed_case == 0) {
                    // term-wise bound with the exact binomial valuation
                    const std::int64_t v_term =
                        sfloor[r] + static_cast<std::int64_t>(vp_binomial(support[r], n, params.p)) - m;
                    const auto ord = cmp_power(v_term, n1, lambda, 1, params.p);
                    if (ord == std::strong_ordering::greater) failed_case = 3;
                    else if (ord == std::strong_ordering::equal) local.term_bound_attained = true;
                    const double term_log = -static_cast<double>(v_term) -
                                            lambda.convert_to<double>() * detail::log_big(n1) /
                                                std::log(static_cast<double>(params.p.value()));
                    local.max_term_log = std::max(local.max_term_log, term_log);
                }
                if (failed_case != 0) {
                    local.pass = false;
                    if (!local.counterexample || n < local.counterexample->n ||
                        (n == local.counterexample->n && r < local.counterexample->r))
                        local.counterexample = GenericCounterexample{n, r, failed_case};
                }
            }
        }
        partial[chunk] = std::move(local);
    });

    GenericBoundedResult out;
    out.n_checked = n_max;
    for (const auto& loc : partial) {
        out.pass = out.pass && loc.pass;
        if (loc.counterexample &&
            (!out.counterexample || loc.counterexample->n < out.counterexample->n ||
             (loc.counterexample->n == out.counterexample->n &&
              loc.counterexample->r < out.counterexample->r)))
            out.counterexample = loc.counterexample;
        if (loc.max_case1_exponent &&
            (!out.max_case1_exponent || *loc.max_case1_exponent > *out.max_case1_exponent))
            out.max_case1_exponent = loc.max_case1_exponent;
        if (loc.max_case2_exponent &&
            (!out.max_case2_exponent || *loc.max_case2_exponent > *out.max_case2_exponent))
            out.max_case2_exponent = loc.max_case2_exponent;
        out.max_term_log = std::max(out.max_term_log, loc.max_term_log);
        out.term_bound_attained = out.term_bound_attained || loc.term_bound_attained;
    }
    return out;
}

struct ExactCheck {
    std::string name;
    bool pass;
    std::string witness;
};

struct VerificationReport {
    FamilyParams params;
    double special_estimate = 0.0;
    double generic_estimate = 0.0;
    NewtonPolygon special_polygon;
    NewtonPolygon generic_polygon;
    Rational endpoint_gap;
    std::vector<ExactCheck> exact_checks;

    bool all_passed() const {
        for (const auto& c : exact_checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

inline std::string fmt_rat(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

} // namespace detail

// Divergence bound used by the report's unboundedness probes; the CLI's
// --bound flag drives the standalone verifiers instead.
inline constexpr std::int64_t kReportDivergenceBound = 5;
inline constexpr std::uint64_t kReportGenericNMax = 512;

/*
 * Assembles the full comparison report: polygons for both points,
 * numeric estimates against the exact targets 1 - sigma and 1 - sigma',
 * the endpoint gap, and the exact §-chain checks (boundedness at the
 * critical order, divergence strictly below it, on both sides).
 */
inline VerificationReport theorem_report(const FamilyParams& params,
                                         std::uint32_t r_max_estimator, double tolerance) {
    if (tolerance <= 0) throw std::invalid_argument("theorem_report: tolerance must be > 0");

    const FamilyParams est_params = FamilyParams::create(
        params.p, params.sigma, params.sigma_prime,
        std::max<std::uint32_t>(1, r_max_estimator), params.n_max);

    const Rational special_target = Rational(1) - params.sigma;
    const Rational generic_target = Rational(1) - params.sigma_prime;

    VerificationReport rep{params, 0.0, 0.0, NewtonPolygon{}, NewtonPolygon{}, Rational(0), {}};

    const auto special_samples = special_growth_samples(est_params);
    const auto generic_samples = generic_growth_samples(est_params);
    rep.special_estimate = loggrowth_estimate(special_samples, params.p,
                                              std::min(kEstimatorTail, special_samples.size()));
    rep.generic_estimate = loggrowth_estimate(generic_samples, params.p,
                                              std::min(kEstimatorTail, generic_samples.size()));

    rep.special_polygon = from_slopes({Rational(0), special_target}, 2);
    rep.generic_polygon = from_slopes({Rational(0), generic_target}, 2);
    rep.endpoint_gap = rep.special_polygon.left_endpoint().y - rep.generic_polygon.left_endpoint().y;

    auto add = [&rep](std::string name, bool pass, std::string witness) {
        rep.exact_checks.push_back(ExactCheck{std::move(name), pass, std::move(witness)});
    };

    add("special_polygon_matches_target", rep.special_polygon == p_sigma(special_target),
        "target slopes {0, " + detail::fmt_rat(special_target) + "}");
    add("generic_polygon_matches_target", rep.generic_polygon == p_sigma(generic_target),
        "target slopes {0, " + detail::fmt_rat(generic_target) + "}");

    const double sp_err = std::fabs(rep.special_estimate - special_target.convert_to<double>());
    add("special_estimate_converged", sp_err <= tolerance,
        "estimate " + detail::fmt_double(rep.special_estimate) + ", target " +
            detail::fmt_rat(special_target) + ", error " + detail::fmt_double(sp_err));
    const double ge_err = std::fabs(rep.generic_estimate - generic_target.convert_to<double>());
    add("generic_estimate_converged", ge_err <= tolerance,
        "estimate " + detail::fmt_double(rep.generic_estimate) + ", target " +
            detail::fmt_rat(generic_target) + ", error " + detail::fmt_double(ge_err));

    const Rational expected_gap = params.sigma - params.sigma_prime;
    add("endpoint_gap_exact", rep.endpoint_gap == expected_gap,
        "gap " + detail::fmt_rat(rep.endpoint_gap) + ", expected " + detail::fmt_rat(expected_gap));
    if (params.degenerate())
        add("endpoint_gap_zero", rep.endpoint_gap == 0, "degenerate sigma' = sigma control");
    else
        add("endpoint_gap_positive", rep.endpoint_gap > 0, "gap " + detail::fmt_rat(rep.endpoint_gap));

    add("special_lies_above_generic", lies_above(rep.special_polygon, rep.generic_polygon),
        "pointwise height comparison at all vertices");
    const Rational left_special = rep.special_polygon.left_endpoint().y;
    const Rational left_generic = rep.generic_polygon.left_endpoint().y;
    if (params.degenerate())
        add("left_endpoints_coincide", left_special == left_generic,
            detail::fmt_rat(left_special) + " vs " + detail::fmt_rat(left_generic));
    else
        add("left_endpoint_strictly_above", left_special > left_generic,
            detail::fmt_rat(left_special) + " > " + detail::fmt_rat(left_generic));

    {
        const auto bc = verify_special_bounded(params, special_target);
        add("special_bounded_at_critical_order", bc.pass,
            "worst exponent " + detail::fmt_rat(bc.worst_exponent) + " at r = " +
                std::to_string(bc.worst_r));
    }
    try {
        const Rational lam = special_target / 2;
        const std::uint32_t w = verify_special_unbounded(params, lam, kReportDivergenceBound);
        add("special_unbounded_below_critical_order", true,
            "exponent exceeds " + std::to_string(kReportDivergenceBound) + " at r = " +
                std::to_string(w) + " for lambda = " + detail::fmt_rat(lam));
    } catch (const std::runtime_error& e) {
        add("special_unbounded_below_critical_order", false, e.what());
    }
    {
        const BigInt n_max = params.n_max.value_or(BigInt(kReportGenericNMax));
        const auto gb = verify_generic_bounded(params, n_max);
        std::string witness = "n <= " + gb.n_checked.str();
        if (gb.max_case1_exponent)
            witness += ", max Case 1 exponent " + detail::fmt_rat(*gb.max_case1_exponent);
        if (gb.max_case2_exponent)
            witness += ", max Case 2 exponent " + detail::fmt_rat(*gb.max_case2_exponent);
        if (!gb.pass && gb.counterexample)
            witness += ", counterexample n = " + gb.counterexample->n.str() + ", r = " +
                       std::to_string(gb.counterexample->r) + ", case " +
                       std::to_string(gb.counterexample->case_id);
        add("generic_bounded_at_critical_order", gb.pass, std::move(witness));
    }
    try {
        const Rational lam = generic_target / 2;
        const std::uint32_t w = verify_generic_unbounded(params, lam, kReportDivergenceBound);
        add("generic_unbounded_below_critical_order", true,
            "exponent exceeds " + std::to_string(kReportDivergenceBound) + " at r = " +
                std::to_string(w) + " for lambda = " + detail::fmt_rat(lam));
    } catch (const std::runtime_error& e) {
        add("generic_unbounded_below_critical_order", false, e.what());
    }

    return rep;
}

} // namespace loggrowth
