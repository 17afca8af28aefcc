#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "loggrowth/padic.hpp"

using namespace loggrowth;

/*
 * Independent oracles, deliberately written differently from the library:
 *  - valuation by repeated trial division,
 *  - factorial valuations by Legendre sums (so binomial valuations come
 *    from v_p(k!) - v_p(n!) - v_p((k-n)!), not from carry counting),
 *  - digit sums, giving the (S_p(n) + S_p(k-n) - S_p(k)) / (p-1) formula.
 */
namespace {

std::int64_t trial_division_val(BigInt m, std::int64_t p) {
    REQUIRE(m != 0);
    if (m < 0) m = -m;
    std::int64_t e = 0;
    while (m % p == 0) { m /= p; ++e; }
    return e;
}

std::uint64_t legendre_factorial_val(std::uint64_t k, std::uint64_t p) {
    std::uint64_t s = 0;
    for (std::uint64_t q = p; q <= k; q *= p) {
        s += k / q;
        if (q > k / p) break; // next q would overflow
    }
    return s;
}

BigInt digit_sum(BigInt x, std::int64_t p) {
    BigInt s = 0;
    while (x != 0) { s += x % p; x /= p; }
    return s;
}

BigInt binomial_exact(std::uint64_t k, std::uint64_t n) {
    BigInt c = 1;
    for (std::uint64_t i = 1; i <= n; ++i) { c *= k - n + i; c /= i; }
    return c;
}

} // namespace

TEST_CASE("Prime validates primality") {
    REQUIRE(Prime(2).value() == 2);
    REQUIRE(Prime(97).value() == 97);
    REQUIRE(Prime(2305843009213693951LL).value() == 2305843009213693951LL); // 2^61 - 1
    REQUIRE_THROWS_AS(Prime(0), std::invalid_argument);
    REQUIRE_THROWS_AS(Prime(1), std::invalid_argument);
    REQUIRE_THROWS_AS(Prime(-5), std::invalid_argument);
    REQUIRE_THROWS_AS(Prime(4), std::invalid_argument);
    REQUIRE_THROWS_AS(Prime(4611686018427387903LL), std::invalid_argument); // 2^62 - 1, divisible by 3
    REQUIRE(Prime(3) == Prime(3));
    REQUIRE(Prime(3) != Prime(5));
}

TEST_CASE("prime_power") {
    REQUIRE(prime_power(Prime(2), 0) == 1);
    REQUIRE(prime_power(Prime(2), 10) == 1024);
    REQUIRE(prime_power(Prime(7), 5) == 16807);
    REQUIRE(prime_power(Prime(3), 100) == boost::multiprecision::pow(BigInt(3), 100));
    REQUIRE_THROWS_AS(prime_power(Prime(2), (1ull << 26) + 1), std::overflow_error);
}

TEST_CASE("Valuation arithmetic and ordering") {
    const Valuation inf = Valuation::infinity();
    REQUIRE(inf.is_infinity());
    REQUIRE_FALSE(Valuation(3).is_infinity());
    REQUIRE(Valuation(3).value() == 3);
    REQUIRE_THROWS_AS(inf.value(), std::domain_error);

    REQUIRE(Valuation(2) + Valuation(-5) == Valuation(-3));
    REQUIRE((inf + Valuation(7)).is_infinity());
    REQUIRE((Valuation(7) + inf).is_infinity());

    REQUIRE(Valuation(2) - Valuation(5) == Valuation(-3));
    REQUIRE((inf - Valuation(5)).is_infinity());
    REQUIRE_THROWS_AS(Valuation(2) - inf, std::domain_error);

    REQUIRE(Valuation(-10) < Valuation(0));
    REQUIRE(Valuation(1000000) < inf);
    REQUIRE(inf == Valuation::infinity());
    REQUIRE_FALSE(inf < Valuation::infinity());
    REQUIRE(min(Valuation(4), inf) == Valuation(4));
    REQUIRE(min(Valuation(4), Valuation(-1)) == Valuation(-1));
}

TEST_CASE("vp_int on pinned values") {
    REQUIRE(vp_int(BigInt(8), Prime(2)) == Valuation(3));
    REQUIRE(vp_int(BigInt(0), Prime(5)).is_infinity());
    REQUIRE(vp_int(BigInt(136), Prime(3)) == Valuation(0));
    REQUIRE(vp_int(BigInt(-8), Prime(2)) == Valuation(3));
    REQUIRE(vp_int(BigInt(1), Prime(7)) == Valuation(0));
    // beyond the 64-bit fast path
    REQUIRE(vp_int(prime_power(Prime(3), 100) * 7, Prime(3)) == Valuation(100));
    REQUIRE(vp_int(prime_power(Prime(2), 200) + 1, Prime(2)) == Valuation(0));
}

TEST_CASE("vp_int matches trial division on random inputs") {
    std::mt19937_64 rng(20250814);
    std::uniform_int_distribution<std::int64_t> pdist(0, 3);
    const std::int64_t primes[] = {2, 3, 5, 7};
    std::uniform_int_distribution<std::uint64_t> mdist(1, 1'000'000'000'000ULL);
    for (int i = 0; i < 500; ++i) {
        const std::int64_t p = primes[pdist(rng)];
        BigInt m(mdist(rng));
        if (i % 2) m *= prime_power(Prime(p), 40); // force the big-integer path
        REQUIRE(vp_int(m, Prime(p)) == Valuation(trial_division_val(m, p)));
    }
}

TEST_CASE("vp_rat") {
    REQUIRE(vp_rat(Rational(3, 4), Prime(2)) == Valuation(-2));
    REQUIRE(vp_rat(Rational(9, 5), Prime(3)) == Valuation(2));
    REQUIRE(vp_rat(Rational(0), Prime(3)).is_infinity());

    // multiplicativity on random nonzero rationals
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<std::int64_t> d(-100000, 100000);
    const std::int64_t primes[] = {2, 3, 5, 7};
    for (int i = 0; i < 300; ++i) {
        std::int64_t a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (a == 0 || b == 0 || c == 0 || e == 0) continue;
        Rational q1 = Rational(a) / b, q2 = Rational(c) / e;
        Prime p(primes[i % 4]);
        Rational prod = q1 * q2;
        REQUIRE(vp_rat(prod, p) == vp_rat(q1, p) + vp_rat(q2, p));
    }
}

TEST_CASE("vp_binomial on pinned values") {
    REQUIRE(vp_binomial(BigInt(4), BigInt(2), Prime(2)) == 1); // C(4,2)=6
    REQUIRE(vp_binomial(BigInt(17), BigInt(2), Prime(3)) == 0); // C(17,2)=136
    REQUIRE(vp_binomial(BigInt(1000), BigInt(0), Prime(5)) == 0);
    REQUIRE(vp_binomial(BigInt(1000), BigInt(1000), Prime(5)) == 0);
    REQUIRE_THROWS_AS(vp_binomial(BigInt(3), BigInt(4), Prime(2)), std::invalid_argument);
    REQUIRE_THROWS_AS(vp_binomial(BigInt(3), BigInt(-1), Prime(2)), std::invalid_argument);
}

TEST_CASE("carry count equals Legendre factorial valuations, exhaustively") {
    for (std::int64_t pv : {2, 3, 5, 7}) {
        Prime p(pv);
        // v_p(k!) table via v_p(k!) = v_p((k-1)!) + v_p(k)
        std::vector<std::uint64_t> vfact(2001, 0);
        for (std::uint64_t k = 1; k <= 2000; ++k) {
            std::uint64_t v = 0, x = k;
            while (x % pv == 0) { x /= pv; ++v; }
            vfact[k] = vfact[k - 1] + v;
        }
        REQUIRE(vfact[2000] == legendre_factorial_val(2000, pv));
        for (std::uint64_t k = 0; k <= 2000; ++k)
            for (std::uint64_t n = 0; n <= k; ++n) {
                const std::uint64_t expected = vfact[k] - vfact[n] - vfact[k - n];
                if (vp_binomial(BigInt(k), BigInt(n), p) != expected) {
                    CAPTURE(pv, k, n);
                    REQUIRE(vp_binomial(BigInt(k), BigInt(n), p) == expected);
                }
            }
    }
    SUCCEED("carry counts match Legendre valuations for all k <= 2000, p in {2,3,5,7}");
}

TEST_CASE("vp_binomial agrees with exact binomials and digit sums") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<std::uint64_t> kd(0, 400);
    const std::int64_t primes[] = {2, 3, 5, 7, 11};
    for (int i = 0; i < 200; ++i) {
        std::uint64_t k = kd(rng);
        std::uniform_int_distribution<std::uint64_t> nd(0, k);
        std::uint64_t n = nd(rng);
        Prime p(primes[i % 5]);
        BigInt c = binomial_exact(k, n);
        REQUIRE(Valuation(static_cast<std::int64_t>(vp_binomial(BigInt(k), BigInt(n), p))) ==
                vp_int(c, p));
    }

    // big-integer path vs the digit-sum formula (S_p(n)+S_p(k-n)-S_p(k))/(p-1)
    std::uniform_int_distribution<int> bits(70, 130);
    for (int i = 0; i < 100; ++i) {
        Prime p(primes[i % 5]);
        BigInt k = (BigInt(1) << bits(rng)) + rng();
        BigInt n = (BigInt(rng()) << (i % 40)) % (k + 1);
        BigInt ds = digit_sum(n, p.value()) + digit_sum(k - n, p.value()) - digit_sum(k, p.value());
        REQUIRE(BigInt(vp_binomial(k, n, p)) * (p.value() - 1) == ds);
    }
}

TEST_CASE("unit binomials C(p^s*u-1, p^r-1)") {
    REQUIRE(is_unit_binomial(2, BigInt(2), 1, Prime(3))); // C(17, 2) = 136, prime to 3
    REQUIRE(is_unit_binomial(0, BigInt(1), 0, Prime(2))); // C(0, 0) = 1
    REQUIRE_THROWS_AS(is_unit_binomial(1, BigInt(2), 2, Prime(3)), std::invalid_argument);
    REQUIRE_THROWS_AS(is_unit_binomial(2, BigInt(0), 1, Prime(3)), std::invalid_argument);

    // randomized sweep: >= 10^4 cases across p in {2,3,5,7}, r <= s <= 8, u <= 1000
    std::mt19937_64 rng(99991);
    std::uniform_int_distribution<std::uint32_t> sd(0, 8);
    std::uniform_int_distribution<std::int64_t> ud(1, 1000);
    int cases = 0;
    for (std::int64_t pv : {2, 3, 5, 7}) {
        Prime p(pv);
        for (int i = 0; i < 2600; ++i) {
            std::uint32_t s = sd(rng);
            std::uniform_int_distribution<std::uint32_t> rd(0, s);
            std::uint32_t r = rd(rng);
            BigInt u(ud(rng));
            if (!is_unit_binomial(s, u, r, p)) {
                CAPTURE(pv, s, r, u.str());
                FAIL("binomial C(p^s*u-1, p^r-1) was not a unit");
            }
            ++cases;
        }
    }
    REQUIRE(cases >= 10000);
}

TEST_CASE("floor_div and floor_mul") {
    REQUIRE(floor_div(BigInt(7), BigInt(3)) == 2);
    REQUIRE(floor_div(BigInt(-7), BigInt(3)) == -3);
    REQUIRE(floor_div(BigInt(-6), BigInt(3)) == -2);
    REQUIRE(floor_div(BigInt(0), BigInt(5)) == 0);
    REQUIRE_THROWS_AS(floor_div(BigInt(1), BigInt(0)), std::invalid_argument);
    REQUIRE_THROWS_AS(floor_div(BigInt(1), BigInt(-2)), std::invalid_argument);

    REQUIRE(floor_mul(Rational(1, 2), BigInt(5)) == 2);
    REQUIRE(floor_mul(Rational(0), BigInt(9)) == 0);
    REQUIRE(floor_mul(Rational(2, 3), BigInt(7)) == 4);
    REQUIRE(floor_mul(Rational(-1, 2), BigInt(3)) == -2);
    REQUIRE(floor_mul_i64(Rational(2, 3), BigInt(7)) == 4);

    // floor(c*r) is the unique integer f with f <= c*r < f+1
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<std::int64_t> d(-1000, 1000);
    for (int i = 0; i < 500; ++i) {
        std::int64_t num = d(rng), den = d(rng), r = d(rng);
        if (den == 0) continue;
        Rational c = Rational(num) / den;
        BigInt f = floor_mul(c, BigInt(r));
        Rational cr = c * Rational(r);
        REQUIRE(Rational(f) <= cr);
        REQUIRE(cr < Rational(f + 1));
    }
}

TEST_CASE("cmp_power on pinned values") {
    REQUIRE(cmp_power(0, BigInt(4), Rational(1, 2), 1, Prime(2)) == std::strong_ordering::less);
    REQUIRE(cmp_power(-1, BigInt(1), Rational(0), 1, Prime(3)) == std::strong_ordering::equal);
    REQUIRE(cmp_power(-3, BigInt(2), Rational(1, 2), 1, Prime(2)) == std::strong_ordering::greater);
    REQUIRE_THROWS_AS(cmp_power(0, BigInt(0), Rational(1, 2), 1, Prime(2)), std::invalid_argument);
}

TEST_CASE("cmp_power equality holds exactly on constructed power coincidences") {
    // choose n1 = p^m and a = b'*j so that n1^a == p^{(-v-b)*b'} iff v == -b - j*m
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::int64_t> md(0, 8), jd(0, 5), bd(-6, 6), bpd(1, 6);
    const std::int64_t primes[] = {2, 3, 5, 7};
    for (int i = 0; i < 400; ++i) {
        Prime p(primes[i % 4]);
        const std::int64_t m = md(rng), j = jd(rng), b = bd(rng), bprime = bpd(rng);
        const Rational lambda(bprime * j, bprime); // = j, but exercises reduction
        const BigInt n1 = prime_power(p, static_cast<std::uint64_t>(m));
        const std::int64_t v = -b - j * m;
        REQUIRE(cmp_power(v, n1, lambda, b, p) == std::strong_ordering::equal);
        // p^{-v} strictly decreases in v
        REQUIRE(cmp_power(v + 1, n1, lambda, b, p) == std::strong_ordering::less);
        REQUIRE(cmp_power(v - 1, n1, lambda, b, p) == std::strong_ordering::greater);
    }
}

TEST_CASE("cmp_power agrees with floating evaluation away from equality") {
    std::mt19937_64 rng(271828);
    std::uniform_int_distribution<std::int64_t> vd(-20, 20), bd(-10, 10);
    std::uniform_int_distribution<std::int64_t> ad(0, 8), bpd(1, 6);
    std::uniform_int_distribution<std::uint64_t> nd(1, 1'000'000);
    const std::int64_t primes[] = {2, 3, 5, 7};
    int checked = 0;
    for (int i = 0; checked < 10000 && i < 100000; ++i) {
        Prime p(primes[i % 4]);
        const std::int64_t v = vd(rng), b = bd(rng);
        const Rational lambda(ad(rng), bpd(rng));
        const BigInt n1(nd(rng));
        const long double lam =
            static_cast<long double>(numerator(lambda).convert_to<std::int64_t>()) /
            static_cast<long double>(denominator(lambda).convert_to<std::int64_t>());
        const long double diff = -static_cast<long double>(v + b) * std::log(static_cast<long double>(p.value())) -
                                 lam * std::log(n1.convert_to<long double>());
        if (std::fabs(diff) < 1e-9L) continue; // too close to equality for floats to referee
        const auto ord = cmp_power(v, n1, lambda, b, p);
        REQUIRE(ord == (diff < 0 ? std::strong_ordering::less : std::strong_ordering::greater));
        ++checked;
    }
    REQUIRE(checked == 10000);
}
