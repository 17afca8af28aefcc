#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

/*
 * Exact p-adic valuation arithmetic.
 *
 * Everything here is integer/rational arithmetic on arbitrary-precision
 * values; no floating point is ever used to decide an inequality.  The
 * central objects are
 *
 *   - v_p : the valuation with v_p(p) = 1, v_p(0) = infinity,
 *   - v_p of binomial coefficients via carry counting (Kummer),
 *   - exact three-way comparison of p^{-v} * n^{-lambda} against p^b,
 *     used to certify norm bounds of the form |c|_p / n^lambda <= p^b.
 *
 * All functions are pure and safe to call concurrently.
 */

namespace loggrowth {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline std::uint64_t to_u64(const BigInt& x) { return x.convert_to<std::uint64_t>(); }

inline bool fits_u64(const BigInt& x) {
    return x >= 0 && x <= std::numeric_limits<std::uint64_t>::max();
}

// Number of set bits; valid for x >= 0.
inline std::uint64_t popcount_big(const BigInt& x) {
    std::uint64_t s = 0;
    const auto& b = x.backend();
    for (unsigned i = 0; i < b.size(); ++i)
        s += std::popcount(static_cast<std::uint64_t>(b.limbs()[i]));
    return s;
}

} // namespace detail

/// A validated prime, the residue characteristic p with v_p(p) = 1.
class Prime {
public:
    explicit Prime(std::int64_t value) : value_(value) {
        if (value < 2 || !detail::is_prime_u64(static_cast<std::uint64_t>(value)))
            throw std::invalid_argument("Prime: p must be a prime number >= 2, got " + std::to_string(value));
    }
    std::int64_t value() const noexcept { return value_; }

    friend bool operator==(Prime a, Prime b) noexcept { return a.value_ == b.value_; }
    friend bool operator!=(Prime a, Prime b) noexcept { return a.value_ != b.value_; }

private:
    std::int64_t value_;
};

/// p^e as a big integer.
inline BigInt prime_power(Prime p, std::uint64_t e) {
    if (e > (1u << 26))
        throw std::overflow_error("prime_power: exponent too large to materialize");
    return boost::multiprecision::pow(BigInt(p.value()), static_cast<unsigned>(e));
}

/*
 * Value of a p-adic valuation: a finite integer, or Infinity (the
 * valuation of zero).  Infinity absorbs addition and dominates every
 * finite value in comparisons.
 */
class Valuation {
public:
    constexpr Valuation(std::int64_t v) noexcept : finite_(true), v_(v) {}

    static constexpr Valuation infinity() noexcept { return Valuation(); }

    constexpr bool is_infinity() const noexcept { return !finite_; }

    std::int64_t value() const {
        if (!finite_) throw std::domain_error("Valuation: infinite valuation has no finite value");
        return v_;
    }

    friend Valuation operator+(Valuation a, Valuation b) {
        if (a.is_infinity() || b.is_infinity()) return infinity();
        return Valuation(a.v_ + b.v_);
    }

    // Subtraction of a finite valuation (the denominator side is nonzero).
    friend Valuation operator-(Valuation a, Valuation b) {
        if (b.is_infinity()) throw std::domain_error("Valuation: cannot subtract an infinite valuation");
        if (a.is_infinity()) return infinity();
        return Valuation(a.v_ - b.v_);
    }

    friend constexpr bool operator==(Valuation a, Valuation b) noexcept {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.v_ == b.v_;
    }
    friend constexpr bool operator!=(Valuation a, Valuation b) noexcept { return !(a == b); }

    friend constexpr std::strong_ordering operator<=>(Valuation a, Valuation b) noexcept {
        if (a.finite_ && b.finite_) return a.v_ <=> b.v_;
        if (a.finite_) return std::strong_ordering::less;     // finite < infinity
        if (b.finite_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    constexpr Valuation() noexcept : finite_(false), v_(0) {}
    bool finite_;
    std::int64_t v_;
};

inline Valuation min(Valuation a, Valuation b) { return a < b ? a : b; }

/// v_p(m): the largest e with p^e | m, Infinity for m = 0.
inline Valuation vp_int(const BigInt& m, Prime p) {
    if (m == 0) return Valuation::infinity();
    const std::uint64_t pv = static_cast<std::uint64_t>(p.value());
    if (detail::fits_u64(m < 0 ? BigInt(-m) : m)) {
        std::uint64_t x = detail::to_u64(m < 0 ? BigInt(-m) : m);
        std::int64_t e = 0;
        while (x % pv == 0) { x /= pv; ++e; }
        return Valuation(e);
    }
    BigInt x = m < 0 ? BigInt(-m) : m;
    const BigInt P(p.value());
    BigInt q, r;
    std::int64_t e = 0;
    for (;;) {
        boost::multiprecision::divide_qr(x, P, q, r);
        if (r != 0) break;
        x = q;
        ++e;
    }
    return Valuation(e);
}

/// v_p(q) = v_p(num) - v_p(den); Infinity for q = 0.
inline Valuation vp_rat(const Rational& q, Prime p) {
    return vp_int(numerator(q), p) - vp_int(denominator(q), p);
}

namespace detail {

inline std::uint64_t vp_binomial_u64(std::uint64_t k, std::uint64_t n, std::uint64_t p) {
    // carries when adding n and k-n in base p
    std::uint64_t a = n, b = k - n, carries = 0, carry = 0;
    while (a != 0 || b != 0 || carry != 0) {
        std::uint64_t d = a % p + b % p + carry;
        carry = d >= p ? 1 : 0;
        carries += carry;
        a /= p;
        b /= p;
    }
    return carries;
}

} // namespace detail

/*
 * v_p(C(k, n)) by Kummer's theorem: the number of carries when adding
 * n and k-n in base p.  Equals v_p(k!) - v_p(n!) - v_p((k-n)!).
 */
inline std::uint64_t vp_binomial(const BigInt& k, const BigInt& n, Prime p) {
    if (n < 0 || n > k)
        throw std::invalid_argument("vp_binomial: requires 0 <= n <= k");
    if (detail::fits_u64(k))
        return detail::vp_binomial_u64(detail::to_u64(k), detail::to_u64(n),
                                       static_cast<std::uint64_t>(p.value()));
    if (p.value() == 2) {
        // carry count = S_2(n) + S_2(k-n) - S_2(k)
        return detail::popcount_big(n) + detail::popcount_big(k - n) - detail::popcount_big(k);
    }
    BigInt a = n, b = k - n;
    const BigInt P(p.value());
    BigInt q, r;
    std::uint64_t carries = 0, carry = 0;
    // once a is exhausted and no carry is pending, no further carry can occur
    while (a != 0 || carry != 0) {
        std::uint64_t da = 0, db = 0;
        if (a != 0) {
            boost::multiprecision::divide_qr(a, P, q, r);
            da = detail::to_u64(r);
            a = q;
        }
        if (b != 0) {
            boost::multiprecision::divide_qr(b, P, q, r);
            db = detail::to_u64(r);
            b = q;
        }
        std::uint64_t d = da + db + carry;
        carry = d >= static_cast<std::uint64_t>(p.value()) ? 1 : 0;
        carries += carry;
    }
    return carries;
}

/*
 * Checks that C(p^s*u - 1, p^r - 1) is a p-adic unit, i.e. has
 * valuation zero.  This holds for every positive integer u and every
 * 0 <= r <= s; callers treat a false return as a broken construction.
 */
inline bool is_unit_binomial(std::uint32_t s, const BigInt& u, std::uint32_t r, Prime p) {
    if (r > s) throw std::invalid_argument("is_unit_binomial: requires r <= s");
    if (u < 1) throw std::invalid_argument("is_unit_binomial: requires u >= 1");
    const BigInt top = prime_power(p, s) * u - 1;
    const BigInt bottom = prime_power(p, r) - 1;
    return vp_binomial(top, bottom, p) == 0;
}

/// Floor division with b > 0.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
    BigInt q, r;
    boost::multiprecision::divide_qr(a, b, q, r);
    if (r != 0 && a < 0) --q;
    return q;
}

/// Exact floor(c * r) via integer division; never floating point.
inline BigInt floor_mul(const Rational& c, const BigInt& r) {
    return floor_div(numerator(c) * r, denominator(c));
}

inline std::int64_t floor_mul_i64(const Rational& c, const BigInt& r) {
    BigInt f = floor_mul(c, r);
    if (f < std::numeric_limits<std::int64_t>::min() || f > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("floor_mul_i64: result does not fit in 64 bits");
    return f.convert_to<std::int64_t>();
}

/*
 * Exact three-way comparison of p^{-v} * n1^{-lambda} against p^b.
 *
 * With lambda = a/b' (b' > 0), raising both sides to the b'-th power and
 * clearing the n1 power gives the equivalent integer comparison
 *
 *     p^{(-v-b)*b'}  <=>  n1^a,
 *
 * evaluated by materializing both powers (negative exponents move the
 * factor to the other side).
 */
inline std::strong_ordering cmp_power(std::int64_t v, const BigInt& n1, const Rational& lambda,
                                      std::int64_t b, Prime p) {
    if (n1 < 1) throw std::invalid_argument("cmp_power: requires n1 >= 1");
    const BigInt a = numerator(lambda);
    const BigInt bp = denominator(lambda); // > 0, canonical
    const BigInt e = (BigInt(-v) - b) * bp;

    // guard against absurd materializations; generous for the library's workloads
    static constexpr std::int64_t kMaxExp = 1 << 24;
    const BigInt abs_a = a < 0 ? BigInt(-a) : a;
    const BigInt abs_e = e < 0 ? BigInt(-e) : e;
    if (abs_e > kMaxExp || abs_a * static_cast<std::int64_t>(msb(n1) + 1) > kMaxExp)
        throw std::overflow_error("cmp_power: exponents too large for exact comparison");

    const unsigned ea = abs_a.convert_to<unsigned>();
    const unsigned ee = abs_e.convert_to<unsigned>();
    const BigInt P(p.value());

    BigInt lhs(1), rhs(1);
    if (e >= 0) lhs *= boost::multiprecision::pow(P, ee);
    else        rhs *= boost::multiprecision::pow(P, ee);
    if (a >= 0) rhs *= boost::multiprecision::pow(n1, ea);
    else        lhs *= boost::multiprecision::pow(n1, ea);

    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

} // namespace loggrowth
