#pragma once

/**
 * @file ring.hpp
 * @brief The abstract commutative-ring interface used by series, Witt
 *        operations and the axiom harness.
 *
 * A ring is described by a small descriptor object `R` with a nested
 * `value_type`. The descriptor carries whatever context the elements need
 * (a CDGA model, a character group) and supplies the operations. Only
 * add / neg / mul / zero / one / equal are required; `scale` by a rational
 * marks a ring as a Q-algebra.
 */

#include <concepts>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "rational.hpp"

namespace lambda_forge {

template <class R>
concept CommutativeRing = std::equality_comparable<R>
    && requires(const R& r, const typename R::value_type& a, const typename R::value_type& b) {
           { r.zero() } -> std::convertible_to<typename R::value_type>;
           { r.one() } -> std::convertible_to<typename R::value_type>;
           { r.add(a, b) } -> std::convertible_to<typename R::value_type>;
           { r.neg(a) } -> std::convertible_to<typename R::value_type>;
           { r.mul(a, b) } -> std::convertible_to<typename R::value_type>;
           { r.equal(a, b) } -> std::convertible_to<bool>;
           { r.to_string(a) } -> std::convertible_to<std::string>;
       };

/// A commutative ring that is also a Q-algebra (exact division by integers).
template <class R>
concept RationalAlgebra = CommutativeRing<R>
    && requires(const R& r, const typename R::value_type& a, const Rational& q) {
           { r.scale(a, q) } -> std::convertible_to<typename R::value_type>;
       };

template <CommutativeRing R>
typename R::value_type ring_sub(const R& r, const typename R::value_type& a, const typename R::value_type& b)
{
    return r.add(a, r.neg(b));
}

/// n * a for an integer n, by doubling (works in any ring).
template <CommutativeRing R>
typename R::value_type ring_zmul(const R& r, const typename R::value_type& a, const mpz_class& n)
{
    if constexpr (RationalAlgebra<R>) {
        return r.scale(a, Rational(n));
    } else {
        mpz_class k = abs(n);
        auto acc = r.zero();
        auto base = a;
        while (k > 0) {
            if (mpz_odd_p(k.get_mpz_t())) {
                acc = r.add(acc, base);
            }
            k >>= 1;
            if (k > 0) {
                base = r.add(base, base);
            }
        }
        return n < 0 ? r.neg(acc) : acc;
    }
}

/// q * a; non-integer q requires a Q-algebra.
template <CommutativeRing R>
typename R::value_type ring_qmul(const R& r, const typename R::value_type& a, const Rational& q)
{
    if constexpr (RationalAlgebra<R>) {
        return r.scale(a, q);
    } else {
        if (!q.is_integer()) {
            throw std::domain_error("non-integer coefficient " + q.to_string() + " in a ring without a Q-action");
        }
        return ring_zmul(r, a, q.numerator());
    }
}

template <CommutativeRing R>
typename R::value_type ring_pow(const R& r, const typename R::value_type& a, unsigned e)
{
    auto result = r.one();
    for (unsigned i = 0; i < e; ++i) {
        result = r.mul(result, a);
    }
    return result;
}

/// The field of rationals.
struct RationalField {
    using value_type = Rational;

    Rational zero() const { return Rational(0); }
    Rational one() const { return Rational(1); }
    Rational add(const Rational& a, const Rational& b) const { return a + b; }
    Rational neg(const Rational& a) const { return -a; }
    Rational mul(const Rational& a, const Rational& b) const { return a * b; }
    Rational scale(const Rational& a, const Rational& q) const { return a * q; }
    bool equal(const Rational& a, const Rational& b) const { return a == b; }
    std::string to_string(const Rational& a) const { return a.to_string(); }
    std::string name() const { return "Q"; }

    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

/**
 * Deterministic random source.
 *
 * std::mt19937_64 output is fixed by the standard; the distributions are
 * not, so bounded draws are done here by rejection.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for sample `index` of a run seeded with `seed`.
    static Rng for_sample(std::uint64_t seed, std::uint64_t index)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x6c616d62u};
        std::uint64_t mixed = 0;
        std::uint32_t out[2];
        seq.generate(out, out + 2);
        mixed = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        return Rng(mixed);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi)
    {
        if (hi < lo) {
            throw std::invalid_argument("empty range in Rng::uniform");
        }
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
        std::uint64_t x = 0;
        do {
            x = engine_();
        } while (x >= limit);
        return lo + static_cast<long>(x % span);
    }

    bool coin() { return uniform(0, 1) == 1; }

    /// Small rational with numerator in [-bound, bound] and denominator in [1, max_den].
    Rational small_rational(long bound, long max_den = 1)
    {
        long num = uniform(-bound, bound);
        long den = uniform(1, max_den);
        return Rational(mpz_class(num), mpz_class(den));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace lambda_forge
