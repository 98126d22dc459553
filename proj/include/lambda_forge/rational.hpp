#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational numbers on top of GMP.
 *
 * Every value is kept in lowest terms with a positive denominator, so two
 * rationals are equal iff their numerator/denominator pairs are identical.
 */

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace lambda_forge {

class Rational {
public:
    Rational() = default;

    template <std::integral I>
    Rational(I value) // NOLINT(google-explicit-constructor)
    {
        if constexpr (std::is_signed_v<I>) {
            v_ = mpq_class(mpz_class(static_cast<long>(value)));
        } else {
            v_ = mpq_class(mpz_class(static_cast<unsigned long>(value)));
        }
    }

    explicit Rational(const mpz_class& integer) : v_(integer) {}

    Rational(const mpz_class& num, const mpz_class& den)
    {
        if (den == 0) {
            throw std::domain_error("rational with zero denominator");
        }
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    /// Parses decimal numerator and denominator strings ("-3", "4").
    static Rational parse(std::string_view num, std::string_view den = "1")
    {
        mpz_class n;
        mpz_class d;
        if (n.set_str(std::string(num), 10) != 0 || d.set_str(std::string(den), 10) != 0) {
            throw std::invalid_argument("malformed rational '" + std::string(num) + "/" + std::string(den) + "'");
        }
        return Rational(n, d);
    }

    /// Parses "a" or "a/b".
    static Rational from_string(std::string_view text)
    {
        auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            return parse(text);
        }
        return parse(text.substr(0, slash), text.substr(slash + 1));
    }

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }
    std::string num_str() const { return v_.get_num().get_str(); }
    std::string den_str() const { return v_.get_den().get_str(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    std::string to_string() const
    {
        if (is_integer()) {
            return num_str();
        }
        return num_str() + "/" + den_str();
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.is_zero()) {
            throw std::domain_error("rational division by zero");
        }
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a)
    {
        Rational r;
        r.v_ = -a.v_;
        return r;
    }

    /// Adds a*b in place (the hot loop of every sparse product).
    void add_product(const Rational& a, const Rational& b)
    {
        thread_local mpq_class tmp;
        mpq_mul(tmp.get_mpq_t(), a.v_.get_mpq_t(), b.v_.get_mpq_t());
        mpq_add(v_.get_mpq_t(), v_.get_mpq_t(), tmp.get_mpq_t());
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline Rational pow(const Rational& base, unsigned exponent)
{
    Rational result(1);
    for (unsigned i = 0; i < exponent; ++i) {
        result *= base;
    }
    return result;
}

inline Rational factorial(unsigned n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

inline Rational binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n) {
        return Rational(0);
    }
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(b);
}

} // namespace lambda_forge
