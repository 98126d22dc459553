#pragma once

/**
 * @file series.hpp
 * @brief Truncated univariate power series over an abstract commutative ring.
 */

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ring.hpp"

namespace lambda_forge {

/// c_0 + c_1 t + ... + c_N t^N, everything of degree > N discarded.
template <CommutativeRing R>
class TruncSeries {
public:
    using value_type = typename R::value_type;

    TruncSeries(R ring, std::vector<value_type> coefficients)
        : ring_(std::move(ring)), c_(std::move(coefficients))
    {
        if (c_.size() < 2) {
            throw std::invalid_argument("truncated series needs truncation order N >= 1");
        }
    }

    /// The constant series `value`, truncated at N.
    static TruncSeries constant(const R& ring, const value_type& value, std::size_t order)
    {
        std::vector<value_type> c(order + 1, ring.zero());
        c[0] = value;
        return TruncSeries(ring, std::move(c));
    }

    static TruncSeries one(const R& ring, std::size_t order) { return constant(ring, ring.one(), order); }

    const R& ring() const { return ring_; }
    std::size_t order() const { return c_.size() - 1; }
    const value_type& operator[](std::size_t i) const { return c_.at(i); }
    const std::vector<value_type>& coefficients() const { return c_; }

    bool equals(const TruncSeries& other) const
    {
        if (order() != other.order()) {
            return false;
        }
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!ring_.equal(c_[i], other.c_[i])) {
                return false;
            }
        }
        return true;
    }

    /// First index where the two series differ (up to the smaller order), or npos.
    std::size_t first_difference(const TruncSeries& other) const
    {
        std::size_t n = std::min(c_.size(), other.c_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!ring_.equal(c_[i], other.c_[i])) {
                return i;
            }
        }
        return npos;
    }

    std::string to_string() const
    {
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i > 0) {
                out += " + ";
            }
            out += "(" + ring_.to_string(c_[i]) + ")";
            if (i == 1) {
                out += "t";
            } else if (i > 1) {
                out += "t^" + std::to_string(i);
            }
        }
        return out + " + O(t^" + std::to_string(c_.size()) + ")";
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    R ring_;
    std::vector<value_type> c_;
};

namespace detail {

template <CommutativeRing R>
void require_compatible(const TruncSeries<R>& f, const TruncSeries<R>& g)
{
    if (f.order() != g.order()) {
        throw std::invalid_argument("truncation orders differ (" + std::to_string(f.order()) + " vs " +
                                    std::to_string(g.order()) + ")");
    }
    if (!(f.ring() == g.ring())) {
        throw std::invalid_argument("series over different coefficient rings");
    }
}

} // namespace detail

/// Cauchy product truncated at N.
template <CommutativeRing R>
TruncSeries<R> series_mul(const TruncSeries<R>& f, const TruncSeries<R>& g)
{
    detail::require_compatible(f, g);
    const R& r = f.ring();
    std::size_t n = f.order();
    std::vector<typename R::value_type> out(n + 1, r.zero());
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; i + j <= n; ++j) {
            out[i + j] = r.add(out[i + j], r.mul(f[i], g[j]));
        }
    }
    return TruncSeries<R>(r, std::move(out));
}

template <CommutativeRing R>
TruncSeries<R> series_add(const TruncSeries<R>& f, const TruncSeries<R>& g)
{
    detail::require_compatible(f, g);
    const R& r = f.ring();
    std::vector<typename R::value_type> out;
    out.reserve(f.order() + 1);
    for (std::size_t i = 0; i <= f.order(); ++i) {
        out.push_back(r.add(f[i], g[i]));
    }
    return TruncSeries<R>(r, std::move(out));
}

/// Inverse in 1 + A[[t]]^+; needs constant term equal to the ring identity.
template <CommutativeRing R>
TruncSeries<R> series_invert(const TruncSeries<R>& f)
{
    const R& r = f.ring();
    if (!r.equal(f[0], r.one())) {
        throw std::domain_error("series_invert: constant term is " + r.to_string(f[0]) + ", not 1");
    }
    std::size_t n = f.order();
    std::vector<typename R::value_type> g(n + 1, r.zero());
    g[0] = r.one();
    for (std::size_t k = 1; k <= n; ++k) {
        auto acc = r.zero();
        for (std::size_t i = 1; i <= k; ++i) {
            acc = r.add(acc, r.mul(f[i], g[k - i]));
        }
        g[k] = r.neg(acc);
    }
    return TruncSeries<R>(r, std::move(g));
}

/// Keeps coefficients 0..order.
template <CommutativeRing R>
TruncSeries<R> series_truncate(const TruncSeries<R>& f, std::size_t order)
{
    if (order > f.order()) {
        throw std::invalid_argument("cannot raise truncation order from " + std::to_string(f.order()) + " to " +
                                    std::to_string(order));
    }
    std::vector<typename R::value_type> c(f.coefficients().begin(),
                                          f.coefficients().begin() + static_cast<std::ptrdiff_t>(order + 1));
    return TruncSeries<R>(f.ring(), std::move(c));
}

/// d/dt; the result is known only up to t^{N-1}, so its order is N-1 (N >= 2).
template <CommutativeRing R>
TruncSeries<R> series_derivative(const TruncSeries<R>& f)
{
    const R& r = f.ring();
    std::vector<typename R::value_type> c;
    for (std::size_t i = 1; i <= f.order(); ++i) {
        c.push_back(ring_zmul(r, f[i], mpz_class(static_cast<unsigned long>(i))));
    }
    return TruncSeries<R>(r, std::move(c));
}

} // namespace lambda_forge
