#pragma once

/**
 * @file gamma.hpp
 * @brief The ring Γ(B) = Z^even(B) ⊕ Ω^odd(B)/Im d with the twisted product
 *        (ω1,φ1)*(ω2,φ2) = (ω1∧ω2, ω1∧φ2 + φ1∧ω2 − dφ1∧φ2), its Adams
 *        operations and λ-structure, and the subring Z^even.
 */

#include <string>
#include <utility>
#include <vector>

#include "cdga.hpp"
#include "lambda.hpp"

namespace lambda_forge {

class GammaElement {
public:
    GammaElement() = default;
    explicit GammaElement(const ModelPtr& model) : even_(model), odd_(model) {}

    /// Validates that `even` is closed and of even degree.
    GammaElement(GradedElement even, OddCoset odd) : even_(std::move(even)), odd_(std::move(odd))
    {
        even_.require_same(odd_.rep());
        if (even_.has_parity(1)) {
            throw std::invalid_argument("Γ element: even part has odd components");
        }
        if (!is_closed(even_)) {
            throw std::invalid_argument("Γ element: even part is not closed");
        }
    }

    static GammaElement from_even(GradedElement even)
    {
        OddCoset zero(even.model());
        return GammaElement(std::move(even), std::move(zero));
    }

    static GammaElement from_odd(OddCoset odd)
    {
        GradedElement zero(odd.model());
        return GammaElement(std::move(zero), std::move(odd));
    }

    const GradedElement& even() const { return even_; }
    const OddCoset& odd() const { return odd_; }
    const ModelPtr& model() const { return even_.model(); }

    bool is_zero() const { return even_.is_zero() && odd_.is_zero(); }

    friend bool operator==(const GammaElement& a, const GammaElement& b)
    {
        return a.even_ == b.even_ && a.odd_ == b.odd_;
    }

    std::string to_string() const { return "(" + even_.to_string() + ", " + odd_.to_string() + ")"; }

private:
    // unchecked constructor for results known to be valid
    struct Trusted {};
    GammaElement(Trusted, GradedElement even, OddCoset odd) : even_(std::move(even)), odd_(std::move(odd)) {}

    friend GammaElement gamma_add(const GammaElement&, const GammaElement&);
    friend GammaElement gamma_scale(const GammaElement&, const Rational&);
    friend GammaElement gamma_mul(const GammaElement&, const GammaElement&);
    friend GammaElement gamma_adams(long, const GammaElement&);

    GradedElement even_;
    OddCoset odd_;
};

inline GammaElement gamma_add(const GammaElement& a, const GammaElement& b)
{
    return GammaElement(GammaElement::Trusted{}, a.even_ + b.even_, a.odd_ + b.odd_);
}

inline GammaElement gamma_scale(const GammaElement& a, const Rational& q)
{
    return GammaElement(GammaElement::Trusted{}, a.even_ * q, q * a.odd_);
}

/// (ω1∧ω2, ω1∧φ2 + φ1∧ω2 − dφ1∧φ2), odd part re-canonicalized.
inline GammaElement gamma_mul(const GammaElement& a, const GammaElement& b)
{
    a.even_.require_same(b.even_);
    const GradedElement& w1 = a.even_;
    const GradedElement& w2 = b.even_;
    const GradedElement& p1 = a.odd_.rep();
    const GradedElement& p2 = b.odd_.rep();
    GradedElement odd = wedge(w1, p2) + wedge(p1, w2) - wedge(differential(p1), p2);
    return GammaElement(GammaElement::Trusted{}, wedge(w1, w2), OddCoset::normalize(odd));
}

/// Ψ^k: the degree-l part (Z^{2l}, Ω^{2l-1}/Im d) is scaled by k^l.
inline GammaElement gamma_adams(long k, const GammaElement& x)
{
    if (k < 1) {
        throw std::invalid_argument("Adams operation needs k >= 1");
    }
    // scaling preserves closedness and the canonical complement (both are graded)
    return GammaElement(GammaElement::Trusted{}, scale_by_weight(x.even_, k),
                        OddCoset::normalize(scale_by_weight(x.odd_.rep(), k)));
}

/// Ring descriptor for Γ(B).
struct GammaRing {
    using value_type = GammaElement;
    ModelPtr model;

    GammaElement zero() const { return GammaElement(model); }
    GammaElement one() const { return GammaElement::from_even(GradedElement::one(model)); }
    GammaElement add(const GammaElement& a, const GammaElement& b) const { return gamma_add(a, b); }
    GammaElement neg(const GammaElement& a) const { return gamma_scale(a, Rational(-1)); }
    GammaElement mul(const GammaElement& a, const GammaElement& b) const { return gamma_mul(a, b); }
    GammaElement scale(const GammaElement& a, const Rational& q) const { return gamma_scale(a, q); }
    bool equal(const GammaElement& a, const GammaElement& b) const { return a == b; }
    std::string to_string(const GammaElement& a) const { return a.to_string(); }

    friend bool operator==(const GammaRing& a, const GammaRing& b) { return a.model == b.model; }
};

/// λ_t in Γ(B): exp(sum (-1)^{k-1} Ψ^k_Γ(x) t^k / k) truncated at N.
inline TruncSeries<GammaRing> gamma_lambda_series(const GammaElement& x, std::size_t order)
{
    GammaRing r{x.model()};
    std::vector<GammaElement> psi;
    for (std::size_t k = 1; k <= order; ++k) {
        psi.push_back(gamma_adams(static_cast<long>(k), x));
    }
    return lambda_from_adams(r, psi, order);
}

inline GammaElement gamma_lambda(std::size_t n, const GammaElement& x)
{
    if (n == 0) {
        return GammaRing{x.model()}.one();
    }
    return gamma_lambda_series(x, n)[n];
}

/// The restriction p : Γ(B) -> Z^even(B).
inline GradedElement even_restriction_p(const GammaElement& x) { return x.even(); }

/// Random Γ element: small integer rank, closed even part, odd coset.
inline GammaElement random_gamma(const ModelPtr& m, Rng& rng, long bound = 2)
{
    GradedElement even(m);
    for (unsigned k = 2; k <= m->top_degree(); k += 2) {
        even += random_closed(m, k, rng, bound);
    }
    even += GradedElement::scalar(m, Rational(rng.uniform(-bound, bound)));
    return GammaElement(std::move(even), OddCoset::normalize(random_odd(m, rng, bound)));
}

/// λ-context on Γ(B).
struct GammaContext {
    using ring_type = GammaRing;
    using value_type = GammaElement;
    ModelPtr model;

    GammaRing ring() const { return {model}; }
    std::string name() const { return "Gamma(" + model->name() + ")"; }
    TruncSeries<GammaRing> lambda_series(const GammaElement& x, std::size_t order) const
    {
        return gamma_lambda_series(x, order);
    }
    GammaElement sample(Rng& rng) const { return random_gamma(model, rng); }
};

/**
 * Z^even(B) as the subring of Γ(B) with zero odd part; Ψ^k_Z and λ^n_Z are
 * the Γ operations restricted to it.
 */
struct ZEvenContext {
    using ring_type = GammaRing;
    using value_type = GammaElement;
    ModelPtr model;

    GammaRing ring() const { return {model}; }
    std::string name() const { return "Zeven(" + model->name() + ")"; }
    TruncSeries<GammaRing> lambda_series(const GammaElement& x, std::size_t order) const
    {
        return gamma_lambda_series(x, order);
    }
    GammaElement sample(Rng& rng) const { return GammaElement::from_even(random_gamma(model, rng).even()); }
};

/// λ^n_Z and Ψ^k_Z on closed even forms.
inline GradedElement zeven_lambda(std::size_t n, const GradedElement& omega)
{
    return gamma_lambda(n, GammaElement::from_even(omega)).even();
}

inline GradedElement zeven_adams(long k, const GradedElement& omega)
{
    return gamma_adams(k, GammaElement::from_even(omega)).even();
}

} // namespace lambda_forge
