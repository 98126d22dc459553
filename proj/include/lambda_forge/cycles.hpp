#pragma once

/**
 * @file cycles.hpp
 * @brief Split differential K-cycles with labelled line roots.
 *
 * A class is stored as a signed multiset of canonical line roots (closed
 * degree-2 forms projected off Im d, each tagged with a label) together
 * with one odd coset per label. The plain differential K-ring uses a single
 * trivial label; the equivariant ring labels roots and forms by characters.
 *
 * Every class is therefore sum_i m_i [L_i, 0] + a(φ), and the products,
 * λ-operations and Adams operations act on that data.
 */

#include <algorithm>
#include <concepts>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdga.hpp"
#include "lambda.hpp"

namespace lambda_forge {

/**
 * Label policy: a commutative monoid of labels with integer multiples, and
 * the odd parts [λ^j(ch, φ)]_odd of the matching Γ-type ring.
 */
template <class P>
concept LabelPolicy = std::equality_comparable<P> && requires(const P& p, const typename P::label_type& a, long k) {
    requires std::totally_ordered<typename P::label_type>;
    { p.identity() } -> std::convertible_to<typename P::label_type>;
    { p.combine(a, a) } -> std::convertible_to<typename P::label_type>;
    { p.multiple(k, a) } -> std::convertible_to<typename P::label_type>;
    { p.label_string(a) } -> std::convertible_to<std::string>;
    { p.describe() } -> std::convertible_to<std::string>;
};

inline Vec vec_add(const Vec& a, const Vec& b)
{
    Vec out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!b[i].is_zero()) {
            out[i] += b[i];
        }
    }
    return out;
}

inline Vec vec_scale(const Vec& a, const Rational& q)
{
    Vec out = a;
    for (auto& x : out) {
        if (!x.is_zero()) {
            x *= q;
        }
    }
    return out;
}

/// Transgression CS(x, x', β) = β ∧ sum_{n>=1} (1/n!) sum_{j<n} x^j x'^{n-1-j}, where x' = x + dβ.
inline GradedElement chern_simons_line(const GradedElement& x, const GradedElement& xp, const GradedElement& beta)
{
    const ModelPtr& m = x.model();
    const unsigned top = m->top_degree();
    // powers of x and x'
    std::vector<GradedElement> px{GradedElement::one(m)};
    std::vector<GradedElement> pxp{GradedElement::one(m)};
    for (unsigned n = 1; 2 * n <= top; ++n) {
        px.push_back(wedge(px.back(), x));
        pxp.push_back(wedge(pxp.back(), xp));
    }
    GradedElement series(m);
    for (unsigned n = 1; 2 * (n - 1) + 1 <= top; ++n) {
        GradedElement h(m);
        for (unsigned j = 0; j < n; ++j) {
            if (j < px.size() && n - 1 - j < pxp.size()) {
                h += wedge(px[j], pxp[n - 1 - j]);
            }
        }
        series += h * (Rational(1) / factorial(n));
    }
    return wedge(beta, series);
}

template <LabelPolicy P>
class BasicClass {
public:
    using label_type = typename P::label_type;
    using RootKey = std::pair<Vec, label_type>;
    using RootMap = std::map<RootKey, long>;
    using PhiMap = std::map<label_type, OddCoset>;

    BasicClass() = default;
    BasicClass(ModelPtr model, P policy) : model_(std::move(model)), policy_(std::move(policy)) {}

    /// Builds from canonical data (canonical roots, canonical cosets); drops zero entries.
    static BasicClass from_canonical(ModelPtr model, P policy, RootMap roots, PhiMap phi)
    {
        BasicClass c(std::move(model), std::move(policy));
        std::erase_if(roots, [](const auto& kv) { return kv.second == 0; });
        std::erase_if(phi, [](const auto& kv) { return kv.second.is_zero(); });
        c.roots_ = std::move(roots);
        c.phi_ = std::move(phi);
        return c;
    }

    const ModelPtr& model() const { return model_; }
    const P& policy() const { return policy_; }
    const RootMap& roots() const { return roots_; }
    const PhiMap& phi() const { return phi_; }

    OddCoset phi_at(const label_type& l) const
    {
        auto it = phi_.find(l);
        return it == phi_.end() ? OddCoset(model_) : it->second;
    }

    RootMap plus_roots() const
    {
        RootMap out;
        for (const auto& [k, m] : roots_) {
            if (m > 0) {
                out.emplace(k, m);
            }
        }
        return out;
    }

    RootMap minus_roots() const
    {
        RootMap out;
        for (const auto& [k, m] : roots_) {
            if (m < 0) {
                out.emplace(k, -m);
            }
        }
        return out;
    }

    long virtual_rank() const
    {
        long r = 0;
        for (const auto& [k, m] : roots_) {
            r += m;
        }
        return r;
    }

    bool is_zero() const { return roots_.empty() && phi_.empty(); }

    friend bool operator==(const BasicClass& a, const BasicClass& b)
    {
        return a.model_ == b.model_ && a.policy_ == b.policy_ && a.roots_ == b.roots_ && a.phi_ == b.phi_;
    }

    std::string root_string(const RootKey& k) const
    {
        std::string s = GradedElement::from_component(model_, 2, k.first).to_string();
        std::string l = policy_.label_string(k.second);
        return l.empty() ? s : s + "⊗" + l;
    }

    std::string to_string() const
    {
        std::string plus;
        std::string minus;
        for (const auto& [k, m] : roots_) {
            std::string& dst = m > 0 ? plus : minus;
            for (long i = 0; i < (m > 0 ? m : -m); ++i) {
                dst += (dst.empty() ? "" : ", ") + root_string(k);
            }
        }
        std::string ph;
        for (const auto& [l, c] : phi_) {
            std::string ls = policy_.label_string(l);
            ph += (ph.empty() ? "" : " + ") + c.to_string() + (ls.empty() ? "" : "⊗" + ls);
        }
        return "[{" + plus + "} − {" + minus + "}; " + (ph.empty() ? "0" : ph) + "]";
    }

private:
    ModelPtr model_;
    P policy_;
    RootMap roots_;
    PhiMap phi_;
};

/// Unnormalized cycle data: raw closed degree-2 roots and raw odd forms.
template <LabelPolicy P>
struct BasicCycle {
    using label_type = typename P::label_type;
    std::vector<std::pair<GradedElement, label_type>> roots;
    std::map<label_type, GradedElement> phi;
};

namespace detail {

inline void require_line_root(const GradedElement& x)
{
    if (!(x.part(2) == x)) {
        throw std::invalid_argument("line root must be concentrated in degree 2: " + x.to_string());
    }
    if (!is_closed(x)) {
        throw std::invalid_argument("line root must be closed: " + x.to_string());
    }
}

/// e^x for a canonical root x (degree-2 coordinates), memoized per thread.
inline GradedElement exp_of_root(const ModelPtr& m, const Vec& x)
{
    thread_local std::map<std::pair<const CDGAModel*, Vec>, GradedElement> memo;
    thread_local std::vector<ModelPtr> keep_alive;
    auto key = std::make_pair(m.get(), x);
    auto it = memo.find(key);
    if (it != memo.end()) {
        return it->second;
    }
    if (memo.size() > 200000) {
        memo.clear();
        keep_alive.clear();
    }
    if (std::find(keep_alive.begin(), keep_alive.end(), m) == keep_alive.end()) {
        keep_alive.push_back(m); // the raw pointer key stays valid while cached
    }
    return memo.emplace(std::move(key), exp_form(GradedElement::from_component(m, 2, x))).first->second;
}

template <class L>
void add_form(std::map<L, GradedElement>& acc, const L& l, const GradedElement& g)
{
    auto it = acc.find(l);
    if (it == acc.end()) {
        acc.emplace(l, g);
    } else {
        it->second += g;
    }
}

template <class L>
std::map<L, OddCoset> normalize_all(const std::map<L, GradedElement>& forms)
{
    std::map<L, OddCoset> out;
    for (const auto& [l, g] : forms) {
        auto c = OddCoset::normalize(g);
        if (!c.is_zero()) {
            out.emplace(l, std::move(c));
        }
    }
    return out;
}

} // namespace detail

/// Chern character per label: sum over roots of m·e^x.
template <LabelPolicy P>
std::map<typename P::label_type, GradedElement> ch_of_roots(const ModelPtr& m,
                                                           const typename BasicClass<P>::RootMap& roots)
{
    std::map<typename P::label_type, GradedElement> out;
    for (const auto& [k, mult] : roots) {
        auto e = detail::exp_of_root(m, k.first) * Rational(mult);
        detail::add_form(out, k.second, e);
    }
    return out;
}

/**
 * Normal form of [plus] − [minus]: each root x is replaced by its canonical
 * representative x̄ = x + dβ̄ (β̄ the canonical preimage of x̄ − x) and the
 * odd part absorbs ±CS(x, x̄, β̄); equal plus/minus roots cancel.
 */
template <LabelPolicy P>
BasicClass<P> normal_form(const ModelPtr& m, const P& policy, const BasicCycle<P>& plus, const BasicCycle<P>& minus)
{
    using L = typename P::label_type;
    typename BasicClass<P>::RootMap roots;
    std::map<L, GradedElement> phi;
    auto absorb = [&](const BasicCycle<P>& c, long sign) {
        for (const auto& [x, label] : c.roots) {
            if (x.model() != m) {
                throw std::invalid_argument("root from model '" + x.model_name() + "' in a cycle over '" + m->name() +
                                            "'");
            }
            detail::require_line_root(x);
            GradedElement xbar = project_mod_exact(x);
            if (!(xbar == x)) {
                GradedElement beta = canonical_preimage(xbar - x);
                detail::add_form(phi, label, chern_simons_line(x, xbar, beta) * Rational(sign));
            }
            roots[{xbar.component(2), label}] += sign;
        }
        for (const auto& [label, f] : c.phi) {
            if (f.model() != m) {
                throw std::invalid_argument("odd form from a different model");
            }
            detail::add_form(phi, label, f * Rational(sign));
        }
    };
    absorb(plus, 1);
    absorb(minus, -1);
    return BasicClass<P>::from_canonical(m, policy, std::move(roots), detail::normalize_all(phi));
}

template <LabelPolicy P>
void require_same_ring(const BasicClass<P>& a, const BasicClass<P>& b)
{
    if (a.model() != b.model()) {
        throw std::invalid_argument("classes over different models ('" + a.model()->name() + "' vs '" +
                                    b.model()->name() + "')");
    }
    if (!(a.policy() == b.policy())) {
        throw std::invalid_argument("classes with different label groups");
    }
}

template <LabelPolicy P>
BasicClass<P> class_add(const BasicClass<P>& a, const BasicClass<P>& b)
{
    require_same_ring(a, b);
    auto roots = a.roots();
    for (const auto& [k, m] : b.roots()) {
        roots[k] += m;
    }
    auto phi = a.phi();
    for (const auto& [l, c] : b.phi()) {
        auto it = phi.find(l);
        if (it == phi.end()) {
            phi.emplace(l, c);
        } else {
            it->second = it->second + c;
        }
    }
    return BasicClass<P>::from_canonical(a.model(), a.policy(), std::move(roots), std::move(phi));
}

template <LabelPolicy P>
BasicClass<P> class_neg(const BasicClass<P>& a)
{
    auto roots = a.roots();
    for (auto& [k, m] : roots) {
        m = -m;
    }
    auto phi = a.phi();
    for (auto& [l, c] : phi) {
        c = -c;
    }
    return BasicClass<P>::from_canonical(a.model(), a.policy(), std::move(roots), std::move(phi));
}

/// Multiplicative unit: the trivial line with the identity label.
template <LabelPolicy P>
BasicClass<P> class_one(const ModelPtr& m, const P& policy)
{
    typename BasicClass<P>::RootMap roots;
    roots[{Vec(m->dim(2), Rational(0)), policy.identity()}] = 1;
    return BasicClass<P>::from_canonical(m, policy, std::move(roots), {});
}

/// a(φ) = [0, φ].
template <LabelPolicy P>
BasicClass<P> class_from_phi(const ModelPtr& m, const P& policy, typename BasicClass<P>::PhiMap phi)
{
    return BasicClass<P>::from_canonical(m, policy, {}, std::move(phi));
}

/// Tensor product of signed root multisets: roots add, labels combine, multiplicities multiply.
template <LabelPolicy P>
typename BasicClass<P>::RootMap root_product(const P& policy, const typename BasicClass<P>::RootMap& a,
                                             const typename BasicClass<P>::RootMap& b)
{
    typename BasicClass<P>::RootMap out;
    for (const auto& [ka, ma] : a) {
        for (const auto& [kb, mb] : b) {
            out[{vec_add(ka.first, kb.first), policy.combine(ka.second, kb.second)}] += ma * mb;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

/**
 * Cup product: roots tensor, odd part
 * (ch A⁺ − ch A⁻)∧ψ + φ∧(ch B⁺ − ch B⁻) − dφ∧ψ with labels combined.
 */
template <LabelPolicy P>
BasicClass<P> class_mul(const BasicClass<P>& a, const BasicClass<P>& b)
{
    require_same_ring(a, b);
    const auto& m = a.model();
    const P& pol = a.policy();
    using L = typename P::label_type;
    auto roots = root_product(pol, a.roots(), b.roots());
    std::map<L, GradedElement> odd;
    if (!b.phi().empty()) {
        auto cha = ch_of_roots<P>(m, a.roots());
        for (const auto& [la, ca] : cha) {
            for (const auto& [lb, psi] : b.phi()) {
                detail::add_form(odd, pol.combine(la, lb), wedge(ca, psi.rep()));
            }
        }
    }
    if (!a.phi().empty()) {
        auto chb = ch_of_roots<P>(m, b.roots());
        for (const auto& [la, phi] : a.phi()) {
            for (const auto& [lb, cb] : chb) {
                detail::add_form(odd, pol.combine(la, lb), wedge(phi.rep(), cb));
            }
            GradedElement dphi = differential(phi.rep());
            if (dphi.is_zero()) {
                continue;
            }
            for (const auto& [lb, psi] : b.phi()) {
                detail::add_form(odd, pol.combine(la, lb), -wedge(dphi, psi.rep()));
            }
        }
    }
    return BasicClass<P>::from_canonical(m, pol, std::move(roots), detail::normalize_all(odd));
}

/// Ψ^k: roots x ↦ kx, labels γ ↦ kγ, φ_l ↦ k^l φ_l.
template <LabelPolicy P>
BasicClass<P> class_adams(long k, const BasicClass<P>& a)
{
    if (k < 1) {
        throw std::invalid_argument("Adams operation needs k >= 1");
    }
    const P& pol = a.policy();
    typename BasicClass<P>::RootMap roots;
    for (const auto& [key, m] : a.roots()) {
        roots[{vec_scale(key.first, Rational(k)), pol.multiple(k, key.second)}] += m;
    }
    std::map<typename P::label_type, GradedElement> odd;
    for (const auto& [l, c] : a.phi()) {
        detail::add_form(odd, pol.multiple(k, l), scale_by_weight(c.rep(), k));
    }
    return BasicClass<P>::from_canonical(a.model(), pol, std::move(roots), detail::normalize_all(odd));
}

/// Ring descriptor for the class ring.
template <LabelPolicy P>
struct BasicClassRing {
    using value_type = BasicClass<P>;
    ModelPtr model;
    P policy;

    value_type zero() const { return value_type(model, policy); }
    value_type one() const { return class_one(model, policy); }
    value_type add(const value_type& a, const value_type& b) const { return class_add(a, b); }
    value_type neg(const value_type& a) const { return class_neg(a); }
    value_type mul(const value_type& a, const value_type& b) const { return class_mul(a, b); }
    bool equal(const value_type& a, const value_type& b) const { return a == b; }
    std::string to_string(const value_type& a) const { return a.to_string(); }

    friend bool operator==(const BasicClassRing& a, const BasicClassRing& b)
    {
        return a.model == b.model && a.policy == b.policy;
    }
};

/// Λ^0..Λ^N of a nonnegative root multiset: coefficients of prod (1 + [x] t)^m.
template <LabelPolicy P>
std::vector<typename BasicClass<P>::RootMap> exterior_powers(const ModelPtr& m, const P& pol,
                                                             const typename BasicClass<P>::RootMap& roots,
                                                             std::size_t order)
{
    using RootMap = typename BasicClass<P>::RootMap;
    std::vector<RootMap> s(order + 1);
    s[0][{Vec(m->dim(2), Rational(0)), pol.identity()}] = 1;
    for (const auto& [key, mult] : roots) {
        if (mult < 0) {
            throw std::invalid_argument("exterior_powers needs a genuine (nonnegative) multiset");
        }
        // factor (1 + [x] t)^mult = sum_i binom(mult, i) [i x] t^i
        std::vector<RootMap> factor(order + 1);
        for (std::size_t i = 0; i <= order && static_cast<long>(i) <= mult; ++i) {
            long c = binomial(mult, static_cast<long>(i)).numerator().get_si();
            factor[i][{vec_scale(key.first, Rational(static_cast<long>(i))),
                       pol.multiple(static_cast<long>(i), key.second)}] = c;
        }
        std::vector<RootMap> next(order + 1);
        for (std::size_t i = 0; i <= order; ++i) {
            if (s[i].empty()) {
                continue;
            }
            for (std::size_t j = 0; i + j <= order; ++j) {
                if (factor[j].empty()) {
                    continue;
                }
                for (const auto& [k2, c2] : root_product(pol, s[i], factor[j])) {
                    next[i + j][k2] += c2;
                }
            }
        }
        for (auto& r : next) {
            std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
        }
        s = std::move(next);
    }
    return s;
}

/**
 * λ_t(a) = λ_t(E⁺, φ) · λ_t(E⁻, 0)^{-1}, where λ^j(E, φ) = (Λ^j E, [λ^j_Γ(ch E, φ)]_odd).
 */
template <LabelPolicy P>
TruncSeries<BasicClassRing<P>> class_lambda_series(const BasicClass<P>& a, std::size_t order)
{
    const auto& m = a.model();
    const P& pol = a.policy();
    BasicClassRing<P> ring{m, pol};
    auto plus = a.plus_roots();
    auto minus = a.minus_roots();

    auto plus_roots = exterior_powers(m, pol, plus, order);
    // the odd part vanishes when φ = 0, so ch is only needed otherwise
    auto odd = a.phi().empty() ? std::vector<typename BasicClass<P>::PhiMap>(order + 1)
                               : pol.gamma_lambda_odd(m, ch_of_roots<P>(m, plus), a.phi(), order);
    std::vector<BasicClass<P>> pc;
    for (std::size_t j = 0; j <= order; ++j) {
        pc.push_back(BasicClass<P>::from_canonical(m, pol, std::move(plus_roots[j]),
                                                   j == 0 ? typename BasicClass<P>::PhiMap{} : std::move(odd[j])));
    }
    TruncSeries<BasicClassRing<P>> ps(ring, std::move(pc));
    if (minus.empty()) {
        return ps;
    }
    auto minus_roots = exterior_powers(m, pol, minus, order);
    std::vector<BasicClass<P>> mc;
    for (std::size_t j = 0; j <= order; ++j) {
        mc.push_back(BasicClass<P>::from_canonical(m, pol, std::move(minus_roots[j]), {}));
    }
    return series_mul(ps, series_invert(TruncSeries<BasicClassRing<P>>(ring, std::move(mc))));
}

template <LabelPolicy P>
BasicClass<P> class_lambda(std::size_t k, const BasicClass<P>& a)
{
    if (k == 0) {
        return class_one(a.model(), a.policy());
    }
    return class_lambda_series(a, k)[k];
}

/// R(a) = ch(E⁺) − ch(E⁻) − dφ, per label.
template <LabelPolicy P>
std::map<typename P::label_type, GradedElement> class_curvature(const BasicClass<P>& a)
{
    auto out = ch_of_roots<P>(a.model(), a.roots());
    for (const auto& [l, c] : a.phi()) {
        detail::add_form(out, l, -differential(c.rep()));
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

/// I(a): the signed root multiset, forms dropped.
template <LabelPolicy P>
typename BasicClass<P>::RootMap class_forgetful(const BasicClass<P>& a)
{
    return a.roots();
}

/// Ψ^k on forgetful classes.
template <LabelPolicy P>
typename BasicClass<P>::RootMap forgetful_adams(const P& pol, long k, const typename BasicClass<P>::RootMap& r)
{
    typename BasicClass<P>::RootMap out;
    for (const auto& [key, m] : r) {
        out[{vec_scale(key.first, Rational(k)), pol.multiple(k, key.second)}] += m;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

/// f^*: roots and forms are pulled back along the morphism and renormalized in the target.
template <LabelPolicy P>
BasicClass<P> class_pullback(const CdgaMorphism& f, const BasicClass<P>& a)
{
    if (a.model() != f.source()) {
        throw std::invalid_argument("class over '" + a.model()->name() + "' cannot be pulled back along " + f.name() +
                                    " (source '" + f.source()->name() + "')");
    }
    BasicCycle<P> plus;
    BasicCycle<P> minus;
    for (const auto& [key, mult] : a.roots()) {
        auto img = f.apply(GradedElement::from_component(a.model(), 2, key.first));
        auto& side = mult > 0 ? plus : minus;
        for (long i = 0; i < (mult > 0 ? mult : -mult); ++i) {
            side.roots.emplace_back(img, key.second);
        }
    }
    for (const auto& [l, c] : a.phi()) {
        plus.phi.emplace(l, f.apply(c.rep()));
    }
    return normal_form(f.target(), a.policy(), plus, minus);
}

/// A per-root perturbation: root x_i becomes x_i + dβ_i (β_i of degree 1).
struct Perturbation {
    std::vector<GradedElement> beta;
};

/// The cycle with perturbed roots (same odd data).
template <LabelPolicy P>
BasicCycle<P> perturb_roots(const BasicCycle<P>& c, const Perturbation& pert)
{
    if (pert.beta.size() != c.roots.size()) {
        throw std::invalid_argument("perturbation has " + std::to_string(pert.beta.size()) +
                                    " entries for a triple of rank " + std::to_string(c.roots.size()));
    }
    BasicCycle<P> out = c;
    for (std::size_t i = 0; i < c.roots.size(); ++i) {
        if (!(pert.beta[i].part(1) == pert.beta[i])) {
            throw std::invalid_argument("perturbation forms must have degree 1");
        }
        out.roots[i].first = c.roots[i].first + differential(pert.beta[i]);
    }
    return out;
}

/// Chern–Simons form of a perturbation, per label, as raw odd forms: sum of CS(x_i, x_i + dβ_i, β_i).
template <LabelPolicy P>
std::map<typename P::label_type, GradedElement> chern_simons_forms(const BasicCycle<P>& c, const Perturbation& pert)
{
    auto moved = perturb_roots(c, pert);
    std::map<typename P::label_type, GradedElement> out;
    for (std::size_t i = 0; i < c.roots.size(); ++i) {
        detail::add_form(out, c.roots[i].second,
                         chern_simons_line(c.roots[i].first, moved.roots[i].first, pert.beta[i]));
    }
    return out;
}

/// Raw Chern character per label of a cycle's roots.
template <LabelPolicy P>
std::map<typename P::label_type, GradedElement> cycle_ch(const ModelPtr& m, const BasicCycle<P>& c)
{
    std::map<typename P::label_type, GradedElement> out;
    for (const auto& [x, l] : c.roots) {
        detail::add_form(out, l, exp_form(x));
    }
    (void)m;
    return out;
}

/**
 * λ^k of a single (unnormalized) cycle: roots are the k-subset sums of the
 * raw roots, odd part [λ^k_Γ(ch E, φ)]_odd computed from the raw data.
 */
template <LabelPolicy P>
BasicCycle<P> cycle_lambda_raw(const ModelPtr& m, const P& pol, std::size_t k, const BasicCycle<P>& c)
{
    BasicCycle<P> out;
    const std::size_t r = c.roots.size();
    if (k == 0) {
        out.roots.emplace_back(GradedElement(m), pol.identity());
        return out;
    }
    std::vector<std::size_t> idx(k);
    if (k <= r) {
        for (std::size_t i = 0; i < k; ++i) {
            idx[i] = i;
        }
        while (true) {
            GradedElement s(m);
            auto lab = pol.identity();
            for (auto i : idx) {
                s += c.roots[i].first;
                lab = pol.combine(lab, c.roots[i].second);
            }
            out.roots.emplace_back(std::move(s), lab);
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == r - k + pos - 1) {
                --pos;
            }
            if (pos == 0) {
                break;
            }
            ++idx[pos - 1];
            for (std::size_t i = pos; i < k; ++i) {
                idx[i] = idx[i - 1] + 1;
            }
        }
    }
    std::map<typename P::label_type, OddCoset> phi_cosets;
    for (const auto& [l, f] : c.phi) {
        phi_cosets.emplace(l, OddCoset::normalize(f));
    }
    auto odd = pol.gamma_lambda_odd(m, cycle_ch(m, c), phi_cosets, k);
    for (const auto& [l, coset] : odd[k]) {
        out.phi.emplace(l, coset.rep());
    }
    return out;
}

} // namespace lambda_forge
