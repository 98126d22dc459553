#pragma once

/**
 * @file diffk.hpp
 * @brief Split model of the differential K-ring: cycles (E, φ) with E a
 *        multiset of formal line roots, their classes, cup product, λ^k,
 *        Ψ^k, Chern–Simons transgression, curvature and the maps a and I.
 */

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cycles.hpp"
#include "gamma.hpp"

namespace lambda_forge {

/// The single label of the non-equivariant ring.
struct NoLabel {
    friend auto operator<=>(const NoLabel&, const NoLabel&) = default;
};

struct PlainPolicy {
    using label_type = NoLabel;

    NoLabel identity() const { return {}; }
    NoLabel combine(NoLabel, NoLabel) const { return {}; }
    NoLabel multiple(long, NoLabel) const { return {}; }
    std::string label_string(NoLabel) const { return ""; }
    std::string describe() const { return ""; }

    /// [λ^j_Γ(ch, φ)]_odd for j = 0..order.
    std::vector<std::map<NoLabel, OddCoset>> gamma_lambda_odd(const ModelPtr& m,
                                                              const std::map<NoLabel, GradedElement>& ch,
                                                              const std::map<NoLabel, OddCoset>& phi,
                                                              std::size_t order) const
    {
        std::vector<std::map<NoLabel, OddCoset>> out(order + 1);
        auto ci = ch.find(NoLabel{});
        auto pi = phi.find(NoLabel{});
        GradedElement even = ci == ch.end() ? GradedElement(m) : ci->second;
        OddCoset odd = pi == phi.end() ? OddCoset(m) : pi->second;
        if (odd.is_zero()) {
            return out; // [λ^j_Γ(ω, 0)]_odd = 0
        }
        auto series = gamma_lambda_series(GammaElement(std::move(even), std::move(odd)), std::max<std::size_t>(order, 1));
        for (std::size_t j = 1; j <= order; ++j) {
            if (!series[j].odd().is_zero()) {
                out[j].emplace(NoLabel{}, series[j].odd());
            }
        }
        return out;
    }

    friend bool operator==(const PlainPolicy&, const PlainPolicy&) { return true; }
};

using DiffKClass = BasicClass<PlainPolicy>;
using DiffKCycle = BasicCycle<PlainPolicy>;
using DiffKRing = BasicClassRing<PlainPolicy>;
using ForgetfulClass = DiffKClass::RootMap;

/// Cycle (E, φ) from raw line roots and an odd form.
inline DiffKCycle make_cycle(const std::vector<GradedElement>& roots, const GradedElement& phi)
{
    DiffKCycle c;
    for (const auto& x : roots) {
        c.roots.emplace_back(x, NoLabel{});
    }
    if (phi.has_parity(0)) {
        throw std::invalid_argument("cycle form φ must be odd");
    }
    if (!phi.is_zero()) {
        c.phi.emplace(NoLabel{}, phi);
    }
    return c;
}

inline DiffKCycle make_cycle(const ModelPtr& m, const std::vector<GradedElement>& roots)
{
    return make_cycle(roots, GradedElement(m));
}

inline std::vector<GradedElement> cycle_roots(const DiffKCycle& c)
{
    std::vector<GradedElement> out;
    for (const auto& [x, l] : c.roots) {
        out.push_back(x);
    }
    return out;
}

inline GradedElement cycle_phi(const ModelPtr& m, const DiffKCycle& c)
{
    auto it = c.phi.find(NoLabel{});
    return it == c.phi.end() ? GradedElement(m) : it->second;
}

/// ch(E) = sum_i e^{x_i}.
inline GradedElement chern_character(const ModelPtr& m, const std::vector<GradedElement>& roots)
{
    GradedElement out(m);
    for (const auto& x : roots) {
        detail::require_line_root(x);
        out += exp_form(x);
    }
    return out;
}

/// Chern–Simons coset of a per-root perturbation: d(CS) = ch(E') − ch(E).
inline OddCoset chern_simons(const ModelPtr& m, const DiffKCycle& e, const Perturbation& pert)
{
    auto forms = chern_simons_forms(e, pert);
    auto it = forms.find(NoLabel{});
    return OddCoset::normalize(it == forms.end() ? GradedElement(m) : it->second);
}

/// Raw transgression form (not reduced modulo Im d).
inline GradedElement chern_simons_form(const ModelPtr& m, const DiffKCycle& e, const Perturbation& pert)
{
    auto forms = chern_simons_forms(e, pert);
    auto it = forms.find(NoLabel{});
    return it == forms.end() ? GradedElement(m) : it->second;
}

inline DiffKClass diffk_normal_form(const ModelPtr& m, const DiffKCycle& plus, const DiffKCycle& minus = {})
{
    return normal_form(m, PlainPolicy{}, plus, minus);
}

/// Re-normalizing a class is the identity; provided for symmetry with cycles.
inline DiffKClass diffk_normal_form(const DiffKClass& a) { return a; }

inline DiffKClass diffk_one(const ModelPtr& m) { return class_one(m, PlainPolicy{}); }
inline DiffKClass diffk_zero(const ModelPtr& m) { return DiffKClass(m, PlainPolicy{}); }

inline DiffKClass cycle_mul(const DiffKClass& a, const DiffKClass& b) { return class_mul(a, b); }
inline DiffKClass cycle_lambda(std::size_t k, const DiffKClass& a) { return class_lambda(k, a); }
inline DiffKClass cycle_adams(long k, const DiffKClass& a) { return class_adams(k, a); }

inline TruncSeries<DiffKRing> lambda_t_cycle(const DiffKClass& a, std::size_t order)
{
    return class_lambda_series(a, order);
}

/// R([E, φ]) = ch(E) − dφ.
inline GradedElement curvature_map(const DiffKClass& a)
{
    auto r = class_curvature(a);
    auto it = r.find(NoLabel{});
    return it == r.end() ? GradedElement(a.model()) : it->second;
}

/// a(φ) = [0, φ].
inline DiffKClass map_a(const OddCoset& phi)
{
    DiffKClass::PhiMap p;
    if (!phi.is_zero()) {
        p.emplace(NoLabel{}, phi);
    }
    return class_from_phi(phi.model(), PlainPolicy{}, std::move(p));
}

/// I([E, φ]) = [E].
inline ForgetfulClass map_I(const DiffKClass& a) { return class_forgetful(a); }

inline ForgetfulClass forgetful_product(const ForgetfulClass& a, const ForgetfulClass& b)
{
    return root_product(PlainPolicy{}, a, b);
}

inline ForgetfulClass forgetful_psi(long k, const ForgetfulClass& a) { return forgetful_adams(PlainPolicy{}, k, a); }

/// λ^k of a single cycle, before normalization.
inline DiffKCycle cycle_lambda_unnormalized(const ModelPtr& m, std::size_t k, const DiffKCycle& c)
{
    return cycle_lambda_raw(m, PlainPolicy{}, k, c);
}

// ---------------------------------------------------------------------------
// Samples

inline GradedElement random_line_root(const ModelPtr& m, Rng& rng, long bound = 1)
{
    return random_closed(m, 2, rng, bound);
}

/// Random perturbation with arbitrary degree-1 forms β_i.
inline Perturbation random_perturbation(const ModelPtr& m, std::size_t rank, Rng& rng, long bound = 1)
{
    Perturbation p;
    for (std::size_t i = 0; i < rank; ++i) {
        p.beta.push_back(random_form(m, 1, rng, bound));
    }
    return p;
}

/// Random perturbation in canonical gauge: β_i is the canonical preimage of dβ_i.
inline Perturbation random_canonical_perturbation(const ModelPtr& m, std::size_t rank, Rng& rng, long bound = 1)
{
    Perturbation p = random_perturbation(m, rank, rng, bound);
    for (auto& b : p.beta) {
        b = canonical_preimage(differential(b));
    }
    return p;
}

inline DiffKCycle random_cycle(const ModelPtr& m, std::size_t rank, Rng& rng, long bound = 1)
{
    std::vector<GradedElement> roots;
    for (std::size_t i = 0; i < rank; ++i) {
        roots.push_back(random_line_root(m, rng, bound));
    }
    return make_cycle(roots, random_odd(m, rng, bound));
}

struct DiffKSampling {
    std::size_t max_plus = 3;  // rank of E⁺
    std::size_t max_total = 4; // rank of E⁺ plus rank of E⁻
    std::size_t max_minus = 1;
};

inline DiffKClass random_class(const ModelPtr& m, Rng& rng, const DiffKSampling& s = {})
{
    auto rp = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(s.max_plus)));
    auto room = s.max_total > rp ? s.max_total - rp : 0;
    auto rm = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(std::min(room, s.max_minus))));
    auto plus = random_cycle(m, rp, rng);
    DiffKCycle minus;
    for (std::size_t i = 0; i < rm; ++i) {
        minus.roots.emplace_back(random_line_root(m, rng), NoLabel{});
    }
    return diffk_normal_form(m, plus, minus);
}

/// λ-context on the class ring of a model.
struct DiffKContext {
    using ring_type = DiffKRing;
    using value_type = DiffKClass;
    ModelPtr model;
    DiffKSampling sampling{};

    DiffKRing ring() const { return {model, PlainPolicy{}}; }
    std::string name() const { return "DiffK(" + model->name() + ")"; }
    TruncSeries<DiffKRing> lambda_series(const DiffKClass& x, std::size_t order) const
    {
        return class_lambda_series(x, order);
    }
    DiffKClass sample(Rng& rng) const { return random_class(model, rng, sampling); }
};

// ---------------------------------------------------------------------------
// Fixture serialization: {"model", "plus": {"roots": [...], "phi": [...]}, "minus": {...}}

inline nlohmann::ordered_json diffk_to_json(const DiffKClass& a)
{
    auto side = [&](const ForgetfulClass& roots, const GradedElement& phi) {
        nlohmann::ordered_json s;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [k, m] : roots) {
            for (long i = 0; i < m; ++i) {
                auto coords = nlohmann::ordered_json::array();
                for (const auto& q : k.first) {
                    coords.push_back(q.to_string());
                }
                arr.push_back(coords);
            }
        }
        s["roots"] = arr;
        s["phi"] = phi.to_json();
        return s;
    };
    nlohmann::ordered_json j;
    j["model"] = a.model()->name();
    j["plus"] = side(a.plus_roots(), a.phi_at(NoLabel{}).rep());
    j["minus"] = side(a.minus_roots(), GradedElement(a.model()));
    return j;
}

inline DiffKClass diffk_from_json(const nlohmann::json& j, const ModelPtr& m)
{
    auto read_vec = [](const nlohmann::json& arr) {
        Vec v;
        for (const auto& q : arr) {
            v.push_back(Rational::from_string(q.get<std::string>()));
        }
        return v;
    };
    auto side = [&](const nlohmann::json& s) {
        DiffKCycle c;
        for (const auto& r : s.at("roots")) {
            c.roots.emplace_back(GradedElement::from_component(m, 2, read_vec(r)), NoLabel{});
        }
        GradedElement phi(m, read_vec(s.at("phi")));
        if (!phi.is_zero()) {
            c.phi.emplace(NoLabel{}, phi);
        }
        return c;
    };
    if (j.value("model", std::string()) != m->name()) {
        throw std::invalid_argument("fixture belongs to model '" + j.value("model", std::string()) + "'");
    }
    return diffk_normal_form(m, side(j.at("plus")), side(j.at("minus")));
}

} // namespace lambda_forge
