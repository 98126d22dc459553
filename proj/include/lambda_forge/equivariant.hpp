#pragma once

/**
 * @file equivariant.hpp
 * @brief Equivariant extension over a fixed-point model: characters of a
 *        finitely generated abelian group, the representation ring as a
 *        group ring, Γ_g(B) = Γ(B) ⊗ R(G), the equivariant Chern character
 *        and Chern–Simons forms, and λ / Adams on equivariant cycles.
 */

#include <compare>
#include <map>
#include <numeric>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cycles.hpp"
#include "gamma.hpp"

namespace lambda_forge {

/// Element of ℤ^r × Π ℤ/n_i.
struct Character {
    std::vector<long> free;
    std::vector<long> residues;

    friend auto operator<=>(const Character&, const Character&) = default;
};

/// The group ℤ^r × Π ℤ/n_i, described by its character lattice.
class CharacterGroup {
public:
    CharacterGroup() = default;
    CharacterGroup(unsigned free_rank, std::vector<long> torsion) : free_rank_(free_rank), torsion_(std::move(torsion))
    {
        for (long n : torsion_) {
            if (n < 2) {
                throw std::invalid_argument("torsion orders must be >= 2, got " + std::to_string(n));
            }
        }
    }

    unsigned free_rank() const { return free_rank_; }
    const std::vector<long>& torsion() const { return torsion_; }

    Character zero() const { return {std::vector<long>(free_rank_, 0), std::vector<long>(torsion_.size(), 0)}; }

    /// Character with the given coordinates, residues reduced mod n_i.
    Character make(std::vector<long> free, std::vector<long> residues) const
    {
        if (free.size() != free_rank_ || residues.size() != torsion_.size()) {
            throw std::invalid_argument("character does not match group " + to_string());
        }
        for (std::size_t i = 0; i < residues.size(); ++i) {
            residues[i] = ((residues[i] % torsion_[i]) + torsion_[i]) % torsion_[i];
        }
        return {std::move(free), std::move(residues)};
    }

    void require_member(const Character& c) const
    {
        if (c.free.size() != free_rank_ || c.residues.size() != torsion_.size()) {
            throw std::invalid_argument("character does not belong to group " + to_string());
        }
    }

    Character add(const Character& a, const Character& b) const
    {
        require_member(a);
        require_member(b);
        Character c = a;
        for (std::size_t i = 0; i < c.free.size(); ++i) {
            c.free[i] += b.free[i];
        }
        for (std::size_t i = 0; i < c.residues.size(); ++i) {
            c.residues[i] = (c.residues[i] + b.residues[i]) % torsion_[i];
        }
        return c;
    }

    Character multiple(long k, const Character& a) const
    {
        require_member(a);
        Character c = a;
        for (auto& x : c.free) {
            x *= k;
        }
        for (std::size_t i = 0; i < c.residues.size(); ++i) {
            c.residues[i] = ((c.residues[i] * k) % torsion_[i] + torsion_[i]) % torsion_[i];
        }
        return c;
    }

    Character negate(const Character& a) const { return multiple(-1, a); }

    std::string character_string(const Character& c) const
    {
        std::string s = "χ(";
        for (std::size_t i = 0; i < c.free.size(); ++i) {
            s += (i ? "," : "") + std::to_string(c.free[i]);
        }
        if (!c.residues.empty()) {
            s += "|";
            for (std::size_t i = 0; i < c.residues.size(); ++i) {
                s += (i ? "," : "") + std::to_string(c.residues[i]);
            }
        }
        return s + ")";
    }

    /// "Z", "Z/2", "ZxZ/3", "Z^2xZ/2xZ/4", or "1" for the trivial group.
    std::string to_string() const
    {
        std::vector<std::string> parts;
        if (free_rank_ == 1) {
            parts.push_back("Z");
        } else if (free_rank_ > 1) {
            parts.push_back("Z^" + std::to_string(free_rank_));
        }
        for (long n : torsion_) {
            parts.push_back("Z/" + std::to_string(n));
        }
        if (parts.empty()) {
            return "1";
        }
        std::string s = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) {
            s += "x" + parts[i];
        }
        return s;
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["free_rank"] = free_rank_;
        j["torsion"] = torsion_;
        return j;
    }

    static CharacterGroup from_json(const nlohmann::json& j)
    {
        if (!j.is_object()) {
            throw std::invalid_argument("group spec must be an object {\"free_rank\", \"torsion\"}");
        }
        long r = j.value("free_rank", 0L);
        if (r < 0) {
            throw std::invalid_argument("group spec: free_rank must be nonnegative");
        }
        std::vector<long> t;
        if (j.contains("torsion")) {
            if (!j.at("torsion").is_array()) {
                throw std::invalid_argument("group spec: torsion must be an array of integers");
            }
            for (const auto& n : j.at("torsion")) {
                if (!n.is_number_integer()) {
                    throw std::invalid_argument("group spec: torsion must be an array of integers");
                }
                t.push_back(n.get<long>());
            }
        }
        return CharacterGroup(static_cast<unsigned>(r), std::move(t));
    }

    /// Shorthand ("Z", "Z/2", "ZxZ/3", "Z^2") or a JSON group spec.
    static CharacterGroup parse(const std::string& text)
    {
        auto first = text.find_first_not_of(" \t\n");
        if (first != std::string::npos && text[first] == '{') {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
                throw std::invalid_argument(std::string("group spec is not valid JSON: ") + e.what());
            }
            return from_json(j);
        }
        if (text == "1") {
            return CharacterGroup(0, {});
        }
        static const std::regex factor(R"(^Z(\^([0-9]+)|/([0-9]+))?$)");
        unsigned r = 0;
        std::vector<long> t;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto next = text.find_first_of("x×*", pos);
            std::string part = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            std::smatch m;
            if (!std::regex_match(part, m, factor)) {
                throw std::invalid_argument("cannot parse group '" + text + "' (expected e.g. Z, Z/2, ZxZ/3)");
            }
            if (m[3].matched) {
                t.push_back(std::stol(m[3].str()));
            } else {
                r += m[2].matched ? static_cast<unsigned>(std::stoul(m[2].str())) : 1U;
            }
            if (next == std::string::npos) {
                break;
            }
            // "×" is multi-byte in UTF-8
            pos = text.compare(next, std::string("×").size(), "×") == 0 ? next + std::string("×").size() : next + 1;
        }
        return CharacterGroup(r, std::move(t));
    }

    Character random_character(Rng& rng, long bound = 1) const
    {
        Character c = zero();
        for (auto& x : c.free) {
            x = rng.uniform(-bound, bound);
        }
        for (std::size_t i = 0; i < c.residues.size(); ++i) {
            c.residues[i] = rng.uniform(0, torsion_[i] - 1);
        }
        return c;
    }

    friend bool operator==(const CharacterGroup&, const CharacterGroup&) = default;

private:
    unsigned free_rank_ = 0;
    std::vector<long> torsion_;
};

inline std::vector<CharacterGroup> default_groups()
{
    return {CharacterGroup(1, {}), CharacterGroup(0, {2}), CharacterGroup(1, {3})};
}

// ---------------------------------------------------------------------------
// Representation ring R(G) = ℤ[Ĝ]

class RepRingElement {
public:
    RepRingElement() = default;
    explicit RepRingElement(CharacterGroup g) : group_(std::move(g)) {}
    RepRingElement(CharacterGroup g, std::map<Character, long> terms) : group_(std::move(g)), terms_(std::move(terms))
    {
        for (const auto& [c, n] : terms_) {
            group_.require_member(c);
        }
        std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
    }

    static RepRingElement one(const CharacterGroup& g) { return RepRingElement(g, {{g.zero(), 1}}); }
    static RepRingElement character(const CharacterGroup& g, const Character& c) { return RepRingElement(g, {{c, 1}}); }

    const CharacterGroup& group() const { return group_; }
    const std::map<Character, long>& terms() const { return terms_; }
    long dimension() const
    {
        long d = 0;
        for (const auto& [c, n] : terms_) {
            d += n;
        }
        return d;
    }

    friend bool operator==(const RepRingElement&, const RepRingElement&) = default;

    std::string to_string() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string s;
        for (const auto& [c, n] : terms_) {
            if (!s.empty()) {
                s += n < 0 ? " − " : " + ";
            } else if (n < 0) {
                s += "−";
            }
            long a = n < 0 ? -n : n;
            s += (a == 1 ? "" : std::to_string(a)) + group_.character_string(c);
        }
        return s;
    }

private:
    CharacterGroup group_;
    std::map<Character, long> terms_;
};

inline RepRingElement rep_add(const RepRingElement& u, const RepRingElement& v)
{
    if (!(u.group() == v.group())) {
        throw std::invalid_argument("representation ring elements of different groups " + u.group().to_string() +
                                    " and " + v.group().to_string());
    }
    auto t = u.terms();
    for (const auto& [c, n] : v.terms()) {
        t[c] += n;
    }
    return RepRingElement(u.group(), std::move(t));
}

/// Convolution: χ_γ χ_δ = χ_{γ+δ}.
inline RepRingElement rep_mul(const RepRingElement& u, const RepRingElement& v)
{
    if (!(u.group() == v.group())) {
        throw std::invalid_argument("representation ring elements of different groups " + u.group().to_string() +
                                    " and " + v.group().to_string());
    }
    std::map<Character, long> t;
    for (const auto& [a, m] : u.terms()) {
        for (const auto& [b, n] : v.terms()) {
            t[u.group().add(a, b)] += m * n;
        }
    }
    return RepRingElement(u.group(), std::move(t));
}

/// Ψ^k(χ_γ) = χ_{kγ}.
inline RepRingElement rep_adams(long k, const RepRingElement& u)
{
    std::map<Character, long> t;
    for (const auto& [c, n] : u.terms()) {
        t[u.group().multiple(k, c)] += n;
    }
    return RepRingElement(u.group(), std::move(t));
}

// ---------------------------------------------------------------------------
// Γ_g(B) = Γ(B) ⊗ R(G)

struct GammaGElement {
    CharacterGroup group;
    ModelPtr model;
    std::map<Character, GammaElement> parts; // no zero entries

    friend bool operator==(const GammaGElement& a, const GammaGElement& b)
    {
        return a.group == b.group && a.model == b.model && a.parts == b.parts;
    }

    std::string to_string() const
    {
        if (parts.empty()) {
            return "0";
        }
        std::string s;
        for (const auto& [c, x] : parts) {
            s += (s.empty() ? "" : " + ") + x.to_string() + "⊗" + group.character_string(c);
        }
        return s;
    }
};

namespace detail {

inline void gammag_accumulate(std::map<Character, GammaElement>& acc, const Character& c, const GammaElement& x)
{
    auto it = acc.find(c);
    if (it == acc.end()) {
        if (!x.is_zero()) {
            acc.emplace(c, x);
        }
        return;
    }
    it->second = gamma_add(it->second, x);
    if (it->second.is_zero()) {
        acc.erase(it);
    }
}

inline void require_same_gammag(const GammaGElement& a, const GammaGElement& b)
{
    if (!(a.group == b.group) || a.model != b.model) {
        throw std::invalid_argument("Γ_g elements over different groups or models");
    }
}

} // namespace detail

struct GammaGRing {
    using value_type = GammaGElement;
    ModelPtr model;
    CharacterGroup group;

    GammaGElement zero() const { return {group, model, {}}; }
    GammaGElement one() const { return {group, model, {{group.zero(), GammaRing{model}.one()}}}; }

    GammaGElement add(const GammaGElement& a, const GammaGElement& b) const
    {
        detail::require_same_gammag(a, b);
        GammaGElement out = a;
        for (const auto& [c, x] : b.parts) {
            detail::gammag_accumulate(out.parts, c, x);
        }
        return out;
    }

    GammaGElement neg(const GammaGElement& a) const { return scale(a, Rational(-1)); }

    GammaGElement mul(const GammaGElement& a, const GammaGElement& b) const
    {
        detail::require_same_gammag(a, b);
        GammaGElement out = zero();
        for (const auto& [c1, x] : a.parts) {
            for (const auto& [c2, y] : b.parts) {
                detail::gammag_accumulate(out.parts, group.add(c1, c2), gamma_mul(x, y));
            }
        }
        return out;
    }

    GammaGElement scale(const GammaGElement& a, const Rational& q) const
    {
        GammaGElement out = zero();
        if (q.is_zero()) {
            return out;
        }
        for (const auto& [c, x] : a.parts) {
            out.parts.emplace(c, gamma_scale(x, q));
        }
        return out;
    }

    bool equal(const GammaGElement& a, const GammaGElement& b) const { return a == b; }
    std::string to_string(const GammaGElement& a) const { return a.to_string(); }

    friend bool operator==(const GammaGRing& a, const GammaGRing& b) { return a.model == b.model && a.group == b.group; }
};

/// Ψ^k(α_l ⊗ χ_γ) = k^l α_l ⊗ χ_{kγ}.
inline GammaGElement gammag_adams(long k, const GammaGElement& x)
{
    GammaGElement out{x.group, x.model, {}};
    for (const auto& [c, y] : x.parts) {
        detail::gammag_accumulate(out.parts, x.group.multiple(k, c), gamma_adams(k, y));
    }
    return out;
}

inline TruncSeries<GammaGRing> gammag_lambda_series(const GammaGElement& x, std::size_t order)
{
    GammaGRing r{x.model, x.group};
    std::vector<GammaGElement> psi;
    for (std::size_t k = 1; k <= order; ++k) {
        psi.push_back(gammag_adams(static_cast<long>(k), x));
    }
    return lambda_from_adams(r, psi, order);
}

inline GammaGElement random_gammag(const ModelPtr& m, const CharacterGroup& g, Rng& rng)
{
    GammaGElement out{g, m, {}};
    long terms = rng.uniform(1, 2);
    for (long i = 0; i < terms; ++i) {
        detail::gammag_accumulate(out.parts, g.random_character(rng), random_gamma(m, rng, 1));
    }
    return out;
}

struct GammaGContext {
    using ring_type = GammaGRing;
    using value_type = GammaGElement;
    ModelPtr model;
    CharacterGroup group;

    GammaGRing ring() const { return {model, group}; }
    std::string name() const { return "Gamma_g(" + model->name() + ", " + group.to_string() + ")"; }
    TruncSeries<GammaGRing> lambda_series(const GammaGElement& x, std::size_t order) const
    {
        return gammag_lambda_series(x, order);
    }
    GammaGElement sample(Rng& rng) const { return random_gammag(model, group, rng); }
};

// ---------------------------------------------------------------------------
// Equivariant cycles

struct CharacterPolicy {
    using label_type = Character;
    CharacterGroup group;

    Character identity() const { return group.zero(); }
    Character combine(const Character& a, const Character& b) const { return group.add(a, b); }
    Character multiple(long k, const Character& a) const { return group.multiple(k, a); }
    std::string label_string(const Character& a) const { return group.character_string(a); }
    std::string describe() const { return group.to_string(); }

    /// [λ^j_{Γ_g}(ch_Tg, φ)]_odd for j = 0..order.
    std::vector<std::map<Character, OddCoset>> gamma_lambda_odd(const ModelPtr& m,
                                                                const std::map<Character, GradedElement>& ch,
                                                                const std::map<Character, OddCoset>& phi,
                                                                std::size_t order) const
    {
        std::vector<std::map<Character, OddCoset>> out(order + 1);
        if (phi.empty()) {
            return out;
        }
        GammaGElement x{group, m, {}};
        for (const auto& [c, w] : ch) {
            detail::gammag_accumulate(x.parts, c, GammaElement::from_even(w));
        }
        for (const auto& [c, p] : phi) {
            detail::gammag_accumulate(x.parts, c, GammaElement::from_odd(p));
        }
        auto series = gammag_lambda_series(x, std::max<std::size_t>(order, 1));
        for (std::size_t j = 1; j <= order; ++j) {
            for (const auto& [c, y] : series[j].parts) {
                if (!y.odd().is_zero()) {
                    out[j].emplace(c, y.odd());
                }
            }
        }
        return out;
    }

    friend bool operator==(const CharacterPolicy& a, const CharacterPolicy& b) { return a.group == b.group; }
};

using EquivClass = BasicClass<CharacterPolicy>;
using EquivCycle = BasicCycle<CharacterPolicy>;
using EquivRing = BasicClassRing<CharacterPolicy>;

/// Equivariant Chern character: for each character, ch of the roots carrying it.
inline std::map<Character, GradedElement> ch_Tg(const ModelPtr& m, const EquivCycle& e)
{
    auto out = cycle_ch(m, e);
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

/// Equivariant Chern–Simons forms of a per-root perturbation, per character.
inline std::map<Character, GradedElement> equiv_chern_simons(const EquivCycle& e, const Perturbation& pert)
{
    return chern_simons_forms(e, pert);
}

inline EquivClass equiv_normal_form(const ModelPtr& m, const CharacterGroup& g, const EquivCycle& plus,
                                    const EquivCycle& minus = {})
{
    for (const auto& [x, c] : plus.roots) {
        g.require_member(c);
    }
    for (const auto& [x, c] : minus.roots) {
        g.require_member(c);
    }
    return normal_form(m, CharacterPolicy{g}, plus, minus);
}

inline EquivClass equiv_one(const ModelPtr& m, const CharacterGroup& g) { return class_one(m, CharacterPolicy{g}); }
inline EquivClass equiv_cycle_mul(const EquivClass& a, const EquivClass& b) { return class_mul(a, b); }
inline EquivClass equiv_lambda(std::size_t n, const EquivClass& a) { return class_lambda(n, a); }
inline EquivClass equiv_adams(long k, const EquivClass& a) { return class_adams(k, a); }

/// Equivariant a(φ) = [0, φ].
inline EquivClass equiv_map_a(const ModelPtr& m, const CharacterGroup& g, const std::map<Character, OddCoset>& phi)
{
    return class_from_phi(m, CharacterPolicy{g}, phi);
}

/// Random equivariant class: up to three plus roots, at most one minus root, forms on at most two characters.
inline EquivClass random_equiv_class(const ModelPtr& m, const CharacterGroup& g, Rng& rng)
{
    EquivCycle plus;
    EquivCycle minus;
    long rp = rng.uniform(0, 3);
    for (long i = 0; i < rp; ++i) {
        plus.roots.emplace_back(random_closed(m, 2, rng, 1), g.random_character(rng));
    }
    long nphi = rng.uniform(0, 2);
    for (long i = 0; i < nphi; ++i) {
        detail::add_form(plus.phi, g.random_character(rng), random_odd(m, rng, 1));
    }
    long rm = rng.uniform(0, 1);
    for (long i = 0; i < rm; ++i) {
        minus.roots.emplace_back(random_closed(m, 2, rng, 1), g.random_character(rng));
    }
    return equiv_normal_form(m, g, plus, minus);
}

struct EquivContext {
    using ring_type = EquivRing;
    using value_type = EquivClass;
    ModelPtr model;
    CharacterGroup group;

    EquivRing ring() const { return {model, CharacterPolicy{group}}; }
    std::string name() const { return "Equiv(" + model->name() + ", " + group.to_string() + ")"; }
    TruncSeries<EquivRing> lambda_series(const EquivClass& x, std::size_t order) const
    {
        return class_lambda_series(x, order);
    }
    EquivClass sample(Rng& rng) const { return random_equiv_class(model, group, rng); }
};

} // namespace lambda_forge
