#pragma once

/**
 * @file symfun.hpp
 * @brief Universal integer polynomials of lambda-ring theory.
 *
 * P_n(s; σ)   coefficient of t^n in prod_{i,j} (1 + ξ_i ζ_j t)
 * P_{n,m}(s)  coefficient of t^n in prod_{i_1<...<i_m} (1 + ξ_{i_1}...ξ_{i_m} t)
 * ν_k(s)      power sum ξ_1^k + ... + ξ_q^k
 *
 * each rewritten from the expanded form into elementary symmetric functions
 * s_i = e_i(ξ), σ_j = e_j(ζ) by repeated subtraction of the elementary
 * monomial matching the lex-leading term.
 */

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "multipoly.hpp"
#include "series.hpp"

namespace lambda_forge {

inline std::string s_var(unsigned i) { return "s" + std::to_string(i); }
inline std::string sigma_var(unsigned i) { return "σ" + std::to_string(i); }
inline std::string xi_var(unsigned i) { return "ξ" + std::to_string(i); }
inline std::string zeta_var(unsigned i) { return "ζ" + std::to_string(i); }

inline std::vector<std::string> var_family(std::string (*name)(unsigned), unsigned count)
{
    std::vector<std::string> out;
    for (unsigned i = 1; i <= count; ++i) {
        out.push_back(name(i));
    }
    return out;
}

enum class UniversalKind { Pn, Pnm, Nu };

struct UniversalPoly {
    UniversalKind kind;
    unsigned n = 0;
    unsigned m = 0; // P_{n,m} only
    MultiPoly poly;

    /// Cache key: "Pn/<n>", "Pnm/<n>/<m>" or "nu/<k>".
    std::string key() const
    {
        switch (kind) {
        case UniversalKind::Pn:
            return "Pn/" + std::to_string(n);
        case UniversalKind::Pnm:
            return "Pnm/" + std::to_string(n) + "/" + std::to_string(m);
        case UniversalKind::Nu:
            return "nu/" + std::to_string(n);
        }
        return {};
    }
};

/// Weighted degree where the i-th member of `family` has weight i; throws if not homogeneous.
inline unsigned family_weight(const MultiPoly& p, const std::vector<std::string>& family)
{
    std::vector<unsigned> weight_of(p.vars().size(), 0);
    for (std::size_t v = 0; v < p.vars().size(); ++v) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            if (p.vars()[v] == family[i]) {
                weight_of[v] = static_cast<unsigned>(i + 1);
            }
        }
    }
    bool seen = false;
    unsigned w = 0;
    for (const auto& [e, c] : p.terms()) {
        unsigned tw = 0;
        for (std::size_t v = 0; v < e.size(); ++v) {
            tw += weight_of[v] * e[v];
        }
        if (seen && tw != w) {
            throw std::domain_error("polynomial is not weighted-homogeneous");
        }
        seen = true;
        w = tw;
    }
    return w;
}

namespace detail {

struct LexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const
    {
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

inline bool nonincreasing(const Exponents& a)
{
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i] > a[i - 1]) {
            return false;
        }
    }
    return true;
}

/// Restricted representation of a symmetric polynomial: partition exponent -> (rest exponent -> coeff).
using RestrictedSym = std::map<Exponents, std::map<Exponents, Rational>, LexGreater>;

/// Coefficients on partition monomials of e_1^{a_1} ... e_q^{a_q} in q variables.
inline const std::map<Exponents, Rational>& elementary_product_partitions(const Exponents& a)
{
    static std::mutex mu;
    static std::map<Exponents, std::map<Exponents, Rational>> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(a);
    if (it != memo.end()) {
        return it->second;
    }
    const auto q = static_cast<unsigned>(a.size());
    auto vars = var_family(xi_var, q);
    MultiPoly prod = MultiPoly::constant(Rational(1));
    for (unsigned i = 1; i <= q; ++i) {
        if (a[i - 1] == 0) {
            continue;
        }
        // e_i as the sum over i-subsets
        std::vector<MultiPoly::Term> terms;
        std::vector<unsigned> idx(i);
        for (unsigned k = 0; k < i; ++k) {
            idx[k] = k;
        }
        while (true) {
            Exponents e(q, 0);
            for (unsigned k : idx) {
                e[k] = 1;
            }
            terms.emplace_back(std::move(e), Rational(1));
            int pos = static_cast<int>(i) - 1;
            while (pos >= 0 && idx[static_cast<unsigned>(pos)] == q - i + static_cast<unsigned>(pos)) {
                --pos;
            }
            if (pos < 0) {
                break;
            }
            ++idx[static_cast<unsigned>(pos)];
            for (unsigned k = static_cast<unsigned>(pos) + 1; k < i; ++k) {
                idx[k] = idx[k - 1] + 1;
            }
        }
        MultiPoly ei(vars, std::move(terms));
        prod *= ei.pow(a[i - 1]);
    }
    std::map<Exponents, Rational> restricted;
    for (const auto& t : prod.aligned_terms(vars)) {
        if (nonincreasing(t.first)) {
            restricted.emplace(t.first, t.second);
        }
    }
    return memo.emplace(a, std::move(restricted)).first->second;
}

/**
 * Leading-term rewriting on the restricted representation.
 * Returns a map (exponents of s_1..s_q, rest exponent) -> coefficient.
 */
inline std::map<std::pair<Exponents, Exponents>, Rational> rewrite_restricted(RestrictedSym rem, unsigned q)
{
    std::map<std::pair<Exponents, Exponents>, Rational> result;
    while (!rem.empty()) {
        auto lead_it = rem.begin();
        const Exponents alpha = lead_it->first;
        const std::map<Exponents, Rational> coeff = lead_it->second;
        Exponents a(q, 0);
        for (unsigned i = 0; i < q; ++i) {
            a[i] = alpha[i] - (i + 1 < q ? alpha[i + 1] : 0);
        }
        for (const auto& [rho, c] : coeff) {
            result[{a, rho}] += c;
        }
        for (const auto& [beta, eb] : elementary_product_partitions(a)) {
            auto& slot = rem[beta];
            for (const auto& [rho, c] : coeff) {
                auto& v = slot[rho];
                v -= eb * c;
                if (v.is_zero()) {
                    slot.erase(rho);
                }
            }
            if (slot.empty()) {
                rem.erase(beta);
            }
        }
        if (rem.count(alpha) != 0) {
            throw std::logic_error("symmetric rewriting did not cancel the leading term");
        }
    }
    return result;
}

inline MultiPoly assemble(const std::map<std::pair<Exponents, Exponents>, Rational>& rewritten,
                          const std::vector<std::string>& out_family, const std::vector<std::string>& rest_vars)
{
    std::vector<std::string> vars = out_family;
    vars.insert(vars.end(), rest_vars.begin(), rest_vars.end());
    std::vector<MultiPoly::Term> terms;
    for (const auto& [key, c] : rewritten) {
        Exponents e = key.first;
        e.insert(e.end(), key.second.begin(), key.second.end());
        terms.emplace_back(std::move(e), c);
    }
    return MultiPoly(std::move(vars), std::move(terms));
}

} // namespace detail

/**
 * Rewrites a polynomial symmetric in the variables `family` (ξ_1..ξ_q) in
 * terms of elementary symmetric functions named `out_prefix`1..q.
 * Variables of `p` outside `family` are carried along as coefficients.
 */
inline MultiPoly to_elementary_basis(const MultiPoly& p, const std::vector<std::string>& family,
                                     const std::string& out_prefix = "s")
{
    const auto q = static_cast<unsigned>(family.size());
    auto vars = MultiPoly::merged_vars(p.vars(), [&] {
        auto f = family;
        std::sort(f.begin(), f.end(), [](const std::string& x, const std::string& y) { return natural_name_less(x, y); });
        return f;
    }());
    std::vector<std::size_t> fam_idx;
    for (const auto& name : family) {
        fam_idx.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), name) - vars.begin()));
    }
    std::vector<std::size_t> rest_idx;
    std::vector<std::string> rest_vars;
    for (std::size_t v = 0; v < vars.size(); ++v) {
        if (std::find(fam_idx.begin(), fam_idx.end(), v) == fam_idx.end()) {
            rest_idx.push_back(v);
            rest_vars.push_back(vars[v]);
        }
    }
    auto aligned = p.aligned_terms(vars);

    std::map<Exponents, Rational> lookup;
    for (const auto& [e, c] : aligned) {
        lookup.emplace(e, c);
    }
    for (unsigned i = 0; i + 1 < q; ++i) {
        for (const auto& [e, c] : aligned) {
            Exponents sw = e;
            std::swap(sw[fam_idx[i]], sw[fam_idx[i + 1]]);
            auto it = lookup.find(sw);
            if (it == lookup.end() || it->second != c) {
                throw std::invalid_argument("polynomial is not symmetric: transposition (" + family[i] + " " +
                                            family[i + 1] + ") changes it");
            }
        }
    }

    detail::RestrictedSym rem;
    for (const auto& [e, c] : aligned) {
        Exponents alpha;
        for (auto i : fam_idx) {
            alpha.push_back(e[i]);
        }
        if (!detail::nonincreasing(alpha)) {
            continue;
        }
        Exponents rho;
        for (auto i : rest_idx) {
            rho.push_back(e[i]);
        }
        rem[alpha][rho] += c;
    }
    std::vector<std::string> out_family;
    for (unsigned i = 1; i <= q; ++i) {
        out_family.push_back(out_prefix + std::to_string(i));
    }
    return detail::assemble(detail::rewrite_restricted(std::move(rem), q), out_family, rest_vars);
}

/// Elementary symmetric polynomials e_0..e_q of the given variables, by expanding prod (1 + v t).
inline std::vector<MultiPoly> elementary_polys(const std::vector<std::string>& family)
{
    const std::size_t q = family.size();
    auto acc = TruncSeries<PolyRing>::one(PolyRing{}, std::max<std::size_t>(q, 1));
    for (const auto& v : family) {
        std::vector<MultiPoly> c(acc.order() + 1, MultiPoly{});
        c[0] = MultiPoly::constant(Rational(1));
        c[1] = MultiPoly::variable(v);
        acc = series_mul(acc, TruncSeries<PolyRing>(PolyRing{}, std::move(c)));
    }
    return acc.coefficients();
}

/// P_n in s_1..s_n, σ_1..σ_n, expanded with q = r = `vars` variables per family (vars >= n).
inline UniversalPoly compute_Pn(unsigned n, unsigned vars = 0)
{
    if (n == 0) {
        throw std::invalid_argument("compute_Pn needs n >= 1");
    }
    const unsigned q = vars == 0 ? n : vars;
    if (q < n) {
        throw std::invalid_argument("compute_Pn needs at least n variables per family");
    }
    // prod_{i,j} (1 + ξ_i ζ_j t) = prod_i F(ξ_i t) with F(u) = prod_j (1 + ζ_j u) = sum_k e_k(ζ) u^k,
    // so the coefficient of ξ^λ t^n is prod_i e_{λ_i}(ζ).
    auto zetas = var_family(zeta_var, q);
    auto e_zeta = elementary_polys(zetas);
    std::vector<std::string> zeta_sorted = zetas;

    detail::RestrictedSym rem;
    // enumerate partitions of n with at most q parts (parts <= q automatically handled by e_k = 0)
    std::vector<unsigned> part;
    auto emit = [&](const std::vector<unsigned>& lambda) {
        Exponents alpha(q, 0);
        MultiPoly coeff = MultiPoly::constant(Rational(1));
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            alpha[i] = lambda[i];
            if (lambda[i] > q) {
                return;
            }
            coeff *= e_zeta[lambda[i]];
        }
        for (const auto& [e, c] : coeff.aligned_terms(zeta_sorted)) {
            rem[alpha][e] += c;
        }
    };
    std::function<void(unsigned, unsigned)> gen = [&](unsigned remaining, unsigned max_part) {
        if (remaining == 0) {
            emit(part);
            return;
        }
        if (part.size() == q) {
            return;
        }
        for (unsigned p = std::min(remaining, max_part); p >= 1; --p) {
            part.push_back(p);
            gen(remaining - p, p);
            part.pop_back();
        }
    };
    gen(n, n);

    auto s_family = var_family(s_var, q);
    MultiPoly in_s_and_zeta = detail::assemble(detail::rewrite_restricted(std::move(rem), q), s_family, zeta_sorted);
    MultiPoly result = to_elementary_basis(in_s_and_zeta, zetas, "σ");
    return UniversalPoly{UniversalKind::Pn, n, 0, std::move(result)};
}

/// P_{n,m} in s_1..s_{nm}, expanded with q = `vars` variables (vars >= nm).
inline UniversalPoly compute_Pnm(unsigned n, unsigned m, unsigned vars = 0)
{
    if (n == 0 || m == 0) {
        throw std::invalid_argument("compute_Pnm needs n, m >= 1");
    }
    const unsigned q = vars == 0 ? n * m : vars;
    if (q < n * m) {
        throw std::invalid_argument("compute_Pnm needs at least n*m variables");
    }
    auto xis = var_family(xi_var, q);
    auto acc = TruncSeries<PolyRing>::one(PolyRing{}, n);
    std::vector<unsigned> idx(m);
    for (unsigned k = 0; k < m; ++k) {
        idx[k] = k;
    }
    while (true) {
        Exponents e(q, 0);
        for (unsigned k : idx) {
            e[k] = 1;
        }
        std::vector<MultiPoly> c(n + 1, MultiPoly{});
        c[0] = MultiPoly::constant(Rational(1));
        c[1] = MultiPoly(xis, {MultiPoly::Term{std::move(e), Rational(1)}});
        acc = series_mul(acc, TruncSeries<PolyRing>(PolyRing{}, std::move(c)));
        int pos = static_cast<int>(m) - 1;
        while (pos >= 0 && idx[static_cast<unsigned>(pos)] == q - m + static_cast<unsigned>(pos)) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++idx[static_cast<unsigned>(pos)];
        for (unsigned k = static_cast<unsigned>(pos) + 1; k < m; ++k) {
            idx[k] = idx[k - 1] + 1;
        }
    }
    MultiPoly result = to_elementary_basis(acc[n], xis, "s");
    return UniversalPoly{UniversalKind::Pnm, n, m, std::move(result)};
}

/// ν_k = ξ_1^k + ... + ξ_q^k in elementary symmetric functions (q = k by default).
inline UniversalPoly newton_nu(unsigned k, unsigned vars = 0)
{
    if (k == 0) {
        throw std::invalid_argument("newton_nu needs k >= 1");
    }
    const unsigned q = vars == 0 ? k : vars;
    auto xis = var_family(xi_var, q);
    MultiPoly p;
    for (const auto& x : xis) {
        p += MultiPoly::variable(x, k);
    }
    return UniversalPoly{UniversalKind::Nu, k, 0, to_elementary_basis(p, xis, "s")};
}

/// Process-wide memo of universal polynomials (thread-safe).
class UniversalTable {
public:
    static UniversalTable& instance()
    {
        static UniversalTable table;
        return table;
    }

    MultiPoly Pn(unsigned n) { return get({UniversalKind::Pn, n, 0}); }
    MultiPoly Pnm(unsigned n, unsigned m) { return get({UniversalKind::Pnm, n, m}); }
    MultiPoly nu(unsigned k) { return get({UniversalKind::Nu, k, 0}); }

    /// Memoized value, if any.
    std::optional<MultiPoly> find(UniversalKind kind, unsigned n, unsigned m = 0)
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find({kind, n, m});
        if (it == memo_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    /// Seeds the memo (e.g. from the on-disk cache).
    void put(const UniversalPoly& u)
    {
        std::lock_guard<std::mutex> lock(mu_);
        memo_[{u.kind, u.n, u.m}] = u.poly;
    }

private:
    using Key = std::tuple<UniversalKind, unsigned, unsigned>;

    MultiPoly get(Key key)
    {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) {
                return it->second;
            }
        }
        auto [kind, n, m] = key;
        UniversalPoly u = kind == UniversalKind::Pn    ? compute_Pn(n)
                          : kind == UniversalKind::Pnm ? compute_Pnm(n, m)
                                                       : newton_nu(n);
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.emplace(key, std::move(u.poly)).first->second;
    }

    std::mutex mu_;
    std::map<Key, MultiPoly> memo_;
};

} // namespace lambda_forge
