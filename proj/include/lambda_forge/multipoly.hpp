#pragma once

/**
 * @file multipoly.hpp
 * @brief Sparse multivariate polynomials over Q with named indeterminates.
 *
 * Canonical form: indeterminates sorted in natural order ("s2" < "s10"),
 * only indeterminates that actually occur are kept, no zero coefficients,
 * terms sorted by descending graded-lexicographic order. Structural
 * equality is therefore mathematical equality.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rational.hpp"
#include "ring.hpp"

namespace lambda_forge {

using Exponents = std::vector<std::uint32_t>;

/// Orders names by alphabetic prefix, then by numeric suffix, then bytewise.
inline bool natural_name_less(std::string_view a, std::string_view b)
{
    auto split = [](std::string_view s) {
        std::size_t i = s.size();
        while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) {
            --i;
        }
        return std::pair{s.substr(0, i), s.substr(i)};
    };
    auto [pa, da] = split(a);
    auto [pb, db] = split(b);
    if (pa != pb) {
        return pa < pb;
    }
    // compare digit strings numerically without overflow
    auto strip = [](std::string_view d) {
        std::size_t k = 0;
        while (k + 1 < d.size() && d[k] == '0') {
            ++k;
        }
        return d.substr(k);
    };
    auto sa = strip(da);
    auto sb = strip(db);
    if (sa.size() != sb.size()) {
        return sa.size() < sb.size();
    }
    if (sa != sb) {
        return sa < sb;
    }
    return a < b;
}

inline std::uint32_t exponent_degree(const Exponents& e)
{
    return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

/// Strict "a comes before b" in descending graded-lex order.
inline bool grlex_greater(const Exponents& a, const Exponents& b)
{
    auto da = exponent_degree(a);
    auto db = exponent_degree(b);
    if (da != db) {
        return da > db;
    }
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

class MultiPoly {
public:
    using Term = std::pair<Exponents, Rational>;

    MultiPoly() = default;

    MultiPoly(std::vector<std::string> vars, std::vector<Term> terms)
    {
        assign(std::move(vars), std::move(terms));
    }

    static MultiPoly constant(const Rational& c)
    {
        return MultiPoly({}, {Term{Exponents{}, c}});
    }

    static MultiPoly variable(const std::string& name, std::uint32_t power = 1)
    {
        return MultiPoly({name}, {Term{Exponents{power}, Rational(1)}});
    }

    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    std::uint32_t total_degree() const
    {
        std::uint32_t d = 0;
        for (const auto& [e, c] : terms_) {
            d = std::max(d, exponent_degree(e));
        }
        return d;
    }

    bool has_integer_coefficients() const
    {
        return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.second.is_integer(); });
    }

    /// Coefficient of the monomial given as name -> exponent (absent names mean exponent 0).
    Rational coefficient(const std::map<std::string, std::uint32_t>& monomial) const
    {
        Exponents want(vars_.size(), 0);
        for (const auto& [name, power] : monomial) {
            if (power == 0) {
                continue;
            }
            auto it = std::find(vars_.begin(), vars_.end(), name);
            if (it == vars_.end()) {
                return Rational(0);
            }
            want[static_cast<std::size_t>(it - vars_.begin())] = power;
        }
        for (const auto& [e, c] : terms_) {
            if (e == want) {
                return c;
            }
        }
        return Rational(0);
    }

    /// Exponent of `name` in a term, 0 if the variable does not occur.
    std::uint32_t exponent_of(const Exponents& e, const std::string& name) const
    {
        auto it = std::find(vars_.begin(), vars_.end(), name);
        return it == vars_.end() ? 0 : e[static_cast<std::size_t>(it - vars_.begin())];
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return combine(a, b, Rational(1)); }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return combine(a, b, Rational(-1)); }
    friend MultiPoly operator-(const MultiPoly& a) { return a * Rational(-1); }

    friend MultiPoly operator*(const MultiPoly& a, const Rational& q)
    {
        if (q.is_zero()) {
            return {};
        }
        MultiPoly r = a;
        for (auto& [e, c] : r.terms_) {
            c *= q;
        }
        return r;
    }
    friend MultiPoly operator*(const Rational& q, const MultiPoly& a) { return a * q; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        auto vars = merged_vars(a.vars_, b.vars_);
        auto ta = a.aligned_terms(vars);
        auto tb = b.aligned_terms(vars);
        std::map<Exponents, Rational> acc;
        Exponents e(vars.size());
        for (const auto& [ea, ca] : ta) {
            for (const auto& [eb, cb] : tb) {
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] = ea[i] + eb[i];
                }
                acc[e].add_product(ca, cb);
            }
        }
        return from_map(std::move(vars), acc);
    }

    MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
    MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly pow(unsigned e) const
    {
        MultiPoly r = constant(Rational(1));
        for (unsigned i = 0; i < e; ++i) {
            r *= *this;
        }
        return r;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b)
    {
        return a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }

    /// Terms re-indexed onto a superset `target` of vars(), in canonical order.
    std::vector<Term> aligned_terms(const std::vector<std::string>& target) const
    {
        std::vector<std::size_t> where(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            auto it = std::find(target.begin(), target.end(), vars_[i]);
            if (it == target.end()) {
                throw std::invalid_argument("variable '" + vars_[i] + "' missing from target variable list");
            }
            where[i] = static_cast<std::size_t>(it - target.begin());
        }
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [e, c] : terms_) {
            Exponents ne(target.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) {
                ne[where[i]] = e[i];
            }
            out.emplace_back(std::move(ne), c);
        }
        return out;
    }

    static std::vector<std::string> merged_vars(const std::vector<std::string>& a, const std::vector<std::string>& b)
    {
        std::vector<std::string> out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                       [](const std::string& x, const std::string& y) { return natural_name_less(x, y); });
        return out;
    }

    static MultiPoly from_map(std::vector<std::string> vars, const std::map<Exponents, Rational>& acc)
    {
        std::vector<Term> terms;
        terms.reserve(acc.size());
        for (const auto& [e, c] : acc) {
            if (!c.is_zero()) {
                terms.emplace_back(e, c);
            }
        }
        return MultiPoly(std::move(vars), std::move(terms));
    }

    /// Human-readable form, e.g. "s1²σ2 + s2σ1² − 2s2σ2".
    std::string to_string() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            bool negative = c.sign() < 0;
            Rational mag = negative ? -c : c;
            if (first) {
                if (negative) {
                    out += "−";
                }
            } else {
                out += negative ? " − " : " + ";
            }
            first = false;
            bool is_const = exponent_degree(e) == 0;
            if (!mag.is_one() || is_const) {
                out += mag.is_integer() ? mag.to_string() : "(" + mag.to_string() + ")";
            }
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) {
                    continue;
                }
                out += vars_[i];
                if (e[i] > 1) {
                    out += superscript(e[i]);
                }
            }
        }
        return out;
    }

    /// Plain form accepted by parse(), e.g. "x^2*y - 1/2*z".
    std::string to_ascii() const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string out;
        for (const auto& [e, c] : terms_) {
            bool negative = c.sign() < 0;
            Rational mag = negative ? -c : c;
            out += out.empty() ? (negative ? "-" : "") : (negative ? " - " : " + ");
            std::string factors;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) {
                    continue;
                }
                if (!factors.empty()) {
                    factors += "*";
                }
                factors += vars_[i];
                if (e[i] > 1) {
                    factors += "^" + std::to_string(e[i]);
                }
            }
            if (factors.empty()) {
                out += mag.to_string();
            } else if (mag.is_one()) {
                out += factors;
            } else {
                out += mag.to_string() + "*" + factors;
            }
        }
        return out;
    }

    /// {"vars": [...], "terms": [{"exp": [...], "num": "...", "den": "..."}]}
    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["vars"] = vars_;
        auto terms = nlohmann::ordered_json::array();
        for (const auto& [e, c] : terms_) {
            nlohmann::ordered_json t;
            t["exp"] = e;
            t["num"] = c.num_str();
            t["den"] = c.den_str();
            terms.push_back(std::move(t));
        }
        j["terms"] = std::move(terms);
        return j;
    }

    template <class Json>
    static MultiPoly from_json(const Json& j)
    {
        if (!j.is_object() || !j.contains("vars") || !j.contains("terms")) {
            throw std::invalid_argument("polynomial JSON needs \"vars\" and \"terms\"");
        }
        auto vars = j.at("vars").template get<std::vector<std::string>>();
        std::vector<Term> terms;
        for (const auto& t : j.at("terms")) {
            auto e = t.at("exp").template get<Exponents>();
            if (e.size() != vars.size()) {
                throw std::invalid_argument("exponent vector length does not match variable count");
            }
            terms.emplace_back(std::move(e), Rational::parse(t.at("num").template get<std::string>(),
                                                             t.at("den").template get<std::string>()));
        }
        return MultiPoly(std::move(vars), std::move(terms));
    }

    /// Parses expressions like "x^2 - 2*x*y + 1/2*z" or "(a+b)^3".
    static MultiPoly parse(std::string_view text);

private:
    void assign(std::vector<std::string> vars, std::vector<Term> terms)
    {
        // sort variables, remembering the permutation
        std::vector<std::size_t> perm(vars.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(),
                  [&](std::size_t x, std::size_t y) { return natural_name_less(vars[x], vars[y]); });
        for (std::size_t i = 1; i < perm.size(); ++i) {
            if (vars[perm[i]] == vars[perm[i - 1]]) {
                throw std::invalid_argument("duplicate variable '" + vars[perm[i]] + "'");
            }
        }
        std::map<Exponents, Rational> acc;
        for (auto& [e, c] : terms) {
            if (e.size() != vars.size()) {
                throw std::invalid_argument("exponent vector length does not match variable count");
            }
            Exponents ne(e.size());
            for (std::size_t i = 0; i < perm.size(); ++i) {
                ne[i] = e[perm[i]];
            }
            acc[std::move(ne)] += c;
        }
        // drop zero terms and unused variables
        std::vector<bool> used(vars.size(), false);
        for (const auto& [e, c] : acc) {
            if (c.is_zero()) {
                continue;
            }
            for (std::size_t i = 0; i < e.size(); ++i) {
                used[i] = used[i] || e[i] != 0;
            }
        }
        vars_.clear();
        for (std::size_t i = 0; i < perm.size(); ++i) {
            if (used[i]) {
                vars_.push_back(vars[perm[i]]);
            }
        }
        terms_.clear();
        for (auto& [e, c] : acc) {
            if (c.is_zero()) {
                continue;
            }
            Exponents ne;
            ne.reserve(vars_.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (used[i]) {
                    ne.push_back(e[i]);
                }
            }
            terms_.emplace_back(std::move(ne), c);
        }
        std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return grlex_greater(x.first, y.first); });
    }

    static MultiPoly combine(const MultiPoly& a, const MultiPoly& b, const Rational& sign)
    {
        auto vars = merged_vars(a.vars_, b.vars_);
        std::map<Exponents, Rational> acc;
        for (auto& [e, c] : a.aligned_terms(vars)) {
            acc[e] += c;
        }
        for (auto& [e, c] : b.aligned_terms(vars)) {
            acc[e].add_product(c, sign);
        }
        return from_map(std::move(vars), acc);
    }

    static std::string superscript(std::uint32_t n)
    {
        static const char* digits[] = {"⁰", "¹", "²", "³", "⁴",
                                       "⁵", "⁶", "⁷", "⁸", "⁹"};
        std::string s = std::to_string(n);
        std::string out;
        for (char ch : s) {
            out += digits[ch - '0'];
        }
        return out;
    }

    std::vector<std::string> vars_;
    std::vector<Term> terms_;
};

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string_view text) : s_(text) {}

    MultiPoly run()
    {
        auto p = expr();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected character");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + " in '" +
                                    std::string(s_) + "': " + what);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char ch)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    MultiPoly expr()
    {
        MultiPoly acc;
        bool negate = false;
        if (eat('-')) {
            negate = true;
        } else {
            eat('+');
        }
        auto t = term();
        acc = negate ? -t : t;
        while (true) {
            if (eat('+')) {
                acc += term();
            } else if (eat('-')) {
                acc -= term();
            } else {
                break;
            }
        }
        return acc;
    }

    MultiPoly term()
    {
        auto acc = factor();
        while (eat('*')) {
            acc *= factor();
        }
        return acc;
    }

    unsigned integer()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected integer");
        }
        return static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
    }

    MultiPoly power_suffix(MultiPoly base)
    {
        if (eat('^')) {
            return base.pow(integer());
        }
        return base;
    }

    MultiPoly factor()
    {
        skip();
        if (pos_ >= s_.size()) {
            fail("unexpected end of input");
        }
        char ch = s_[pos_];
        if (ch == '(') {
            ++pos_;
            auto inner = expr();
            if (!eat(')')) {
                fail("expected ')'");
            }
            return power_suffix(inner);
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            std::string num(s_.substr(start, pos_ - start));
            std::string den = "1";
            skip();
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                den = std::to_string(integer());
            }
            return MultiPoly::constant(Rational::parse(num, den));
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_' || static_cast<unsigned char>(ch) >= 0x80) {
            std::size_t start = pos_;
            // bytes >= 0x80 let UTF-8 names such as σ1 through
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                        static_cast<unsigned char>(s_[pos_]) >= 0x80)) {
                ++pos_;
            }
            return power_suffix(MultiPoly::variable(std::string(s_.substr(start, pos_ - start))));
        }
        fail(std::string("unexpected '") + ch + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline MultiPoly MultiPoly::parse(std::string_view text)
{
    return detail::PolyParser(text).run();
}

/// Polynomials over Q as a ring descriptor.
struct PolyRing {
    using value_type = MultiPoly;

    MultiPoly zero() const { return {}; }
    MultiPoly one() const { return MultiPoly::constant(Rational(1)); }
    MultiPoly add(const MultiPoly& a, const MultiPoly& b) const { return a + b; }
    MultiPoly neg(const MultiPoly& a) const { return -a; }
    MultiPoly mul(const MultiPoly& a, const MultiPoly& b) const { return a * b; }
    MultiPoly scale(const MultiPoly& a, const Rational& q) const { return a * q; }
    bool equal(const MultiPoly& a, const MultiPoly& b) const { return a == b; }
    std::string to_string(const MultiPoly& a) const { return a.to_string(); }

    friend bool operator==(const PolyRing&, const PolyRing&) { return true; }
};

/**
 * Evaluates `p` in an arbitrary commutative ring.
 *
 * Every indeterminate of `p` needs an entry in `assignment`. Non-integer
 * coefficients are only accepted when the target ring is a Q-algebra.
 */
template <CommutativeRing R>
typename R::value_type eval_in_ring(const MultiPoly& p,
                                    const std::map<std::string, typename R::value_type>& assignment,
                                    const R& ring)
{
    using V = typename R::value_type;
    std::vector<const V*> values;
    values.reserve(p.vars().size());
    for (const auto& name : p.vars()) {
        auto it = assignment.find(name);
        if (it == assignment.end()) {
            throw std::invalid_argument("no value assigned to indeterminate '" + name + "'");
        }
        values.push_back(&it->second);
    }
    if constexpr (!RationalAlgebra<R>) {
        for (const auto& [e, c] : p.terms()) {
            if (!c.is_integer()) {
                throw std::domain_error("coefficient " + c.to_string() + " is not an integer and the target ring has no Q-action");
            }
        }
    }
    // powers[i][k] = value_i^k, built lazily
    std::vector<std::vector<V>> powers(values.size());
    auto power = [&](std::size_t i, std::uint32_t k) -> const V& {
        auto& cache = powers[i];
        if (cache.empty()) {
            cache.push_back(ring.one());
        }
        while (cache.size() <= k) {
            cache.push_back(ring.mul(cache.back(), *values[i]));
        }
        return cache[k];
    };
    V acc = ring.zero();
    for (const auto& [e, c] : p.terms()) {
        V term = ring.one();
        bool first = true;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) {
                continue;
            }
            term = first ? power(i, e[i]) : ring.mul(term, power(i, e[i]));
            first = false;
        }
        acc = ring.add(acc, ring_qmul(ring, term, c));
    }
    return acc;
}

} // namespace lambda_forge
