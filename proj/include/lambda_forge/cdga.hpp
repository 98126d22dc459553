#pragma once

/**
 * @file cdga.hpp
 * @brief Finite commutative differential graded algebra models.
 *
 * A model is presented by graded generators, a differential on generators
 * and homogeneous relations, truncated above a top degree D. Internally the
 * free graded-commutative algebra is enumerated degree by degree, the
 * relation ideal is row-reduced, and the normal (non-pivot) monomials form
 * the basis. Wedge and d are tabulated on that basis.
 *
 * In relation and differential polynomials a monomial stands for the
 * ordered product of its generators in declaration order.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "linalg.hpp"
#include "multipoly.hpp"
#include "ring.hpp"

namespace lambda_forge {

struct GeneratorSpec {
    std::string name;
    unsigned degree = 1;
};

/// Presentation of a model; see the JSON schema in README.
struct ModelSpec {
    std::string name;
    unsigned top_degree = 0;
    std::vector<GeneratorSpec> generators;
    std::vector<std::pair<std::string, MultiPoly>> differential; // generator -> d(generator)
    std::vector<MultiPoly> relations;

    static ModelSpec from_json(const nlohmann::json& j)
    {
        ModelSpec s;
        try {
            s.name = j.value("name", std::string("custom"));
            long top = j.at("top_degree").get<long>();
            if (top < 0) {
                throw std::invalid_argument("top_degree must be nonnegative");
            }
            s.top_degree = static_cast<unsigned>(top);
            for (const auto& g : j.value("generators", nlohmann::json::array())) {
                long deg = g.at("degree").get<long>();
                if (deg < 1) {
                    throw std::invalid_argument("generator '" + g.at("name").get<std::string>() +
                                                "' must have positive degree");
                }
                s.generators.push_back({g.at("name").get<std::string>(), static_cast<unsigned>(deg)});
            }
            for (const auto& d : j.value("differential", nlohmann::json::array())) {
                s.differential.emplace_back(d.at("of").get<std::string>(),
                                            MultiPoly::parse(d.at("value").get<std::string>()));
            }
            for (const auto& r : j.value("relations", nlohmann::json::array())) {
                s.relations.push_back(MultiPoly::parse(r.get<std::string>()));
            }
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument(std::string("malformed model specification: ") + e.what());
        }
        return s;
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["top_degree"] = top_degree;
        auto gens = nlohmann::ordered_json::array();
        for (const auto& g : generators) {
            gens.push_back({{"name", g.name}, {"degree", g.degree}});
        }
        j["generators"] = gens;
        auto diff = nlohmann::ordered_json::array();
        for (const auto& [of, value] : differential) {
            diff.push_back({{"of", of}, {"value", value.to_ascii()}});
        }
        j["differential"] = diff;
        auto rels = nlohmann::ordered_json::array();
        for (const auto& r : relations) {
            rels.push_back(r.to_ascii());
        }
        j["relations"] = rels;
        return j;
    }
};

class CDGAModel;
using ModelPtr = std::shared_ptr<const CDGAModel>;

namespace detail {
using FreeElem = std::map<Exponents, Rational>;
using Sparse = std::vector<std::pair<std::uint32_t, Rational>>;
} // namespace detail

class CDGAModel {
public:
    const std::string& name() const { return spec_.name; }
    const ModelSpec& spec() const { return spec_; }
    unsigned top_degree() const { return spec_.top_degree; }
    std::size_t dim() const { return degree_of_.size(); }
    std::size_t dim(unsigned k) const { return k > top_degree() ? 0 : offset_[k + 1] - offset_[k]; }
    std::size_t offset(unsigned k) const { return offset_[std::min<std::size_t>(k, top_degree() + 1)]; }
    unsigned degree_of(std::size_t i) const { return degree_of_.at(i); }
    const std::string& basis_label(std::size_t i) const { return labels_.at(i); }
    const Exponents& basis_monomial(std::size_t i) const { return basis_mono_.at(i); }

    std::size_t generator_index(const std::string& name) const
    {
        for (std::size_t i = 0; i < spec_.generators.size(); ++i) {
            if (spec_.generators[i].name == name) {
                return i;
            }
        }
        throw std::invalid_argument("model '" + name_or_custom() + "' has no generator '" + name + "'");
    }

    /// True when every generator has d = 0.
    bool is_formal() const
    {
        for (std::size_t i = 0; i < dim(); ++i) {
            if (!diff_[i].empty()) {
                return false;
            }
        }
        return true;
    }

    const detail::Sparse& product(std::size_t i, std::size_t j) const { return prod_[i * dim() + j]; }
    const detail::Sparse& diff(std::size_t i) const { return diff_[i]; }

    /// Coordinates of a free-algebra element after reduction modulo the relations.
    Vec reduce_free(const detail::FreeElem& f) const
    {
        Vec out(dim(), Rational(0));
        std::map<unsigned, Vec> by_degree;
        for (const auto& [e, c] : f) {
            unsigned k = free_degree(e);
            if (k > top_degree() || c.is_zero()) {
                continue;
            }
            auto [it, fresh] = by_degree.try_emplace(k);
            if (fresh) {
                it->second.assign(free_[k].size(), Rational(0));
            }
            it->second[free_col_.at(e)] += c;
        }
        for (auto& [k, v] : by_degree) {
            Vec r = ideal_[k].reduce(std::move(v));
            for (std::size_t col = 0; col < r.size(); ++col) {
                if (!r[col].is_zero()) {
                    out[normal_index_[k][col]] = r[col];
                }
            }
        }
        return out;
    }

    /// Free-algebra element for a polynomial in the generator names.
    detail::FreeElem free_from_poly(const MultiPoly& p) const
    {
        std::vector<std::string> gens;
        for (const auto& g : spec_.generators) {
            gens.push_back(g.name);
        }
        std::vector<MultiPoly::Term> aligned;
        try {
            aligned = p.aligned_terms(gens);
        } catch (const std::invalid_argument&) {
            for (const auto& v : p.vars()) {
                if (std::find(gens.begin(), gens.end(), v) == gens.end()) {
                    throw std::invalid_argument("model '" + name_or_custom() + "': unknown generator '" + v + "'");
                }
            }
            throw;
        }
        detail::FreeElem f;
        for (auto& [e, c] : aligned) {
            bool vanishes = false;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (spec_.generators[i].degree % 2 == 1 && e[i] > 1) {
                    vanishes = true;
                }
            }
            if (!vanishes) {
                f[e] += c;
            }
        }
        return f;
    }

    unsigned free_degree(const Exponents& e) const
    {
        unsigned k = 0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            k += e[i] * spec_.generators[i].degree;
        }
        return k;
    }

    /// Product of free monomials: nullopt when it vanishes, else (monomial, sign).
    std::optional<std::pair<Exponents, int>> free_mul(const Exponents& a, const Exponents& b) const
    {
        Exponents e(a.size(), 0);
        int sign = 1;
        for (std::size_t i = 0; i < a.size(); ++i) {
            bool odd = spec_.generators[i].degree % 2 == 1;
            if (odd && a[i] > 0 && b[i] > 0) {
                return std::nullopt;
            }
            e[i] = a[i] + b[i];
            if (odd && a[i] > 0) {
                for (std::size_t j = 0; j < i; ++j) {
                    if (b[j] > 0 && spec_.generators[j].degree % 2 == 1) {
                        sign = -sign;
                    }
                }
            }
        }
        if (free_degree(e) > top_degree()) {
            return std::nullopt;
        }
        return std::make_pair(std::move(e), sign);
    }

    detail::FreeElem free_mul(const detail::FreeElem& a, const detail::FreeElem& b) const
    {
        detail::FreeElem out;
        for (const auto& [ea, ca] : a) {
            for (const auto& [eb, cb] : b) {
                auto m = free_mul(ea, eb);
                if (m) {
                    out[m->first] += m->second > 0 ? ca * cb : -(ca * cb);
                }
            }
        }
        std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
        return out;
    }

    /// d on the free algebra (Leibniz from the generator differentials).
    detail::FreeElem free_d(const Exponents& m) const
    {
        std::lock_guard<std::mutex> lock(d_memo_mu_);
        return free_d_locked(m);
    }

    detail::FreeElem free_d(const detail::FreeElem& f) const
    {
        detail::FreeElem out;
        for (const auto& [e, c] : f) {
            for (const auto& [e2, c2] : free_d(e)) {
                out[e2] += c * c2;
            }
        }
        std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
        return out;
    }

    /// Images of d : A^{k-1} -> A^k, row-reduced, with preimages as payloads.
    const RowReducer& exact_forms(unsigned k) const { return exact_.at(k); }

    /// Basis of the closed forms Z^k (coordinates within degree k).
    const std::vector<Vec>& cocycle_basis(unsigned k) const { return cocycles_.at(k); }

    static ModelPtr build(ModelSpec spec);

private:
    CDGAModel() = default;

    std::string name_or_custom() const { return spec_.name.empty() ? "custom" : spec_.name; }

    detail::FreeElem free_d_locked(const Exponents& m) const
    {
        auto it = d_memo_.find(m);
        if (it != d_memo_.end()) {
            return it->second;
        }
        detail::FreeElem out;
        std::size_t first = m.size();
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] > 0) {
                first = i;
                break;
            }
        }
        if (first < m.size()) {
            Exponents g(m.size(), 0);
            g[first] = 1;
            Exponents rest = m;
            rest[first] -= 1;
            detail::FreeElem gen{{g, Rational(1)}};
            detail::FreeElem rest_elem{{rest, Rational(1)}};
            // d(g * rest) = dg * rest + (-1)^{|g|} g * d(rest)
            auto left = free_mul(gen_d_[first], rest_elem);
            auto drest = free_d_locked(rest);
            auto right = free_mul(gen, drest);
            out = left;
            bool odd = spec_.generators[first].degree % 2 == 1;
            for (const auto& [e, c] : right) {
                out[e] += odd ? -c : c;
            }
            std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
        }
        d_memo_.emplace(m, out);
        return out;
    }

    std::string monomial_label(const Exponents& e) const;

    ModelSpec spec_;
    std::vector<detail::FreeElem> gen_d_;
    std::vector<std::vector<Exponents>> free_;         // per degree, in pivot-priority order
    std::map<Exponents, std::size_t> free_col_;        // monomial -> column within its degree
    std::vector<RowReducer> ideal_;                    // per degree
    std::vector<std::vector<std::size_t>> normal_index_; // per degree: column -> basis index (or npos)
    std::vector<std::size_t> offset_;
    std::vector<unsigned> degree_of_;
    std::vector<std::string> labels_;
    std::vector<Exponents> basis_mono_;
    std::vector<detail::Sparse> prod_;
    std::vector<detail::Sparse> diff_;
    std::vector<RowReducer> exact_;
    std::vector<std::vector<Vec>> cocycles_;
    mutable std::mutex d_memo_mu_;
    mutable std::map<Exponents, detail::FreeElem> d_memo_;
};

inline std::string superscript_number(std::uint32_t n)
{
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string s = std::to_string(n);
    std::string out;
    for (char ch : s) {
        out += digits[ch - '0'];
    }
    return out;
}

inline std::string CDGAModel::monomial_label(const Exponents& e) const
{
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += "∧";
        }
        out += spec_.generators[i].name;
        if (e[i] > 1) {
            out += superscript_number(e[i]);
        }
    }
    return out.empty() ? "1" : out;
}

/// A form: coordinates over the whole basis of a model.
class GradedElement {
public:
    GradedElement() = default;
    explicit GradedElement(ModelPtr model) : model_(std::move(model)), c_(model_->dim(), Rational(0)) {}
    GradedElement(ModelPtr model, Vec coords) : model_(std::move(model)), c_(std::move(coords))
    {
        if (c_.size() != model_->dim()) {
            throw std::invalid_argument("coordinate vector of length " + std::to_string(c_.size()) +
                                        " does not match model dimension " + std::to_string(model_->dim()));
        }
    }

    static GradedElement scalar(const ModelPtr& model, const Rational& q)
    {
        GradedElement e(model);
        e.c_[0] = q;
        return e;
    }
    static GradedElement one(const ModelPtr& model) { return scalar(model, Rational(1)); }
    static GradedElement basis(const ModelPtr& model, std::size_t i)
    {
        GradedElement e(model);
        e.c_.at(i) = Rational(1);
        return e;
    }
    /// Element of degree k from coordinates within that degree.
    static GradedElement from_component(const ModelPtr& model, unsigned k, const Vec& v)
    {
        if (v.size() != model->dim(k)) {
            throw std::invalid_argument("component length mismatch in degree " + std::to_string(k));
        }
        GradedElement e(model);
        std::copy(v.begin(), v.end(), e.c_.begin() + static_cast<long>(model->offset(k)));
        return e;
    }
    /// Parses a polynomial in the generators and reduces it in the model.
    static GradedElement from_poly(const ModelPtr& model, const MultiPoly& p)
    {
        return GradedElement(model, model->reduce_free(model->free_from_poly(p)));
    }
    static GradedElement parse(const ModelPtr& model, const std::string& text)
    {
        return from_poly(model, MultiPoly::parse(text));
    }

    const ModelPtr& model() const { return model_; }
    const Vec& coords() const { return c_; }

    Vec component(unsigned k) const
    {
        auto lo = c_.begin() + static_cast<long>(model_->offset(k));
        auto hi = c_.begin() + static_cast<long>(model_->offset(k + 1));
        return Vec(lo, hi);
    }

    GradedElement part(unsigned k) const
    {
        GradedElement e(model_);
        for (std::size_t i = model_->offset(k); i < model_->offset(k + 1); ++i) {
            e.c_[i] = c_[i];
        }
        return e;
    }

    GradedElement parity_part(unsigned parity) const
    {
        GradedElement e(model_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (model_->degree_of(i) % 2 == parity) {
                e.c_[i] = c_[i];
            }
        }
        return e;
    }
    GradedElement even_part() const { return parity_part(0); }
    GradedElement odd_part() const { return parity_part(1); }

    bool is_zero() const { return is_zero_vec(c_); }
    bool has_parity(unsigned parity) const { return !parity_part(parity).is_zero(); }
    const Rational& scalar_part() const { return c_[0]; }

    GradedElement& operator+=(const GradedElement& o)
    {
        require_same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!o.c_[i].is_zero()) {
                c_[i] += o.c_[i];
            }
        }
        return *this;
    }
    GradedElement& operator-=(const GradedElement& o)
    {
        require_same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!o.c_[i].is_zero()) {
                c_[i] -= o.c_[i];
            }
        }
        return *this;
    }
    GradedElement& operator*=(const Rational& q)
    {
        for (auto& x : c_) {
            if (!x.is_zero()) {
                x *= q;
            }
        }
        return *this;
    }

    friend GradedElement operator+(GradedElement a, const GradedElement& b) { return a += b; }
    friend GradedElement operator-(GradedElement a, const GradedElement& b) { return a -= b; }
    friend GradedElement operator-(GradedElement a) { return a *= Rational(-1); }
    friend GradedElement operator*(GradedElement a, const Rational& q) { return a *= q; }
    friend GradedElement operator*(const Rational& q, GradedElement a) { return a *= q; }

    friend bool operator==(const GradedElement& a, const GradedElement& b)
    {
        return a.model_ == b.model_ && a.c_ == b.c_;
    }

    void require_same(const GradedElement& o) const
    {
        if (model_ != o.model_) {
            throw std::invalid_argument("forms live in different models ('" + model_name() + "' vs '" +
                                        o.model_name() + "')");
        }
    }

    std::string model_name() const { return model_ ? model_->name() : "<none>"; }

    friend std::ostream& operator<<(std::ostream& os, const GradedElement& a) { return os << a.to_string(); }

    std::string to_string() const
    {
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            const Rational& q = c_[i];
            if (q.is_zero()) {
                continue;
            }
            bool neg = q.sign() < 0;
            Rational mag = neg ? -q : q;
            out += out.empty() ? (neg ? "−" : "") : (neg ? " − " : " + ");
            const std::string& label = model_->basis_label(i);
            if (label == "1") {
                out += mag.to_string();
            } else {
                if (!mag.is_one()) {
                    out += mag.to_string() + "·";
                }
                out += label;
            }
        }
        return out.empty() ? "0" : out;
    }

    nlohmann::ordered_json to_json() const
    {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& q : c_) {
            arr.push_back(q.to_string());
        }
        return arr;
    }

private:
    ModelPtr model_;
    Vec c_;
};

inline GradedElement wedge(const GradedElement& a, const GradedElement& b)
{
    a.require_same(b);
    const CDGAModel& m = *a.model();
    const std::size_t n = m.dim();
    const unsigned top = m.top_degree();
    Vec out(n, Rational(0));
    const auto& ca = a.coords();
    const auto& cb = b.coords();
    std::vector<std::size_t> nzb;
    for (std::size_t j = 0; j < n; ++j) {
        if (!cb[j].is_zero()) {
            nzb.push_back(j);
        }
    }
    Rational tmp;
    for (std::size_t i = 0; i < n; ++i) {
        if (ca[i].is_zero()) {
            continue;
        }
        unsigned di = m.degree_of(i);
        for (std::size_t j : nzb) {
            if (di + m.degree_of(j) > top) {
                break; // basis is ordered by degree
            }
            const auto& entries = m.product(i, j);
            if (entries.empty()) {
                continue;
            }
            tmp = ca[i] * cb[j];
            for (const auto& [k, q] : entries) {
                out[k].add_product(tmp, q);
            }
        }
    }
    return GradedElement(a.model(), std::move(out));
}

inline GradedElement differential(const GradedElement& a)
{
    const CDGAModel& m = *a.model();
    Vec out(m.dim(), Rational(0));
    const auto& ca = a.coords();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        if (ca[i].is_zero()) {
            continue;
        }
        for (const auto& [k, q] : m.diff(i)) {
            out[k].add_product(ca[i], q);
        }
    }
    return GradedElement(a.model(), std::move(out));
}

inline bool is_closed(const GradedElement& a) { return differential(a).is_zero(); }

/// Component of degree j multiplied by k^{ceil(j/2)}: degree 2l and 2l-1 scale by k^l.
inline GradedElement scale_by_weight(const GradedElement& a, long k)
{
    const CDGAModel& m = *a.model();
    Vec c = a.coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_zero()) {
            c[i] *= pow(Rational(k), (m.degree_of(i) + 1) / 2);
        }
    }
    return GradedElement(a.model(), std::move(c));
}

/// exp(x) for x without a degree-0 part (finite by nilpotency).
inline GradedElement exp_form(const GradedElement& x)
{
    if (!x.scalar_part().is_zero()) {
        throw std::domain_error("exp_form needs a nilpotent form (no degree-0 part)");
    }
    GradedElement result = GradedElement::one(x.model());
    GradedElement power = result;
    for (unsigned n = 1; n <= x.model()->top_degree(); ++n) {
        power = wedge(power, x) * (Rational(1) / Rational(n));
        if (power.is_zero()) {
            break;
        }
        result += power;
    }
    return result;
}

/// Canonical representative of a + Im d: pivot coordinates of Im d are killed in each degree.
inline GradedElement project_mod_exact(const GradedElement& a)
{
    const CDGAModel& m = *a.model();
    Vec out = a.coords();
    for (unsigned k = 1; k <= m.top_degree(); ++k) {
        const RowReducer& im = m.exact_forms(k);
        if (im.rank() == 0) {
            continue;
        }
        Vec r = im.reduce(a.component(k));
        std::copy(r.begin(), r.end(), out.begin() + static_cast<long>(m.offset(k)));
    }
    return GradedElement(a.model(), std::move(out));
}

/// Canonical β with dβ = a; throws when a is not exact.
inline GradedElement canonical_preimage(const GradedElement& a)
{
    const CDGAModel& m = *a.model();
    GradedElement out(a.model());
    if (!a.component(0).empty() && !is_zero_vec(a.component(0))) {
        throw std::domain_error("degree-0 forms are never exact");
    }
    for (unsigned k = 1; k <= m.top_degree(); ++k) {
        Vec comp = a.component(k);
        if (is_zero_vec(comp)) {
            continue;
        }
        auto [residual, pre] = m.exact_forms(k).reduce_with_payload(std::move(comp));
        if (!is_zero_vec(residual)) {
            throw std::domain_error("form is not exact in degree " + std::to_string(k));
        }
        out += GradedElement::from_component(a.model(), k - 1, pre);
    }
    return out;
}

/// Element of Ω^odd / Im d held by its canonical representative.
class OddCoset {
public:
    OddCoset() = default;
    explicit OddCoset(const ModelPtr& model) : rep_(model) {}

    /// coset_normalize: throws when even components are present.
    static OddCoset normalize(const GradedElement& a)
    {
        if (a.has_parity(0)) {
            throw std::invalid_argument("coset_normalize needs an odd form; got even components in " + a.to_string());
        }
        OddCoset c;
        c.rep_ = project_mod_exact(a);
        return c;
    }

    const GradedElement& rep() const { return rep_; }
    const ModelPtr& model() const { return rep_.model(); }
    bool is_zero() const { return rep_.is_zero(); }

    friend OddCoset operator+(const OddCoset& a, const OddCoset& b) { return from_canonical(a.rep_ + b.rep_); }
    friend OddCoset operator-(const OddCoset& a, const OddCoset& b) { return from_canonical(a.rep_ - b.rep_); }
    friend OddCoset operator-(const OddCoset& a) { return from_canonical(-a.rep_); }
    friend OddCoset operator*(const Rational& q, const OddCoset& a) { return from_canonical(a.rep_ * q); }
    friend bool operator==(const OddCoset& a, const OddCoset& b) { return a.rep_ == b.rep_; }

    std::string to_string() const { return "[" + rep_.to_string() + "]"; }

private:
    // linear combinations of canonical representatives stay canonical
    static OddCoset from_canonical(GradedElement g)
    {
        OddCoset c;
        c.rep_ = std::move(g);
        return c;
    }

    GradedElement rep_;
};

inline OddCoset coset_normalize(const GradedElement& a) { return OddCoset::normalize(a); }

inline ModelPtr CDGAModel::build(ModelSpec spec)
{
    std::shared_ptr<CDGAModel> m(new CDGAModel());
    const unsigned D = spec.top_degree;
    const std::size_t ngen = spec.generators.size();
    for (std::size_t i = 0; i < ngen; ++i) {
        if (spec.generators[i].degree == 0) {
            throw std::invalid_argument("generator '" + spec.generators[i].name + "' has degree 0");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.generators[i].name == spec.generators[j].name) {
                throw std::invalid_argument("duplicate generator '" + spec.generators[i].name + "'");
            }
        }
    }
    m->spec_ = std::move(spec);
    const ModelSpec& s = m->spec_;

    // enumerate free graded-commutative monomials of degree <= D
    m->free_.assign(D + 1, {});
    Exponents cur(ngen, 0);
    std::function<void(std::size_t, unsigned)> enumerate = [&](std::size_t i, unsigned deg) {
        if (i == ngen) {
            m->free_[deg].push_back(cur);
            return;
        }
        unsigned gd = s.generators[i].degree;
        unsigned max_e = gd % 2 == 1 ? 1 : (D - deg) / gd;
        for (unsigned e = 0; e <= max_e && deg + e * gd <= D; ++e) {
            cur[i] = e;
            enumerate(i + 1, deg + e * gd);
        }
        cur[i] = 0;
    };
    enumerate(0, 0);
    for (auto& monos : m->free_) {
        // pivot priority: lex with the last generator most significant, larger first
        std::sort(monos.begin(), monos.end(), [](const Exponents& a, const Exponents& b) {
            return std::lexicographical_compare(b.rbegin(), b.rend(), a.rbegin(), a.rend());
        });
        for (std::size_t c = 0; c < monos.size(); ++c) {
            m->free_col_[monos[c]] = c;
        }
    }

    // generator differentials
    m->gen_d_.assign(ngen, {});
    for (const auto& [of, value] : s.differential) {
        std::size_t gi = m->generator_index(of);
        auto f = m->free_from_poly(value);
        for (const auto& [e, c] : f) {
            if (m->free_degree(e) != s.generators[gi].degree + 1) {
                throw std::invalid_argument("d(" + of + ") must be homogeneous of degree " +
                                            std::to_string(s.generators[gi].degree + 1));
            }
        }
        std::erase_if(f, [&](const auto& kv) { return m->free_degree(kv.first) > D; });
        m->gen_d_[gi] = std::move(f);
    }

    // relation ideal, degree by degree
    std::vector<std::pair<unsigned, detail::FreeElem>> rels;
    for (const auto& r : s.relations) {
        auto f = m->free_from_poly(r);
        if (f.empty()) {
            continue;
        }
        unsigned deg = m->free_degree(f.begin()->first);
        for (const auto& [e, c] : f) {
            if (m->free_degree(e) != deg) {
                throw std::invalid_argument("relation " + r.to_string() + " is not homogeneous");
            }
        }
        rels.emplace_back(deg, std::move(f));
    }
    m->ideal_.clear();
    for (unsigned k = 0; k <= D; ++k) {
        m->ideal_.emplace_back(m->free_[k].size());
    }
    for (const auto& [rd, rel] : rels) {
        for (unsigned k = rd; k <= D; ++k) {
            for (const auto& mono : m->free_[k - rd]) {
                auto prod = m->free_mul(detail::FreeElem{{mono, Rational(1)}}, rel);
                Vec v(m->free_[k].size(), Rational(0));
                for (const auto& [e, c] : prod) {
                    v[m->free_col_.at(e)] += c;
                }
                m->ideal_[k].insert(std::move(v));
            }
        }
    }

    // basis: normal monomials, lex-descending with the first generator most significant
    m->offset_.assign(D + 2, 0);
    m->normal_index_.assign(D + 1, {});
    for (unsigned k = 0; k <= D; ++k) {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < m->free_[k].size(); ++c) {
            if (!m->ideal_[k].is_pivot(c)) {
                cols.push_back(c);
            }
        }
        std::sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) {
            const auto& ea = m->free_[k][a];
            const auto& eb = m->free_[k][b];
            return std::lexicographical_compare(eb.begin(), eb.end(), ea.begin(), ea.end());
        });
        m->normal_index_[k].assign(m->free_[k].size(), static_cast<std::size_t>(-1));
        m->offset_[k] = m->degree_of_.size();
        for (auto c : cols) {
            m->normal_index_[k][c] = m->degree_of_.size();
            m->degree_of_.push_back(k);
            m->basis_mono_.push_back(m->free_[k][c]);
            m->labels_.push_back(m->monomial_label(m->free_[k][c]));
        }
    }
    m->offset_[D + 1] = m->degree_of_.size();

    auto to_sparse = [](const Vec& v) {
        detail::Sparse sp;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_zero()) {
                sp.emplace_back(static_cast<std::uint32_t>(i), v[i]);
            }
        }
        return sp;
    };

    const std::size_t n = m->dim();
    m->prod_.assign(n * n, {});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            auto p = m->free_mul(m->basis_mono_[i], m->basis_mono_[j]);
            if (p) {
                m->prod_[i * n + j] =
                    to_sparse(m->reduce_free(detail::FreeElem{{p->first, Rational(p->second)}}));
            }
        }
    }
    m->diff_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        m->diff_[i] = to_sparse(m->reduce_free(m->free_d(m->basis_mono_[i])));
    }

    // validation: d preserves the ideal
    for (unsigned k = 0; k < D; ++k) {
        for (auto p : m->ideal_[k].pivots()) {
            const Vec& row = m->ideal_[k].row(p).first;
            detail::FreeElem f;
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (!row[c].is_zero()) {
                    f[m->free_[k][c]] = row[c];
                }
            }
            if (!is_zero_vec(m->reduce_free(m->free_d(f)))) {
                throw std::invalid_argument("model '" + s.name + "': d does not preserve the relation ideal (degree " +
                                            std::to_string(k) + ")");
            }
        }
    }

    ModelPtr mp = m;
    auto sign_of = [](unsigned a, unsigned b) { return (a * b) % 2 == 0 ? Rational(1) : Rational(-1); };
    for (std::size_t i = 0; i < n; ++i) {
        auto bi = GradedElement::basis(mp, i);
        if (!differential(differential(bi)).is_zero()) {
            throw std::invalid_argument("model '" + s.name + "': d∘d ≠ 0 on basis element " + m->labels_[i]);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto bi = GradedElement::basis(mp, i);
        unsigned di = m->degree_of_[i];
        for (std::size_t j = 0; j < n; ++j) {
            auto bj = GradedElement::basis(mp, j);
            unsigned dj = m->degree_of_[j];
            auto pair_name = "(" + m->labels_[i] + ", " + m->labels_[j] + ")";
            if (!(wedge(bi, bj) == sign_of(di, dj) * wedge(bj, bi))) {
                throw std::invalid_argument("model '" + s.name + "': graded commutativity fails on basis pair " +
                                            pair_name);
            }
            auto lhs = differential(wedge(bi, bj));
            auto rhs = wedge(differential(bi), bj) + sign_of(di, 1) * wedge(bi, differential(bj));
            if (!(lhs == rhs)) {
                throw std::invalid_argument("model '" + s.name + "': Leibniz rule fails on basis pair " + pair_name);
            }
        }
    }

    // Im d per degree with canonical preimages, and closed forms
    m->exact_.clear();
    m->cocycles_.clear();
    for (unsigned k = 0; k <= D; ++k) {
        RowReducer im(m->dim(k), k == 0 ? 0 : m->dim(k - 1));
        if (k > 0) {
            for (std::size_t b = 0; b < m->dim(k - 1); ++b) {
                auto db = differential(GradedElement::basis(mp, m->offset(k - 1) + b)).component(k);
                Vec e(m->dim(k - 1), Rational(0));
                e[b] = Rational(1);
                im.insert(std::move(db), std::move(e));
            }
        }
        m->exact_.push_back(std::move(im));

        Matrix dk(m->dim(k + 1), m->dim(k));
        for (std::size_t b = 0; b < m->dim(k); ++b) {
            for (const auto& [t, q] : m->diff_[m->offset(k) + b]) {
                dk(t - m->offset(k + 1), b) = q;
            }
        }
        if (k == D) {
            std::vector<Vec> all;
            for (std::size_t b = 0; b < m->dim(k); ++b) {
                Vec e(m->dim(k), Rational(0));
                e[b] = Rational(1);
                all.push_back(std::move(e));
            }
            m->cocycles_.push_back(std::move(all));
        } else {
            m->cocycles_.push_back(dk.null_space());
        }
    }
    return mp;
}

inline ModelPtr build_model(ModelSpec spec) { return CDGAModel::build(std::move(spec)); }

// ---------------------------------------------------------------------------
// Built-in presentations

inline ModelSpec torus_spec(unsigned n)
{
    ModelSpec s;
    s.name = "torus" + std::to_string(n);
    s.top_degree = n;
    for (unsigned i = 1; i <= n; ++i) {
        s.generators.push_back({"dx" + std::to_string(i), 1});
    }
    return s;
}

inline ModelSpec s2_spec()
{
    ModelSpec s;
    s.name = "s2";
    s.top_degree = 4;
    s.generators = {{"x", 2}, {"y", 3}};
    s.differential = {{"y", MultiPoly::parse("x^2")}};
    return s;
}

inline ModelSpec cp_spec(unsigned n)
{
    ModelSpec s;
    s.name = "cp" + std::to_string(n);
    s.top_degree = 2 * n;
    s.generators = {{"x", 2}};
    s.relations = {MultiPoly::variable("x", n + 1)};
    return s;
}

inline ModelSpec point_spec()
{
    ModelSpec s;
    s.name = "point";
    s.top_degree = 0;
    return s;
}

/// Nilmanifold model: three degree-1 generators with de3 = e1 e2.
inline ModelSpec heisenberg_spec()
{
    ModelSpec s;
    s.name = "heisenberg";
    s.top_degree = 3;
    s.generators = {{"e1", 1}, {"e2", 1}, {"e3", 1}};
    s.differential = {{"e3", MultiPoly::parse("e1*e2")}};
    return s;
}

/**
 * Projective bundle of a rank-r bundle with Chern classes c_1..c_r (given
 * as polynomials in the base generators): adjoin h of degree 2 with
 * h^r + sum_{j<r} h^j c_{r-j} = 0. Base monomials above the base top degree
 * are added as relations so the base stays truncated.
 */
inline ModelSpec projective_bundle_spec(const ModelSpec& base, unsigned r, const std::vector<MultiPoly>& c,
                                        const std::string& hname = "h")
{
    if (r == 0) {
        throw std::invalid_argument("projective bundle needs rank r >= 1");
    }
    if (c.size() != r) {
        throw std::invalid_argument("projective bundle of rank " + std::to_string(r) + " needs " +
                                    std::to_string(r) + " Chern classes, got " + std::to_string(c.size()));
    }
    ModelSpec s = base;
    s.name = "P(" + base.name + "," + std::to_string(r) + ")";
    s.top_degree = base.top_degree + 2 * (r - 1);
    for (const auto& g : base.generators) {
        if (g.name == hname) {
            throw std::invalid_argument("generator name '" + hname + "' already used by the base");
        }
    }
    s.generators.push_back({hname, 2});
    MultiPoly rel = MultiPoly::variable(hname, r);
    for (unsigned j = 0; j < r; ++j) {
        rel += MultiPoly::variable(hname, j) * c[r - j - 1];
    }
    s.relations.push_back(rel);
    // base truncation: minimal base monomials of degree in (D_base, D]
    std::vector<unsigned> degs;
    for (const auto& g : base.generators) {
        degs.push_back(g.degree);
    }
    Exponents cur(degs.size(), 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned deg) {
        if (i == degs.size()) {
            if (deg <= base.top_degree || deg > s.top_degree) {
                return;
            }
            for (std::size_t g = 0; g < degs.size(); ++g) {
                if (cur[g] > 0 && deg - degs[g] > base.top_degree) {
                    return; // not minimal
                }
            }
            std::vector<std::string> vars;
            for (const auto& g : base.generators) {
                vars.push_back(g.name);
            }
            s.relations.emplace_back(vars, std::vector<MultiPoly::Term>{{cur, Rational(1)}});
            return;
        }
        unsigned max_e = degs[i] % 2 == 1 ? 1 : (s.top_degree - deg) / degs[i];
        for (unsigned e = 0; e <= max_e && deg + e * degs[i] <= s.top_degree; ++e) {
            cur[i] = e;
            rec(i + 1, deg + e * degs[i]);
        }
        cur[i] = 0;
    };
    rec(0, 0);
    return s;
}

inline std::vector<std::string> builtin_model_names()
{
    return {"point", "torus1", "torus2", "torus3", "torus4", "torus5", "torus6",
            "s2",    "cp1",    "cp2",    "cp3",    "heisenberg"};
}

/// Spec for a built-in name: point, torus<n>, s2, cp<n>, heisenberg (also "torus(n)", "cp(n)").
inline ModelSpec builtin_spec(const std::string& name)
{
    static const std::regex numbered(R"(^(torus|cp)\(?([0-9]+)\)?$)");
    std::smatch mt;
    if (name == "point") {
        return point_spec();
    }
    if (name == "s2") {
        return s2_spec();
    }
    if (name == "heisenberg") {
        return heisenberg_spec();
    }
    if (std::regex_match(name, mt, numbered)) {
        unsigned long n = std::stoul(mt[2].str());
        if (n < 1 || n > 10) {
            throw std::invalid_argument("model '" + name + "': index out of range 1..10");
        }
        return mt[1].str() == "torus" ? torus_spec(static_cast<unsigned>(n)) : cp_spec(static_cast<unsigned>(n));
    }
    throw std::invalid_argument("unknown model '" + name + "'");
}

/// Built-in model by name; the same pointer is returned for repeated requests.
inline ModelPtr builtin_model(const std::string& name)
{
    static std::mutex mu;
    static std::map<std::string, ModelPtr> memo;
    ModelSpec spec = builtin_spec(name);
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(spec.name);
    if (it != memo.end()) {
        return it->second;
    }
    auto m = build_model(spec);
    memo.emplace(spec.name, m);
    return m;
}

// ---------------------------------------------------------------------------
// Morphisms

/**
 * Algebra map between models given on generators: each source generator is
 * sent to a polynomial in the target generators (missing ones go to 0).
 * Construction checks degrees, relations, truncation and d∘f = f∘d.
 */
class CdgaMorphism {
public:
    CdgaMorphism(ModelPtr source, ModelPtr target, const std::map<std::string, MultiPoly>& images,
                 std::string name = "f")
        : source_(std::move(source)), target_(std::move(target)), name_(std::move(name))
    {
        const auto& gens = source_->spec().generators;
        for (const auto& [g, img] : images) {
            source_->generator_index(g); // throws on unknown
        }
        for (const auto& g : gens) {
            auto it = images.find(g.name);
            GradedElement img(target_);
            if (it != images.end()) {
                img = GradedElement::from_poly(target_, it->second);
                for (std::size_t i = 0; i < img.coords().size(); ++i) {
                    if (!img.coords()[i].is_zero() && target_->degree_of(i) != g.degree) {
                        throw std::invalid_argument("morphism " + name_ + ": image of '" + g.name +
                                                    "' is not of degree " + std::to_string(g.degree));
                    }
                }
            }
            gen_images_.push_back(std::move(img));
        }
        for (const auto& r : source_->spec().relations) {
            if (!eval_free(source_->free_from_poly(r)).is_zero()) {
                throw std::invalid_argument("morphism " + name_ + " does not respect relation " + r.to_string());
            }
        }
        check_truncation();
        for (std::size_t i = 0; i < gens.size(); ++i) {
            Exponents e(gens.size(), 0);
            e[i] = 1;
            auto lhs = eval_free(source_->free_d(e));
            auto rhs = differential(gen_images_[i]);
            if (!(lhs == rhs)) {
                throw std::invalid_argument("morphism " + name_ + " does not commute with d on generator '" +
                                            gens[i].name + "'");
            }
        }
        for (std::size_t b = 0; b < source_->dim(); ++b) {
            basis_images_.push_back(eval_free(detail::FreeElem{{source_->basis_monomial(b), Rational(1)}}));
        }
    }

    static CdgaMorphism identity(const ModelPtr& m)
    {
        std::map<std::string, MultiPoly> images;
        for (const auto& g : m->spec().generators) {
            images.emplace(g.name, MultiPoly::variable(g.name));
        }
        return CdgaMorphism(m, m, images, "id");
    }

    const ModelPtr& source() const { return source_; }
    const ModelPtr& target() const { return target_; }
    const std::string& name() const { return name_; }

    GradedElement apply(const GradedElement& a) const
    {
        if (a.model() != source_) {
            throw std::invalid_argument("morphism " + name_ + " applied to a form of model '" + a.model_name() + "'");
        }
        GradedElement out(target_);
        for (std::size_t b = 0; b < a.coords().size(); ++b) {
            if (!a.coords()[b].is_zero()) {
                out += basis_images_[b] * a.coords()[b];
            }
        }
        return out;
    }

private:
    GradedElement eval_free(const detail::FreeElem& f) const
    {
        GradedElement out(target_);
        for (const auto& [e, c] : f) {
            GradedElement term = GradedElement::scalar(target_, c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                for (unsigned k = 0; k < e[i]; ++k) {
                    term = wedge(term, gen_images_[i]);
                }
            }
            out += term;
        }
        return out;
    }

    // monomials that vanish by truncation in the source must vanish in the target
    void check_truncation() const
    {
        const auto& gens = source_->spec().generators;
        const unsigned ds = source_->top_degree();
        const unsigned dt = target_->top_degree();
        if (dt <= ds) {
            return;
        }
        Exponents cur(gens.size(), 0);
        std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned deg) {
            if (i == gens.size()) {
                if (deg <= ds) {
                    return;
                }
                for (std::size_t g = 0; g < gens.size(); ++g) {
                    if (cur[g] > 0 && deg - gens[g].degree > ds) {
                        return;
                    }
                }
                if (!eval_free(detail::FreeElem{{cur, Rational(1)}}).is_zero()) {
                    throw std::invalid_argument("morphism " + name_ + " does not respect the top degree of '" +
                                                source_->name() + "'");
                }
                return;
            }
            unsigned max_e = gens[i].degree % 2 == 1 ? 1 : (dt - deg) / gens[i].degree;
            for (unsigned e = 0; e <= max_e && deg + e * gens[i].degree <= dt; ++e) {
                cur[i] = e;
                rec(i + 1, deg + e * gens[i].degree);
            }
            cur[i] = 0;
        };
        rec(0, 0);
    }

    ModelPtr source_;
    ModelPtr target_;
    std::string name_;
    std::vector<GradedElement> gen_images_;
    std::vector<GradedElement> basis_images_;
};

inline GradedElement pullback(const CdgaMorphism& f, const GradedElement& a) { return f.apply(a); }

// ---------------------------------------------------------------------------
// Seeded samples

/// Random element of degree k with small integer coordinates; roughly `density` of them nonzero.
inline GradedElement random_form(const ModelPtr& m, unsigned k, Rng& rng, long bound = 2)
{
    if (k > m->top_degree()) {
        return GradedElement(m);
    }
    Vec v(m->dim(k), Rational(0));
    for (auto& x : v) {
        x = Rational(rng.uniform(-bound, bound));
    }
    return GradedElement::from_component(m, k, v);
}

/// Random closed form of degree k (combination of a cocycle basis).
inline GradedElement random_closed(const ModelPtr& m, unsigned k, Rng& rng, long bound = 2)
{
    if (k > m->top_degree()) {
        return GradedElement(m);
    }
    Vec v(m->dim(k), Rational(0));
    for (const auto& z : m->cocycle_basis(k)) {
        axpy(v, Rational(rng.uniform(-bound, bound)), z);
    }
    return GradedElement::from_component(m, k, v);
}

inline GradedElement random_closed_even(const ModelPtr& m, Rng& rng, long bound = 2)
{
    GradedElement out(m);
    for (unsigned k = 0; k <= m->top_degree(); k += 2) {
        out += random_closed(m, k, rng, bound);
    }
    return out;
}

inline GradedElement random_odd(const ModelPtr& m, Rng& rng, long bound = 2)
{
    GradedElement out(m);
    for (unsigned k = 1; k <= m->top_degree(); k += 2) {
        out += random_form(m, k, rng, bound);
    }
    return out;
}

inline GradedElement random_element(const ModelPtr& m, Rng& rng, long bound = 2)
{
    GradedElement out(m);
    for (unsigned k = 0; k <= m->top_degree(); ++k) {
        out += random_form(m, k, rng, bound);
    }
    return out;
}

} // namespace lambda_forge
