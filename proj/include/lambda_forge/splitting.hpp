#pragma once

/**
 * @file splitting.hpp
 * @brief Exponential basis change on a projective bundle P(E) -> B over a
 *        formal base: the matrix A with e^{jh} = sum_k A_kj h^k/k!, its
 *        decomposition A = V + B (V Vandermonde, B nilpotent), the inverse
 *        over the local ring H^even(B), and the freeness check.
 */

#include <string>
#include <utility>
#include <vector>

#include "cdga.hpp"

namespace lambda_forge {

/// Square matrix with entries in the (commutative) even part of a model.
using FormMatrix = std::vector<std::vector<GradedElement>>;

inline FormMatrix form_matrix_zero(const ModelPtr& m, std::size_t n)
{
    return FormMatrix(n, std::vector<GradedElement>(n, GradedElement(m)));
}

inline FormMatrix form_matrix_identity(const ModelPtr& m, std::size_t n)
{
    auto out = form_matrix_zero(m, n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i][i] = GradedElement::one(m);
    }
    return out;
}

inline FormMatrix form_matrix_mul(const FormMatrix& a, const FormMatrix& b)
{
    if (a.empty() || a[0].size() != b.size()) {
        throw std::invalid_argument("form matrix product: shape mismatch");
    }
    const ModelPtr& m = a[0][0].model();
    FormMatrix out(a.size(), std::vector<GradedElement>(b[0].size(), GradedElement(m)));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < b[0].size(); ++j) {
                out[i][j] += wedge(a[i][k], b[k][j]);
            }
        }
    }
    return out;
}

inline FormMatrix form_matrix_sub(const FormMatrix& a, const FormMatrix& b)
{
    FormMatrix out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            out[i][j] -= b[i][j];
        }
    }
    return out;
}

inline std::string form_matrix_string(const FormMatrix& a)
{
    std::string out = "[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += i ? "; " : "";
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            out += (j ? ", " : "") + a[i][j].to_string();
        }
    }
    return out + "]";
}

/// Inverse of an even form with nonzero scalar part: s^{-1} sum_i (-n)^i where u = s(1 + n).
inline GradedElement local_inverse(const GradedElement& u)
{
    if (u.has_parity(1)) {
        throw std::invalid_argument("local inverse: form has odd components");
    }
    const Rational s = u.scalar_part();
    if (s.is_zero()) {
        throw std::domain_error("local inverse: form is not a unit (scalar part is zero)");
    }
    const Rational sinv = Rational(1) / s;
    GradedElement n = u * sinv - GradedElement::one(u.model());
    GradedElement term = GradedElement::one(u.model());
    GradedElement sum = term;
    for (unsigned i = 1; i <= u.model()->top_degree(); ++i) {
        term = -wedge(term, n);
        if (term.is_zero()) {
            break;
        }
        sum += term;
    }
    return sum * sinv;
}

/// Gauss–Jordan over the local ring: pivots are entries with a nonzero scalar part.
inline FormMatrix form_matrix_inverse(const FormMatrix& a)
{
    const std::size_t n = a.size();
    if (n == 0) {
        return {};
    }
    const ModelPtr& m = a[0][0].model();
    FormMatrix work = a;
    FormMatrix inv = form_matrix_identity(m, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && work[piv][col].scalar_part().is_zero()) {
            ++piv;
        }
        if (piv == n) {
            throw std::domain_error("matrix is not invertible over the local ring (column " +
                                    std::to_string(col) + ")");
        }
        std::swap(work[piv], work[col]);
        std::swap(inv[piv], inv[col]);
        GradedElement u = local_inverse(work[col][col]);
        for (std::size_t j = 0; j < n; ++j) {
            work[col][j] = wedge(u, work[col][j]);
            inv[col][j] = wedge(u, inv[col][j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || work[i][col].is_zero()) {
                continue;
            }
            GradedElement f = work[i][col];
            for (std::size_t j = 0; j < n; ++j) {
                work[i][j] -= wedge(f, work[col][j]);
                inv[i][j] -= wedge(f, inv[col][j]);
            }
        }
    }
    return inv;
}

/// Form of a model as a polynomial in its generators (for building relations).
inline MultiPoly form_to_poly(const GradedElement& a)
{
    const CDGAModel& m = *a.model();
    std::vector<std::string> vars;
    for (const auto& g : m.spec().generators) {
        vars.push_back(g.name);
    }
    std::vector<MultiPoly::Term> terms;
    for (std::size_t i = 0; i < a.coords().size(); ++i) {
        if (!a.coords()[i].is_zero()) {
            terms.push_back({m.basis_monomial(i), a.coords()[i]});
        }
    }
    return MultiPoly(vars, terms);
}

/// Random Chern classes c_1..c_r of a formal base: c_i is a closed form of degree 2i.
inline std::vector<MultiPoly> random_chern_classes(const ModelPtr& base, unsigned r, Rng& rng, long bound = 2)
{
    std::vector<MultiPoly> c;
    for (unsigned i = 1; i <= r; ++i) {
        c.push_back(form_to_poly(random_closed(base, 2 * i, rng, bound)));
    }
    return c;
}

struct SplittingResult {
    ModelPtr base;
    ModelPtr bundle;
    unsigned rank = 0;
    FormMatrix A, V, B, A_inv;
    bool B_nilpotent = false;
    bool inverse_exact = false;    // A·A⁻¹ = A⁻¹·A = I over the base
    bool e_equals_fA = false;      // e^{jh} = sum_k (h^k/k!) A_kj in the bundle
    bool f_equals_eAinv = false;   // h^k/k! = sum_j e^{jh} (A⁻¹)_jk in the bundle
    std::size_t module_rank = 0;   // rank of base^r -> bundle, (b_k) -> sum b_k h^k/k!
    std::size_t expected_rank = 0; // r·dim(base) = dim(bundle) when the bundle is free
    bool free = false;

    bool passed() const { return B_nilpotent && inverse_exact && e_equals_fA && f_equals_eAinv && free; }
};

/**
 * Build P(E) for Chern classes c over a formal base and decompose the
 * exponential basis e_j = e^{jh} (j < r) against f_k = h^k/k! (k < r).
 */
inline SplittingResult exp_basis_matrix(const ModelSpec& base_spec, unsigned r, const std::vector<MultiPoly>& c)
{
    SplittingResult res;
    res.base = build_model(base_spec);
    if (!res.base->is_formal()) {
        throw std::invalid_argument("splitting needs a formal base (d = 0), '" + base_spec.name + "' is not");
    }
    res.bundle = build_model(projective_bundle_spec(base_spec, r, c));
    res.rank = r;
    const ModelPtr& base = res.base;
    const ModelPtr& bun = res.bundle;

    std::map<std::string, MultiPoly> images;
    for (const auto& g : base_spec.generators) {
        images.emplace(g.name, MultiPoly::variable(g.name));
    }
    CdgaMorphism incl(base, bun, images, "π*");

    const GradedElement h = GradedElement::from_poly(bun, MultiPoly::variable("h"));
    std::vector<GradedElement> f; // h^k/k!
    std::vector<GradedElement> e; // e^{jh}
    {
        GradedElement p = GradedElement::one(bun);
        for (unsigned k = 0; k < r; ++k) {
            f.push_back(p * (Rational(1) / factorial(k)));
            p = wedge(p, h);
        }
        for (unsigned j = 0; j < r; ++j) {
            e.push_back(exp_form(h * Rational(static_cast<long>(j))));
        }
    }

    // base^r -> bundle
    const std::size_t bd = base->dim();
    RowReducer span(bun->dim(), r * bd);
    for (unsigned k = 0; k < r; ++k) {
        for (std::size_t i = 0; i < bd; ++i) {
            Vec payload(r * bd, Rational(0));
            payload[k * bd + i] = Rational(1);
            span.insert(wedge(incl.apply(GradedElement::basis(base, i)), f[k]).coords(), payload);
        }
    }
    res.module_rank = span.rank();
    res.expected_rank = r * bd;
    res.free = res.module_rank == res.expected_rank && res.module_rank == bun->dim();

    res.A = form_matrix_zero(base, r);
    for (unsigned j = 0; j < r; ++j) {
        auto [residual, coeff] = span.reduce_with_payload(e[j].coords());
        if (!is_zero_vec(residual)) {
            throw std::logic_error("e^{jh} is not in the span of the h^k/k! over the base");
        }
        for (unsigned k = 0; k < r; ++k) {
            Vec v(coeff.begin() + static_cast<long>(k * bd), coeff.begin() + static_cast<long>((k + 1) * bd));
            res.A[k][j] = GradedElement(base, std::move(v));
        }
    }

    res.V = form_matrix_zero(base, r);
    for (unsigned k = 0; k < r; ++k) {
        for (unsigned j = 0; j < r; ++j) {
            res.V[k][j] = GradedElement::scalar(base, pow(Rational(static_cast<long>(j)), k)); // 0^0 = 1
        }
    }
    res.B = form_matrix_sub(res.A, res.V);
    res.B_nilpotent = true;
    for (const auto& row : res.B) {
        for (const auto& x : row) {
            res.B_nilpotent = res.B_nilpotent && x.scalar_part().is_zero();
        }
    }

    res.A_inv = form_matrix_inverse(res.A);
    const auto id = form_matrix_identity(base, r);
    res.inverse_exact = form_matrix_mul(res.A, res.A_inv) == id && form_matrix_mul(res.A_inv, res.A) == id;

    res.e_equals_fA = true;
    res.f_equals_eAinv = true;
    for (unsigned j = 0; j < r; ++j) {
        GradedElement sum(bun);
        for (unsigned k = 0; k < r; ++k) {
            sum += wedge(f[k], incl.apply(res.A[k][j]));
        }
        res.e_equals_fA = res.e_equals_fA && sum == e[j];
    }
    for (unsigned k = 0; k < r; ++k) {
        GradedElement sum(bun);
        for (unsigned j = 0; j < r; ++j) {
            sum += wedge(e[j], incl.apply(res.A_inv[j][k]));
        }
        res.f_equals_eAinv = res.f_equals_eAinv && sum == f[k];
    }
    return res;
}

} // namespace lambda_forge
