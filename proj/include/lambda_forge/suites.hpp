#pragma once

/**
 * @file suites.hpp
 * @brief Seeded verification suites shared by the command-line tool and the
 *        tests. Every suite returns one report in the format of
 *        verify_axioms; instances are prefixed by the context they ran on.
 */

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "diffk.hpp"
#include "equivariant.hpp"
#include "gamma.hpp"
#include "lambda.hpp"
#include "splitting.hpp"
#include "symfun.hpp"

namespace lambda_forge {

struct SuiteOptions {
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    std::size_t truncation = 6;
    std::size_t mul_order = 3;  // λ_t(xy) is compared up to this order on class rings
    std::size_t comp_limit = 0; // 0 means the truncation
    unsigned max_rank = 5;      // splitting suite: bundle ranks 1..max_rank
};

inline std::vector<std::string> default_diffk_models() { return {"torus4", "torus6", "s2", "cp3", "heisenberg"}; }
inline std::vector<std::string> default_gamma_models() { return {"torus4", "torus6", "s2", "cp3"}; }
inline std::vector<std::string> default_equivariant_models() { return {"torus2", "s2"}; }
inline std::vector<std::string> default_splitting_bases() { return {"point", "cp1", "cp2", "cp3", "torus2"}; }

/// Nontrivial CDGA morphisms between built-in models used for naturality checks.
inline std::vector<CdgaMorphism> builtin_morphisms()
{
    auto p = [](const char* s) { return MultiPoly::parse(s); };
    std::vector<CdgaMorphism> out;
    out.emplace_back(builtin_model("torus4"), builtin_model("torus2"),
                     std::map<std::string, MultiPoly>{{"dx1", p("dx1")},
                                                      {"dx2", p("dx2")},
                                                      {"dx3", p("dx1 + dx2")},
                                                      {"dx4", p("dx1 - 2*dx2")}},
                     "torus4→torus2");
    out.emplace_back(builtin_model("cp3"), builtin_model("cp1"), std::map<std::string, MultiPoly>{{"x", p("x")}},
                     "cp3→cp1");
    out.emplace_back(builtin_model("torus2"), builtin_model("heisenberg"),
                     std::map<std::string, MultiPoly>{{"dx1", p("e1")}, {"dx2", p("e1 + e2")}}, "torus2→heisenberg");
    out.emplace_back(builtin_model("cp1"), builtin_model("torus2"), std::map<std::string, MultiPoly>{{"x", p("dx1*dx2")}},
                     "cp1→torus2");
    out.emplace_back(builtin_model("s2"), builtin_model("cp1"),
                     std::map<std::string, MultiPoly>{{"x", p("2*x")}, {"y", MultiPoly()}}, "s2→cp1");
    return out;
}

namespace detail {

/// Independent stream per (suite part, sample).
inline Rng suite_rng(std::uint64_t seed, std::uint64_t salt, std::size_t i)
{
    return Rng::for_sample(seed ^ (salt * 0x9e3779b97f4a7c15ULL), i);
}

class ReportBuilder {
public:
    ReportBuilder(std::string mode, std::string context, const SuiteOptions& opt)
    {
        rep_.mode = std::move(mode);
        rep_.context = std::move(context);
        rep_.seed = opt.seed;
        rep_.truncation = opt.truncation;
    }

    void check(const std::string& axiom, const std::string& instance, bool pass,
               const std::function<std::string()>& witness)
    {
        rep_.checks.push_back({axiom, instance, pass, pass ? std::string() : witness()});
    }

    template <class T>
    void equal(const std::string& axiom, const std::string& instance, const T& lhs, const T& rhs,
               const std::function<std::string(const T&)>& show)
    {
        bool ok = lhs == rhs;
        check(axiom, instance, ok, [&] { return show(lhs) + " ≠ " + show(rhs); });
    }

    void absorb(const AxiomReport& sub)
    {
        for (auto c : sub.checks) {
            c.instance = sub.context + " [" + sub.mode + "]: " + c.instance;
            rep_.checks.push_back(std::move(c));
        }
    }

    AxiomReport take() { return std::move(rep_); }

private:
    AxiomReport rep_;
};

inline std::string join_names(const std::vector<ModelPtr>& models)
{
    std::string s;
    for (const auto& m : models) {
        s += (s.empty() ? "" : ", ") + m->name();
    }
    return s;
}

inline VerifyOptions verify_options(const SuiteOptions& opt, bool full_products)
{
    VerifyOptions v;
    v.samples = opt.samples;
    v.seed = opt.seed;
    v.truncation = opt.truncation;
    v.mul_order = full_products ? 0 : opt.mul_order;
    v.comp_limit = opt.comp_limit;
    return v;
}

inline std::string show_class(const DiffKClass& a) { return a.to_string(); }
inline std::string show_equiv(const EquivClass& a) { return a.to_string(); }
inline std::string show_form(const GradedElement& a) { return a.to_string(); }

/// Subset sums of roots and of the perturbation forms, for the k-th exterior power.
template <LabelPolicy P>
Perturbation lambda_perturbation(const ModelPtr& m, std::size_t k, const BasicCycle<P>& c, const Perturbation& pert)
{
    Perturbation out;
    const std::size_t r = c.roots.size();
    if (k == 0 || k > r) {
        if (k == 0) {
            out.beta.push_back(GradedElement(m));
        }
        return out;
    }
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    // same subset order as cycle_lambda_raw
    while (true) {
        GradedElement b(m);
        for (auto i : idx) {
            b += pert.beta[i];
        }
        out.beta.push_back(std::move(b));
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
    return out;
}

template <class L>
GradedElement form_at(const std::map<L, GradedElement>& forms, const L& l, const ModelPtr& m)
{
    auto it = forms.find(l);
    return it == forms.end() ? GradedElement(m) : it->second;
}

/**
 * Perturbation checks shared by the plain and equivariant rings:
 *  - d(CS) equals the change of Chern character, per label (arbitrary β);
 *  - canonical gauge: (E, φ) and (E + dβ, φ + CS) have equal normal forms, as do their λ^k (k <= 3),
 *    which also agree with λ^k of the class;
 *  - arbitrary β: the odd parts of λ^k differ by the transgression of Λ^k.
 */
template <LabelPolicy P>
void perturbation_checks(ReportBuilder& rb, const std::string& ctx, const ModelPtr& m, const P& pol,
                         const BasicCycle<P>& e, Rng& rng, const std::string& tag, bool canonical_block,
                         bool contract_block)
{
    using L = typename P::label_type;
    const std::size_t r = e.roots.size();
    auto labels_of = [&](const std::map<L, GradedElement>& a, const std::map<L, GradedElement>& b) {
        std::vector<L> out;
        for (const auto& [l, x] : a) {
            out.push_back(l);
        }
        for (const auto& [l, x] : b) {
            if (!a.count(l)) {
                out.push_back(l);
            }
        }
        return out;
    };

    if (contract_block) {
        Perturbation beta = random_perturbation(m, r, rng);
        auto moved = perturb_roots(e, beta);
        auto cs = chern_simons_forms(e, beta);
        auto ch0 = cycle_ch(m, e);
        auto ch1 = cycle_ch(m, moved);
        bool ok = true;
        std::string wit;
        for (const auto& l : labels_of(ch0, ch1)) {
            auto lhs = differential(form_at(cs, l, m));
            auto rhs = form_at(ch1, l, m) - form_at(ch0, l, m);
            if (!(lhs == rhs)) {
                ok = false;
                wit = pol.label_string(l) + " d(CS) = " + lhs.to_string() + " but ch(E1) − ch(E0) = " + rhs.to_string();
                break;
            }
        }
        for (const auto& [l, f] : cs) {
            ok = ok && (ch0.count(l) || ch1.count(l) || differential(f).is_zero());
        }
        rb.check("d(CS(E0, E1)) = ch(E1) − ch(E0)", ctx + ", " + tag, ok, [&] { return wit; });

        // odd discrepancy of λ^k for the same arbitrary perturbation
        BasicCycle<P> e1 = moved;
        for (const auto& [l, f] : cs) {
            detail::add_form(e1.phi, l, f);
        }
        for (std::size_t k = 1; k <= 3; ++k) {
            auto l0 = cycle_lambda_raw(m, pol, k, e);
            auto l1 = cycle_lambda_raw(m, pol, k, e1);
            auto lb = lambda_perturbation(m, k, e, beta);
            auto cs_k = chern_simons_forms(l0, lb);
            bool ok_k = true;
            std::string w;
            std::vector<L> labels;
            for (const auto& [l, f] : l0.phi) {
                labels.push_back(l);
            }
            for (const auto& [l, f] : l1.phi) {
                labels.push_back(l);
            }
            for (const auto& [l, f] : cs_k) {
                labels.push_back(l);
            }
            for (const auto& l : labels) {
                auto diff = form_at(l1.phi, l, m) - form_at(l0.phi, l, m) - form_at(cs_k, l, m);
                if (!OddCoset::normalize(diff).is_zero()) {
                    ok_k = false;
                    w = pol.label_string(l) + " residual " + OddCoset::normalize(diff).to_string();
                    break;
                }
            }
            rb.check("[λ^k(E1, φ + CS)]_odd − [λ^k(E0, φ)]_odd = CS(Λ^k E0, Λ^k E1)",
                     ctx + ", " + tag + ", k=" + std::to_string(k), ok_k, [&] { return w; });
        }
    }

    if (canonical_block) {
        Perturbation beta = random_canonical_perturbation(m, r, rng);
        BasicCycle<P> e1 = perturb_roots(e, beta);
        for (const auto& [l, f] : chern_simons_forms(e, beta)) {
            detail::add_form(e1.phi, l, f);
        }
        auto a0 = normal_form(m, pol, e, BasicCycle<P>{});
        auto a1 = normal_form(m, pol, e1, BasicCycle<P>{});
        rb.check("normal form is invariant under (E, φ) ~ (E', φ + CS(E, E'))", ctx + ", " + tag, a0 == a1,
                 [&] { return a0.to_string() + " ≠ " + a1.to_string(); });
        for (std::size_t k = 1; k <= 3; ++k) {
            auto n0 = normal_form(m, pol, cycle_lambda_raw(m, pol, k, e), BasicCycle<P>{});
            auto n1 = normal_form(m, pol, cycle_lambda_raw(m, pol, k, e1), BasicCycle<P>{});
            auto via_class = class_lambda(k, a0);
            const std::string inst = ctx + ", " + tag + ", k=" + std::to_string(k);
            rb.check("λ^k is well defined on equivalent cycles", inst, n0 == n1,
                     [&] { return n0.to_string() + " ≠ " + n1.to_string(); });
            rb.check("λ^k of a cycle agrees with λ^k of its class", inst, n0 == via_class,
                     [&] { return n0.to_string() + " ≠ " + via_class.to_string(); });
        }
    }
}

} // namespace detail

/// verify_axioms on the differential K-ring of each model.
inline AxiomReport run_diffk_axioms(VerifyMode mode, const std::vector<ModelPtr>& models, const SuiteOptions& opt)
{
    detail::ReportBuilder rb(mode_name(mode), detail::join_names(models), opt);
    for (const auto& m : models) {
        rb.absorb(verify_axioms(DiffKContext{m}, mode, detail::verify_options(opt, false)));
    }
    return rb.take();
}

/// Γ(B): λ-ring axioms, Adams criterion, Z^even, and p : Γ -> Z^even as a λ-homomorphism.
inline AxiomReport run_gamma_suite(const std::vector<ModelPtr>& models, const SuiteOptions& opt)
{
    detail::ReportBuilder rb("gamma", detail::join_names(models), opt);
    const std::size_t N = opt.truncation;
    for (const auto& m : models) {
        rb.absorb(verify_axioms(GammaContext{m}, VerifyMode::Lambda, detail::verify_options(opt, true)));
        rb.absorb(verify_axioms(GammaContext{m}, VerifyMode::AdamsCriterion, detail::verify_options(opt, true)));
        rb.absorb(verify_axioms(ZEvenContext{m}, VerifyMode::Lambda, detail::verify_options(opt, true)));
        const std::string ctx = "Gamma(" + m->name() + ")";
        for (std::size_t i = 0; i < opt.samples; ++i) {
            Rng rng = detail::suite_rng(opt.seed, 11, i);
            auto x = random_gamma(m, rng);
            auto y = random_gamma(m, rng);
            const std::string tag = "sample " + std::to_string(i);
            auto series = gamma_lambda_series(x, N);
            auto pz = even_restriction_p(x);
            auto zser = gamma_lambda_series(GammaElement::from_even(pz), N);
            for (std::size_t n = 1; n <= N; ++n) {
                rb.equal<GradedElement>("p(λ^n x) = λ^n_Z(p x)", ctx + ", " + tag + ", n=" + std::to_string(n),
                                        series[n].even(), zser[n].even(), detail::show_form);
                rb.equal<GradedElement>("p(Ψ^n x) = Ψ^n_Z(p x)", ctx + ", " + tag + ", n=" + std::to_string(n),
                                        gamma_adams(static_cast<long>(n), x).even(),
                                        zeven_adams(static_cast<long>(n), pz), detail::show_form);
            }
            rb.equal<GradedElement>("p(xy) = p(x) p(y)", ctx + ", " + tag, even_restriction_p(gamma_mul(x, y)),
                                    wedge(pz, even_restriction_p(y)), detail::show_form);
        }
    }
    return rb.take();
}

/// Differential K-ring: transgression contract, well-definedness, ring laws, curvature and a.
inline AxiomReport run_diffk_suite(const std::vector<ModelPtr>& models, const SuiteOptions& opt)
{
    detail::ReportBuilder rb("diffk", detail::join_names(models), opt);
    using detail::show_class;
    using detail::show_form;
    for (const auto& m : models) {
        const std::string ctx = "DiffK(" + m->name() + ")";
        for (std::size_t i = 0; i < opt.samples; ++i) {
            const std::string tag = "sample " + std::to_string(i);
            {
                Rng rng = detail::suite_rng(opt.seed, 21, i);
                auto rank = static_cast<std::size_t>(rng.uniform(1, 4));
                auto e = random_cycle(m, rank, rng);
                detail::perturbation_checks(rb, ctx, m, PlainPolicy{}, e, rng, tag, true, true);
            }
            Rng rng = detail::suite_rng(opt.seed, 22, i);
            auto x = random_class(m, rng);
            auto y = random_class(m, rng);
            auto z = random_class(m, rng);
            const std::string inst = ctx + ", " + tag;
            rb.equal<DiffKClass>("xy = yx", inst, cycle_mul(x, y), cycle_mul(y, x), show_class);
            rb.equal<DiffKClass>("(xy)z = x(yz)", inst, cycle_mul(cycle_mul(x, y), z), cycle_mul(x, cycle_mul(y, z)),
                                 show_class);
            rb.equal<DiffKClass>("x(y+z) = xy + xz", inst, cycle_mul(x, class_add(y, z)),
                                 class_add(cycle_mul(x, y), cycle_mul(x, z)), show_class);
            rb.equal<DiffKClass>("1·x = x", inst, cycle_mul(diffk_one(m), x), x, show_class);
            rb.equal<GradedElement>("R(xy) = R(x) ∧ R(y)", inst, curvature_map(cycle_mul(x, y)),
                                    wedge(curvature_map(x), curvature_map(y)), show_form);
            rb.equal<GradedElement>("R(x+y) = R(x) + R(y)", inst, curvature_map(class_add(x, y)),
                                    curvature_map(x) + curvature_map(y), show_form);
            rb.check("R(x) is closed", inst, is_closed(curvature_map(x)),
                     [&] { return curvature_map(x).to_string(); });
            auto phi = OddCoset::normalize(random_odd(m, rng, 1));
            auto psi = OddCoset::normalize(random_odd(m, rng, 1));
            rb.equal<GradedElement>("R(a(φ)) = −dφ", inst, curvature_map(map_a(phi)), -differential(phi.rep()),
                                    show_form);
            rb.check("I(a(φ)) = 0", inst, map_I(map_a(phi)).empty(), [&] { return map_a(phi).to_string(); });
            rb.equal<DiffKClass>("a(φ)·a(ψ) = a(−dφ∧ψ)", inst, cycle_mul(map_a(phi), map_a(psi)),
                                 map_a(OddCoset::normalize(-wedge(differential(phi.rep()), psi.rep()))), show_class);
            rb.equal<DiffKClass>("fixture JSON round-trip", inst, diffk_from_json(nlohmann::json(diffk_to_json(x)), m),
                                 x, show_class);
        }
    }
    return rb.take();
}

/// Adams operations: (1.21)-type identities, lines, a, curvature, forgetful map, naturality, ν_k.
inline AxiomReport run_adams_suite(const std::vector<ModelPtr>& models, const SuiteOptions& opt)
{
    detail::ReportBuilder rb("adams", detail::join_names(models), opt);
    using detail::show_class;
    const long N = static_cast<long>(opt.truncation);
    const long nu_max = std::min<long>(4, N);
    std::vector<MultiPoly> nus;
    for (long k = 1; k <= nu_max; ++k) {
        nus.push_back(UniversalTable::instance().nu(static_cast<unsigned>(k)));
    }
    for (const auto& m : models) {
        // products of rank-4 classes carry ~16 roots; λ_t of those to full order dominates, so this
        // sub-check samples lower ranks
        rb.absorb(verify_axioms(DiffKContext{m, DiffKSampling{2, 3, 1}}, VerifyMode::AdamsCriterion,
                                detail::verify_options(opt, false)));
        const std::string ctx = "DiffK(" + m->name() + ")";
        DiffKRing ring{m, PlainPolicy{}};
        for (std::size_t i = 0; i < opt.samples; ++i) {
            Rng rng = detail::suite_rng(opt.seed, 31, i);
            const std::string inst = ctx + ", sample " + std::to_string(i);
            auto x = random_class(m, rng);
            auto y = random_class(m, rng);
            rb.equal<DiffKClass>("Ψ^1 = id", inst, cycle_adams(1, x), x, show_class);
            auto lx = lambda_t_cycle(x, opt.truncation);
            auto via_log = adams_via_log(lx);
            for (long k = 1; k <= N; ++k) {
                const std::string ik = inst + ", k=" + std::to_string(k);
                auto pk = cycle_adams(k, x);
                rb.equal<DiffKClass>("Ψ^k(x+y) = Ψ^k x + Ψ^k y", ik, cycle_adams(k, class_add(x, y)),
                                     class_add(pk, cycle_adams(k, y)), show_class);
                rb.equal<DiffKClass>("Ψ^k(xy) = Ψ^k x Ψ^k y", ik, cycle_adams(k, cycle_mul(x, y)),
                                     cycle_mul(pk, cycle_adams(k, y)), show_class);
                rb.equal<DiffKClass>("Ψ^k from λ_t by the logarithmic derivative", ik, via_log[k - 1], pk, show_class);
                for (long j = 1; j * k <= N; ++j) {
                    rb.equal<DiffKClass>("Ψ^j Ψ^k = Ψ^(jk)", ik + ", j=" + std::to_string(j), cycle_adams(j, pk),
                                         cycle_adams(j * k, x), show_class);
                }
                rb.equal<GradedElement>("R(Ψ^k x) = Ψ^k_Z R(x)", ik, curvature_map(pk),
                                        zeven_adams(k, curvature_map(x)), detail::show_form);
                auto fi = map_I(pk);
                auto fo = forgetful_psi(k, map_I(x));
                rb.check("I(Ψ^k x) = Ψ^k I(x)", ik, fi == fo, [&] { return pk.to_string(); });
                auto phi = OddCoset::normalize(random_odd(m, rng, 1));
                rb.equal<DiffKClass>("Ψ^k(a(φ)) = a(Ψ^k φ)", ik, cycle_adams(k, map_a(phi)),
                                     map_a(OddCoset::normalize(scale_by_weight(phi.rep(), k))), show_class);
            }
            // ν_k cross-check: Ψ^k x = ν_k(λ^1 x, ..., λ^k x)
            std::map<std::string, DiffKClass> assign;
            for (long k = 1; k <= nu_max; ++k) {
                assign.emplace(s_var(static_cast<unsigned>(k)), lx[static_cast<std::size_t>(k)]);
            }
            for (long k = 1; k <= nu_max; ++k) {
                rb.equal<DiffKClass>("Ψ^k x = ν_k(λ^1 x, ..., λ^k x)", inst + ", k=" + std::to_string(k),
                                     eval_in_ring(nus[static_cast<std::size_t>(k - 1)], assign, ring),
                                     cycle_adams(k, x), show_class);
            }
            // lines and sums of lines
            auto rank = rng.uniform(1, 4);
            std::vector<DiffKClass> lines;
            DiffKClass sum = diffk_zero(m);
            for (long j = 0; j < rank; ++j) {
                lines.push_back(diffk_normal_form(m, make_cycle(m, {random_line_root(m, rng)})));
                sum = class_add(sum, lines.back());
            }
            for (long k = 1; k <= N; ++k) {
                const std::string ik = inst + ", k=" + std::to_string(k);
                DiffKClass power = diffk_one(m);
                for (long j = 0; j < k; ++j) {
                    power = cycle_mul(power, lines[0]);
                }
                rb.equal<DiffKClass>("Ψ^k(L) = L^k", ik, cycle_adams(k, lines[0]), power, show_class);
                DiffKClass rhs = diffk_zero(m);
                for (const auto& l : lines) {
                    DiffKClass p = diffk_one(m);
                    for (long j = 0; j < k; ++j) {
                        p = cycle_mul(p, l);
                    }
                    rhs = class_add(rhs, p);
                }
                rb.equal<DiffKClass>("Ψ^k(L_1 + ... + L_r) = L_1^k + ... + L_r^k",
                                     ik + ", r=" + std::to_string(rank), cycle_adams(k, sum), rhs, show_class);
            }
        }
    }
    // naturality along CDGA morphisms
    for (const auto& f : builtin_morphisms()) {
        const std::string ctx = f.name();
        for (std::size_t i = 0; i < opt.samples; ++i) {
            Rng rng = detail::suite_rng(opt.seed, 32, i);
            const std::string inst = ctx + ", sample " + std::to_string(i);
            auto x = random_class(f.source(), rng);
            auto y = random_class(f.source(), rng);
            auto fx = class_pullback(f, x);
            for (long k = 1; k <= std::min<long>(4, N); ++k) {
                rb.equal<DiffKClass>("f*(Ψ^k x) = Ψ^k(f* x)", inst + ", k=" + std::to_string(k),
                                     class_pullback(f, cycle_adams(k, x)), cycle_adams(k, fx), show_class);
            }
            for (std::size_t k = 1; k <= 3; ++k) {
                rb.equal<DiffKClass>("f*(λ^k x) = λ^k(f* x)", inst + ", k=" + std::to_string(k),
                                     class_pullback(f, cycle_lambda(k, x)), cycle_lambda(k, fx), show_class);
            }
            rb.equal<DiffKClass>("f*(xy) = f*(x) f*(y)", inst, class_pullback(f, cycle_mul(x, y)),
                                 cycle_mul(fx, class_pullback(f, y)), show_class);
        }
    }
    return rb.take();
}

/// Equivariant ring over each (model, group): λ-ring axioms, Γ_g, Adams on characters, transgression.
inline AxiomReport run_equivariant_suite(const std::vector<ModelPtr>& models, const std::vector<CharacterGroup>& groups,
                                         const SuiteOptions& opt)
{
    std::string gnames;
    for (const auto& g : groups) {
        gnames += (gnames.empty() ? "" : ", ") + g.to_string();
    }
    detail::ReportBuilder rb("equivariant", detail::join_names(models) + " × {" + gnames + "}", opt);
    using detail::show_equiv;
    const long N = static_cast<long>(opt.truncation);
    for (const auto& g : groups) {
        // R(G)
        const std::string rctx = "R(" + g.to_string() + ")";
        auto show_rep = [](const RepRingElement& u) { return u.to_string(); };
        for (std::size_t i = 0; i < opt.samples; ++i) {
            Rng rng = detail::suite_rng(opt.seed, 41, i);
            auto random_rep = [&] {
                std::map<Character, long> t;
                long terms = rng.uniform(1, 3);
                for (long j = 0; j < terms; ++j) {
                    t[g.random_character(rng, 2)] += rng.uniform(-2, 2);
                }
                return RepRingElement(g, t);
            };
            auto u = random_rep();
            auto v = random_rep();
            auto w = random_rep();
            const std::string inst = rctx + ", sample " + std::to_string(i);
            rb.equal<RepRingElement>("uv = vu", inst, rep_mul(u, v), rep_mul(v, u), show_rep);
            rb.equal<RepRingElement>("(uv)w = u(vw)", inst, rep_mul(rep_mul(u, v), w), rep_mul(u, rep_mul(v, w)),
                                     show_rep);
            rb.equal<RepRingElement>("1·u = u", inst, rep_mul(RepRingElement::one(g), u), u, show_rep);
            rb.equal<RepRingElement>("u(v+w) = uv + uw", inst, rep_mul(u, rep_add(v, w)),
                                     rep_add(rep_mul(u, v), rep_mul(u, w)), show_rep);
            for (long k = 1; k <= 3; ++k) {
                rb.equal<RepRingElement>("Ψ^k(uv) = Ψ^k u Ψ^k v", inst + ", k=" + std::to_string(k),
                                         rep_adams(k, rep_mul(u, v)), rep_mul(rep_adams(k, u), rep_adams(k, v)),
                                         show_rep);
            }
        }
        for (std::size_t t = 0; t < g.torsion().size(); ++t) {
            Character gen = g.zero();
            gen.residues[t] = 1;
            auto c = RepRingElement::character(g, gen);
            auto p = RepRingElement::one(g);
            for (long j = 0; j < g.torsion()[t]; ++j) {
                p = rep_mul(p, c);
            }
            rb.equal<RepRingElement>("χ_γ^n = 1 for γ of order n", rctx + ", generator " + std::to_string(t), p,
                                     RepRingElement::one(g), show_rep);
        }

        for (const auto& m : models) {
            const CharacterPolicy pol{g};
            rb.absorb(verify_axioms(GammaGContext{m, g}, VerifyMode::Lambda, detail::verify_options(opt, true)));
            rb.absorb(verify_axioms(EquivContext{m, g}, VerifyMode::Lambda, detail::verify_options(opt, false)));
            const std::string ctx = "Equiv(" + m->name() + ", " + g.to_string() + ")";
            for (std::size_t i = 0; i < opt.samples; ++i) {
                const std::string tag = "sample " + std::to_string(i);
                const std::string inst = ctx + ", " + tag;
                {
                    Rng rng = detail::suite_rng(opt.seed, 42, i);
                    EquivCycle e;
                    auto rank = rng.uniform(1, 3);
                    for (long j = 0; j < rank; ++j) {
                        e.roots.emplace_back(random_line_root(m, rng), g.random_character(rng));
                    }
                    detail::add_form(e.phi, g.random_character(rng), random_odd(m, rng, 1));
                    detail::perturbation_checks(rb, ctx, m, pol, e, rng, tag, true, true);
                }
                Rng rng = detail::suite_rng(opt.seed, 43, i);
                auto x = random_equiv_class(m, g, rng);
                auto y = random_equiv_class(m, g, rng);
                auto via_log = adams_via_log(class_lambda_series(x, opt.truncation));
                auto root = random_line_root(m, rng);
                auto gamma = g.random_character(rng);
                auto line = equiv_normal_form(m, g, EquivCycle{{{root, gamma}}, {}});
                auto phi = OddCoset::normalize(random_odd(m, rng, 1));
                auto chi = g.random_character(rng);
                for (long k = 1; k <= N; ++k) {
                    const std::string ik = inst + ", k=" + std::to_string(k);
                    auto pk = equiv_adams(k, x);
                    rb.equal<EquivClass>("Ψ^k from λ_t by the logarithmic derivative", ik, via_log[k - 1], pk,
                                         show_equiv);
                    rb.equal<EquivClass>("Ψ^k(x⊗χ_γ) = (kx)⊗χ_{kγ}", ik, equiv_adams(k, line),
                                         equiv_normal_form(m, g, EquivCycle{{{root * Rational(k), g.multiple(k, gamma)}}, {}}),
                                         show_equiv);
                    rb.equal<EquivClass>("Ψ^k(a(α_l⊗χ_γ)) = a(k^l α_l⊗χ_{kγ})", ik, equiv_adams(k, equiv_map_a(m, g, {{chi, phi}})),
                                         equiv_map_a(m, g,
                                                     {{g.multiple(k, chi),
                                                       OddCoset::normalize(scale_by_weight(phi.rep(), k))}}),
                                         show_equiv);
                    rb.equal<EquivClass>("Ψ^k(xy) = Ψ^k x Ψ^k y", ik, equiv_adams(k, equiv_cycle_mul(x, y)),
                                         equiv_cycle_mul(pk, equiv_adams(k, y)), show_equiv);
                    for (long j = 1; j * k <= N; ++j) {
                        rb.equal<EquivClass>("Ψ^j Ψ^k = Ψ^(jk)", ik + ", j=" + std::to_string(j), equiv_adams(j, pk),
                                             equiv_adams(j * k, x), show_equiv);
                    }
                    // curvature and forgetful compatibility, characterwise
                    std::map<Character, GradedElement> expected;
                    for (const auto& [c, w] : class_curvature(x)) {
                        detail::add_form(expected, g.multiple(k, c), zeven_adams(k, w));
                    }
                    std::erase_if(expected, [](const auto& kv) { return kv.second.is_zero(); });
                    auto got = class_curvature(pk);
                    rb.check("R(Ψ^k x) = Ψ^k R(x) characterwise", ik, got == expected, [&] { return pk.to_string(); });
                    rb.check("I(Ψ^k x) = Ψ^k I(x)", ik, class_forgetful(pk) == forgetful_adams(pol, k, class_forgetful(x)),
                             [&] { return pk.to_string(); });
                }
                rb.equal<EquivClass>("xy = yx", inst, equiv_cycle_mul(x, y), equiv_cycle_mul(y, x), show_equiv);
                auto one = equiv_one(m, g);
                rb.equal<EquivClass>("1·x = x", inst, equiv_cycle_mul(one, x), x, show_equiv);
                rb.equal<EquivClass>("λ^1 x = x", inst, equiv_lambda(1, x), x, show_equiv);
                rb.check("λ^m(L) = 0 for a line L, m > 1", inst, equiv_lambda(2, line).is_zero() && equiv_lambda(3, line).is_zero(),
                         [&] { return equiv_lambda(2, line).to_string(); });
            }
        }
    }
    return rb.take();
}

/// Exponential basis change on projective bundles over formal bases, ranks 1..max_rank.
inline AxiomReport run_splitting_suite(const std::vector<std::string>& bases, const SuiteOptions& opt)
{
    std::string names;
    for (const auto& b : bases) {
        names += (names.empty() ? "" : ", ") + b;
    }
    detail::ReportBuilder rb("splitting", names, opt);
    std::size_t idx = 0;
    for (const auto& b : bases) {
        const ModelSpec spec = builtin_spec(b);
        const ModelPtr base = builtin_model(b);
        for (unsigned r = 1; r <= opt.max_rank; ++r) {
            Rng rng = detail::suite_rng(opt.seed, 51, idx++);
            auto c = random_chern_classes(base, r, rng);
            std::string cs;
            for (const auto& ci : c) {
                cs += (cs.empty() ? "" : ", ") + ci.to_string();
            }
            const std::string inst = "P(" + b + "," + std::to_string(r) + "), c = (" + cs + ")";
            auto res = exp_basis_matrix(spec, r, c);
            rb.check("A = V + B with V Vandermonde and B nilpotent", inst, res.B_nilpotent,
                     [&] { return "B = " + form_matrix_string(res.B); });
            rb.check("A A⁻¹ = A⁻¹ A = I", inst, res.inverse_exact,
                     [&] { return "A = " + form_matrix_string(res.A) + ", A⁻¹ = " + form_matrix_string(res.A_inv); });
            rb.check("e = f·A", inst, res.e_equals_fA, [&] { return "A = " + form_matrix_string(res.A); });
            rb.check("f = e·A⁻¹", inst, res.f_equals_eAinv, [&] { return "A⁻¹ = " + form_matrix_string(res.A_inv); });
            rb.check("bundle is free over the base on 1, h, ..., h^(r-1)", inst, res.free, [&] {
                return "rank " + std::to_string(res.module_rank) + ", expected " + std::to_string(res.expected_rank) +
                       " = dim " + std::to_string(res.bundle->dim());
            });
        }
    }
    for (const std::string nf : {"s2", "heisenberg"}) {
        bool rejected = false;
        try {
            exp_basis_matrix(builtin_spec(nf), 2, {MultiPoly(), MultiPoly()});
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        rb.check("non-formal base is rejected", nf, rejected, [] { return "no error raised"; });
    }
    return rb.take();
}

} // namespace lambda_forge
