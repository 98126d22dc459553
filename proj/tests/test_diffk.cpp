/**
 * @file test_diffk.cpp
 * @brief Differential K-classes of split cycles: normal forms, Chern–Simons, products, λ, Ψ, R, a, I.
 */

#include <gtest/gtest.h>

#include <lambda_forge/diffk.hpp>

using namespace lambda_forge;

namespace {

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }

GradedElement el(const ModelPtr& m, const std::string& text) { return GradedElement::parse(m, text); }

DiffKClass line(const ModelPtr& m, const GradedElement& x) { return diffk_normal_form(m, make_cycle(m, {x})); }

/// k-fold product of a class, for comparing Ψ^k on lines with tensor powers.
DiffKClass power(const DiffKClass& a, unsigned k)
{
    DiffKClass out = diffk_one(a.model());
    for (unsigned i = 0; i < k; ++i) {
        out = cycle_mul(out, a);
    }
    return out;
}

/**
 * ∫_0^1 β ∧ exp(x + s dβ) ds, expanded exactly: (x + s y)^n = Σ binom(n,j) x^{n-j} y^j s^j
 * (x and y = dβ are even so they commute) and ∫ s^j ds = 1/(j+1).
 */
GradedElement cs_by_integration(const GradedElement& x, const GradedElement& beta)
{
    const ModelPtr& m = x.model();
    GradedElement y = differential(beta);
    GradedElement total(m);
    for (unsigned n = 0; 2 * n < m->top_degree(); ++n) {
        for (unsigned j = 0; j <= n; ++j) {
            GradedElement term = GradedElement::one(m);
            for (unsigned a = 0; a < n - j; ++a) {
                term = wedge(term, x);
            }
            for (unsigned b = 0; b < j; ++b) {
                term = wedge(term, y);
            }
            total += term * (binomial(n, j) / factorial(n) / q(static_cast<long>(j + 1)));
        }
    }
    return wedge(beta, total);
}

const std::vector<std::string> kModels = {"torus4", "s2", "cp3", "heisenberg"};

} // namespace

TEST(ChernSimons, MatchesExplicitIntegral)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (std::uint64_t i = 0; i < 10; ++i) {
            Rng rng = Rng::for_sample(41, i);
            auto x = random_line_root(m, rng);
            Perturbation p = random_perturbation(m, 1, rng);
            auto e = make_cycle(m, {x});
            EXPECT_EQ(chern_simons_form(m, e, p), cs_by_integration(x, p.beta[0])) << name;
        }
    }
}

// Property: d(CS) = ch(E1) − ch(E0) with ch computed independently through exp_form.
TEST(ChernSimons, TransgressionIdentity)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (std::uint64_t i = 0; i < 15; ++i) {
            Rng rng = Rng::for_sample(42, i);
            const std::size_t r = static_cast<std::size_t>(rng.uniform(1, 3));
            auto e = random_cycle(m, r, rng);
            Perturbation p = random_perturbation(m, r, rng);
            GradedElement ch0(m), ch1(m);
            for (std::size_t j = 0; j < r; ++j) {
                ch0 += exp_form(e.roots[j].first);
                ch1 += exp_form(e.roots[j].first + differential(p.beta[j]));
            }
            EXPECT_EQ(differential(chern_simons_form(m, e, p)), ch1 - ch0) << name;
        }
    }
}

TEST(NormalForm, PerturbedCycleGivesSameClass)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (std::uint64_t i = 0; i < 15; ++i) {
            Rng rng = Rng::for_sample(43, i);
            auto e = random_cycle(m, static_cast<std::size_t>(rng.uniform(1, 3)), rng);
            Perturbation p = random_canonical_perturbation(m, e.roots.size(), rng);
            auto moved = perturb_roots(e, p);
            moved.phi[NoLabel{}] = cycle_phi(m, e) + chern_simons_form(m, e, p);
            EXPECT_EQ(diffk_normal_form(m, e), diffk_normal_form(m, moved)) << name;
        }
    }
}

TEST(NormalForm, EqualRootsCancelAcrossPlusAndMinus)
{
    auto m = builtin_model("cp3");
    auto x = el(m, "2*x");
    auto a = diffk_normal_form(m, make_cycle({x, el(m, "-x")}, GradedElement(m)), make_cycle(m, {x}));
    EXPECT_EQ(a, line(m, el(m, "-x")));
    EXPECT_EQ(a.virtual_rank(), 1);
    EXPECT_THROW(make_cycle({x}, el(m, "x")), std::invalid_argument); // φ must be odd
    EXPECT_THROW(diffk_normal_form(m, make_cycle(builtin_model("cp2"), {el(builtin_model("cp2"), "x")})),
                 std::invalid_argument);
}

TEST(Products, LinesMultiplyByAddingRoots)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        Rng rng = Rng::for_sample(44, 0);
        auto x = random_line_root(m, rng);
        auto y = random_line_root(m, rng);
        EXPECT_EQ(cycle_mul(line(m, x), line(m, y)), line(m, x + y)) << name;
        EXPECT_EQ(cycle_mul(line(m, x), diffk_one(m)), line(m, x));
    }
}

TEST(Products, OddFormsMultiplyThroughCurvature)
{
    // [L, 0] · a(φ) = a(e^x ∧ φ) and a(φ) a(ψ) = a(−dφ ∧ ψ)
    auto m = builtin_model("heisenberg");
    auto phi = OddCoset::normalize(el(m, "e3"));
    auto psi = OddCoset::normalize(el(m, "e3 + e1"));
    auto x = el(m, "e1*e3 + e2*e3");
    ASSERT_TRUE(is_closed(x));
    EXPECT_EQ(cycle_mul(line(m, x), map_a(phi)), map_a(OddCoset::normalize(wedge(exp_form(x), phi.rep()))));
    EXPECT_EQ(cycle_mul(map_a(phi), map_a(psi)),
              map_a(OddCoset::normalize(-wedge(differential(phi.rep()), psi.rep()))));
}

TEST(Lambda, ExteriorPowersOfLineSums)
{
    auto m = builtin_model("torus4");
    Rng rng = Rng::for_sample(45, 0);
    auto x = random_line_root(m, rng);
    auto y = random_line_root(m, rng);
    auto z = random_line_root(m, rng);
    auto e = diffk_normal_form(m, make_cycle(m, {x, y, z}));
    EXPECT_EQ(cycle_lambda(0, e), diffk_one(m));
    EXPECT_EQ(cycle_lambda(1, e), e);
    EXPECT_EQ(cycle_lambda(2, e), diffk_normal_form(m, make_cycle(m, {x + y, x + z, y + z})));
    EXPECT_EQ(cycle_lambda(3, e), line(m, x + y + z));
    EXPECT_TRUE(cycle_lambda(4, e).is_zero());
    EXPECT_TRUE(cycle_lambda(2, line(m, x)).is_zero());
}

TEST(Lambda, LambdaOfVirtualClassInvertsSeries)
{
    // λ_t(−L) = (1 + L t)^{-1} = Σ (−1)^k L^k t^k
    auto m = builtin_model("cp3");
    auto L = line(m, el(m, "x"));
    auto s = lambda_t_cycle(class_neg(L), 3);
    for (unsigned k = 0; k <= 3; ++k) {
        auto expected = power(L, k);
        EXPECT_EQ(s[k], k % 2 == 0 ? expected : class_neg(expected)) << k;
    }
}

TEST(Lambda, OddClassOnTorusMatchesGamma)
{
    auto m = builtin_model("torus4");
    Rng rng = Rng::for_sample(46, 0);
    auto phi = OddCoset::normalize(random_odd(m, rng));
    auto g = gamma_lambda_series(GammaElement::from_odd(phi), 3);
    for (std::size_t k = 1; k <= 3; ++k) {
        EXPECT_EQ(cycle_lambda(k, map_a(phi)), map_a(g[k].odd())) << k;
    }
}

TEST(Adams, LinesGoToTensorPowers)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (std::uint64_t i = 0; i < 5; ++i) {
            Rng rng = Rng::for_sample(47, i);
            auto L = line(m, random_line_root(m, rng));
            for (unsigned k = 1; k <= 4; ++k) {
                EXPECT_EQ(cycle_adams(k, L), power(L, k)) << name << " k=" << k;
            }
        }
    }
}

TEST(CurvatureAndForget, HandComputed)
{
    auto m = builtin_model("s2");
    auto x = el(m, "x");
    auto phi = el(m, "y");
    auto a = diffk_normal_form(m, make_cycle({x, x * q(2)}, phi));
    // R = e^x + e^{2x} − dy = 2 + 3x + (1/2 + 2 − 1) x^2
    EXPECT_EQ(curvature_map(a), el(m, "2 + 3*x + 3/2*x^2"));
    auto forgotten = map_I(a);
    EXPECT_EQ(forgotten.size(), 2u);
    EXPECT_TRUE(map_I(map_a(OddCoset::normalize(phi))).empty());
    EXPECT_EQ(forgetful_psi(2, map_I(line(m, x))), map_I(line(m, x * q(2))));
}

TEST(Harness, LambdaAxiomsOnSmallSamples)
{
    VerifyOptions opt;
    opt.samples = 3;
    opt.seed = 4;
    opt.truncation = 4;
    opt.mul_order = 3;
    for (const auto& name : {"torus2", "s2", "heisenberg"}) {
        DiffKContext ctx{builtin_model(name), DiffKSampling{2, 3, 1}};
        EXPECT_TRUE(verify_axioms(ctx, VerifyMode::Lambda, opt).all_passed()) << name;
    }
}

TEST(Pullback, NaturalForProductsAndLambda)
{
    auto t2 = builtin_model("torus2");
    auto h = builtin_model("heisenberg");
    CdgaMorphism f(t2, h, {{"dx1", MultiPoly::parse("e1")}, {"dx2", MultiPoly::parse("e1+e2")}}, "f");
    for (std::uint64_t i = 0; i < 5; ++i) {
        Rng rng = Rng::for_sample(48, i);
        auto a = random_class(t2, rng, {2, 3, 1});
        auto b = random_class(t2, rng, {2, 3, 1});
        EXPECT_EQ(class_pullback(f, cycle_mul(a, b)), cycle_mul(class_pullback(f, a), class_pullback(f, b)));
        EXPECT_EQ(class_pullback(f, cycle_lambda(2, a)), cycle_lambda(2, class_pullback(f, a)));
        EXPECT_EQ(curvature_map(class_pullback(f, a)), f.apply(curvature_map(a)));
    }
    EXPECT_THROW(class_pullback(f, diffk_one(h)), std::invalid_argument);
}

TEST(Fixtures, JsonRoundTrip)
{
    auto m = builtin_model("s2");
    Rng rng = Rng::for_sample(49, 0);
    auto a = random_class(m, rng);
    auto j = nlohmann::json::parse(diffk_to_json(a).dump());
    EXPECT_EQ(diffk_from_json(j, m), a);
    EXPECT_THROW(diffk_from_json(j, builtin_model("cp2")), std::invalid_argument);
}
