/**
 * @file test_cdga.cpp
 * @brief Finite CDGA models: construction, graded ring laws, exactness, morphisms.
 */

#include <gtest/gtest.h>

#include <lambda_forge/cdga.hpp>

using namespace lambda_forge;

namespace {

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }

GradedElement el(const ModelPtr& m, const std::string& text) { return GradedElement::parse(m, text); }

std::vector<std::size_t> dims(const ModelPtr& m)
{
    std::vector<std::size_t> out;
    for (unsigned k = 0; k <= m->top_degree(); ++k) {
        out.push_back(m->dim(k));
    }
    return out;
}

const std::vector<std::string> kModels = {"point", "torus2", "torus4", "s2", "cp2", "cp3", "heisenberg"};

} // namespace

TEST(Models, DimensionsMatchHandCounts)
{
    EXPECT_EQ(dims(builtin_model("torus3")), (std::vector<std::size_t>{1, 3, 3, 1}));
    EXPECT_EQ(dims(builtin_model("torus4")), (std::vector<std::size_t>{1, 4, 6, 4, 1}));
    EXPECT_EQ(dims(builtin_model("cp3")), (std::vector<std::size_t>{1, 0, 1, 0, 1, 0, 1}));
    // s2: 1, x, y, x^2 (x*y has degree 5 > 4)
    EXPECT_EQ(dims(builtin_model("s2")), (std::vector<std::size_t>{1, 0, 1, 1, 1}));
    EXPECT_EQ(dims(builtin_model("heisenberg")), (std::vector<std::size_t>{1, 3, 3, 1}));
    EXPECT_EQ(builtin_model("point")->dim(), 1u);
}

TEST(Models, FormalityFlag)
{
    EXPECT_TRUE(builtin_model("torus2")->is_formal());
    EXPECT_TRUE(builtin_model("cp2")->is_formal());
    EXPECT_FALSE(builtin_model("s2")->is_formal());
    EXPECT_FALSE(builtin_model("heisenberg")->is_formal());
}

TEST(Models, NamedLookupAndErrors)
{
    EXPECT_EQ(builtin_model("torus(3)")->name(), "torus3");
    EXPECT_EQ(builtin_model("torus4"), builtin_model("torus4"));
    EXPECT_THROW(builtin_model("klein"), std::invalid_argument);
}

TEST(Models, ProductOnTorusIsExterior)
{
    auto m = builtin_model("torus2");
    auto a = el(m, "dx1");
    auto b = el(m, "dx2");
    EXPECT_EQ(wedge(a, b), -wedge(b, a));
    EXPECT_TRUE(wedge(a, a).is_zero());
    EXPECT_EQ(wedge(a, b), el(m, "dx1*dx2"));
}

TEST(Models, S2DifferentialAndExactness)
{
    auto m = builtin_model("s2");
    EXPECT_EQ(differential(el(m, "y")), el(m, "x^2"));
    EXPECT_TRUE(is_closed(el(m, "x")));
    EXPECT_EQ(canonical_preimage(el(m, "3*x^2")), el(m, "3*y"));
    EXPECT_THROW(canonical_preimage(el(m, "x")), std::domain_error);
    EXPECT_TRUE(project_mod_exact(el(m, "x^2")).is_zero());
}

TEST(Models, HeisenbergCohomologyHasDimensionTwoInDegreeOne)
{
    auto m = builtin_model("heisenberg");
    EXPECT_EQ(m->cocycle_basis(1).size(), 2u); // e1, e2; e3 is not closed
    EXPECT_EQ(differential(el(m, "e3")), el(m, "e1*e2"));
    EXPECT_EQ(m->exact_forms(2).rank(), 1u);
}

// Property: d is a square-zero graded derivation and the product is graded commutative and associative.
TEST(Models, RandomElementsSatisfyCdgaLaws)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (std::uint64_t i = 0; i < 15; ++i) {
            Rng rng = Rng::for_sample(11, i);
            for (unsigned p = 0; p <= m->top_degree(); ++p) {
                for (unsigned r = 0; r <= m->top_degree(); ++r) {
                    auto a = random_form(m, p, rng);
                    auto b = random_form(m, r, rng);
                    auto c = random_element(m, rng);
                    const Rational sign = (p * r) % 2 == 0 ? q(1) : q(-1);
                    EXPECT_EQ(wedge(a, b), wedge(b, a) * sign) << name;
                    EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c))) << name;
                    const Rational sa = p % 2 == 0 ? q(1) : q(-1);
                    EXPECT_EQ(differential(wedge(a, b)), wedge(differential(a), b) + wedge(a, differential(b)) * sa)
                        << name;
                    EXPECT_TRUE(differential(differential(c)).is_zero()) << name;
                }
            }
        }
    }
}

TEST(Models, CanonicalPreimageInvertsD)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (std::uint64_t i = 0; i < 20; ++i) {
            Rng rng = Rng::for_sample(12, i);
            auto beta = random_element(m, rng);
            beta -= beta.part(0);
            auto exact = differential(beta);
            auto pre = canonical_preimage(exact);
            EXPECT_EQ(differential(pre), exact) << name;
            // canonical: the same exact form always gives the same preimage
            EXPECT_EQ(canonical_preimage(differential(pre)), pre) << name;
        }
    }
}

TEST(Models, OddCosetIgnoresExactChanges)
{
    // d(a) = b makes b an exact odd form
    auto m = build_model(ModelSpec::from_json(nlohmann::json::parse(
        R"({"name":"cone","top_degree":3,"generators":[{"name":"a","degree":2},{"name":"b","degree":3},
            {"name":"c","degree":3}],"differential":[{"of":"a","value":"b"}]})")));
    auto a = el(m, "c + 2*b");
    auto exact = differential(el(m, "a"));
    EXPECT_EQ(OddCoset::normalize(a), OddCoset::normalize(el(m, "c")));
    EXPECT_TRUE(OddCoset::normalize(exact).is_zero());
    EXPECT_EQ(OddCoset::normalize(a + exact * q(5)), OddCoset::normalize(a));
}

TEST(Models, ExpOfNilpotentForm)
{
    auto m = builtin_model("cp2");
    auto x = el(m, "x");
    EXPECT_EQ(exp_form(x), el(m, "1 + x + 1/2*x^2"));
    EXPECT_EQ(wedge(exp_form(x), exp_form(-x)), GradedElement::one(m));
    EXPECT_THROW(exp_form(GradedElement::one(m)), std::domain_error);
}

TEST(Models, ScaleByWeight)
{
    auto m = builtin_model("s2");
    // degree 2 scales by k, degrees 3 and 4 by k^2
    EXPECT_EQ(scale_by_weight(el(m, "1 + x + y + x^2"), 3), el(m, "1 + 3*x + 9*y + 9*x^2"));
}

TEST(Specs, JsonRoundTripAndValidation)
{
    auto spec = heisenberg_spec();
    auto j = nlohmann::json::parse(spec.to_json().dump());
    auto back = ModelSpec::from_json(j);
    auto m = build_model(back);
    EXPECT_EQ(dims(m), dims(builtin_model("heisenberg")));

    auto bad_d = nlohmann::json::parse(
        R"({"name":"bad","top_degree":2,"generators":[{"name":"a","degree":1},{"name":"b","degree":1}],
            "differential":[{"of":"a","value":"b"}]})");
    EXPECT_THROW(build_model(ModelSpec::from_json(bad_d)), std::invalid_argument);

    // explicit zero differentials are accepted
    auto zero_d = nlohmann::json::parse(
        R"({"name":"dd","top_degree":3,"generators":[{"name":"a","degree":1},{"name":"b","degree":2},
            {"name":"c","degree":2}],"differential":[{"of":"a","value":"0"},{"of":"c","value":"0"},
            {"of":"b","value":"0"}]})");
    EXPECT_NO_THROW(build_model(ModelSpec::from_json(zero_d)));

    auto dup = nlohmann::json::parse(
        R"({"name":"dup","top_degree":2,"generators":[{"name":"a","degree":1},{"name":"a","degree":1}]})");
    EXPECT_THROW(build_model(ModelSpec::from_json(dup)), std::invalid_argument);
    EXPECT_THROW(ModelSpec::from_json(nlohmann::json::parse(R"({"name":"x"})")), std::invalid_argument);
    auto extra = nlohmann::json::parse(R"({"name":"pt","top_degree":0,"group":"Z/2"})");
    EXPECT_NO_THROW(build_model(ModelSpec::from_json(extra)));
}

TEST(Specs, NonSquareZeroDifferentialRejected)
{
    // d(b) = a*e is fine, but d(c) = b then gives d∘d(c) = a*e ≠ 0
    auto j = nlohmann::json::parse(
        R"({"name":"dd","top_degree":3,"generators":[{"name":"a","degree":1},{"name":"e","degree":1},
            {"name":"b","degree":2},{"name":"c","degree":1}],
            "differential":[{"of":"b","value":"a*e"},{"of":"c","value":"b"}]})");
    EXPECT_THROW(build_model(ModelSpec::from_json(j)), std::invalid_argument);
}

TEST(Morphisms, CommuteWithProductAndDifferential)
{
    auto t2 = builtin_model("torus2");
    auto h = builtin_model("heisenberg");
    CdgaMorphism f(t2, h, {{"dx1", MultiPoly::parse("e1")}, {"dx2", MultiPoly::parse("e1+e2")}}, "f");
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng = Rng::for_sample(13, i);
        auto a = random_element(t2, rng);
        auto b = random_element(t2, rng);
        EXPECT_EQ(f.apply(wedge(a, b)), wedge(f.apply(a), f.apply(b)));
        EXPECT_EQ(f.apply(a + b), f.apply(a) + f.apply(b));
        EXPECT_EQ(f.apply(differential(a)), differential(f.apply(a)));
    }
    auto id = CdgaMorphism::identity(h);
    auto x = el(h, "e1*e3 + 2*e2");
    EXPECT_EQ(id.apply(x), x);
}

TEST(Morphisms, InvalidMapsRejected)
{
    auto t2 = builtin_model("torus2");
    auto h = builtin_model("heisenberg");
    // e3 ↦ 0 does not commute with d since d(e3) = e1 e2 ↦ dx1 dx2 ≠ 0
    EXPECT_THROW(CdgaMorphism(h, t2, {{"e1", MultiPoly::parse("dx1")}, {"e2", MultiPoly::parse("dx2")}}),
                 std::invalid_argument);
    // wrong degree
    auto cp1 = builtin_model("cp1");
    EXPECT_THROW(CdgaMorphism(t2, cp1, {{"dx1", MultiPoly::parse("x")}}), std::invalid_argument);
    // relation x^2 = 0 in cp1 must map to zero: x ↦ x in cp2 violates it
    EXPECT_THROW(CdgaMorphism(cp1, builtin_model("cp2"), {{"x", MultiPoly::parse("x")}}), std::invalid_argument);
    EXPECT_THROW(CdgaMorphism(t2, h, {{"nope", MultiPoly::parse("e1")}}), std::exception);
}

TEST(ProjectiveBundle, RankTwoOverCp1)
{
    // P(O ⊕ O(1)) over CP^1: h^2 + c1 h = 0, dimension 4
    auto spec = projective_bundle_spec(cp_spec(1), 2, {MultiPoly::parse("x"), MultiPoly()});
    auto m = build_model(spec);
    EXPECT_EQ(m->top_degree(), 4u);
    EXPECT_EQ(dims(m), (std::vector<std::size_t>{1, 0, 2, 0, 1}));
    EXPECT_EQ(el(m, "h^2"), -el(m, "x*h"));
    EXPECT_THROW(projective_bundle_spec(cp_spec(1), 2, {MultiPoly::parse("x")}), std::invalid_argument);
    EXPECT_THROW(projective_bundle_spec(cp_spec(1), 0, {}), std::invalid_argument);
}
