/**
 * @file test_equivariant.cpp
 * @brief Character groups, R(G), the graded ring Γ_g and equivariant classes labelled by characters.
 */

#include <gtest/gtest.h>

#include <lambda_forge/diffk.hpp>
#include <lambda_forge/equivariant.hpp>

using namespace lambda_forge;

namespace {

GradedElement el(const ModelPtr& m, const std::string& text) { return GradedElement::parse(m, text); }

EquivClass labelled_line(const ModelPtr& m, const CharacterGroup& g, const GradedElement& x, const Character& c)
{
    EquivCycle e;
    e.roots.emplace_back(x, c);
    return equiv_normal_form(m, g, e);
}

/// Drops the character labels: the underlying non-equivariant class.
DiffKClass forget_labels(const EquivClass& a)
{
    const ModelPtr& m = a.model();
    DiffKCycle plus;
    DiffKCycle minus;
    for (const auto& [key, mult] : a.roots()) {
        auto x = GradedElement::from_component(m, 2, key.first);
        for (long i = 0; i < (mult > 0 ? mult : -mult); ++i) {
            (mult > 0 ? plus : minus).roots.emplace_back(x, NoLabel{});
        }
    }
    GradedElement phi(m);
    for (const auto& [c, p] : a.phi()) {
        phi += p.rep();
    }
    plus.phi[NoLabel{}] = phi;
    return diffk_normal_form(m, plus, minus);
}

const std::vector<std::string> kModels = {"torus2", "s2"};

} // namespace

TEST(CharacterGroup, ParseAndPrint)
{
    for (const std::string text : {"Z", "Z/2", "ZxZ/3", "Z^2xZ/2xZ/4", "1"}) {
        EXPECT_EQ(CharacterGroup::parse(text).to_string(), text);
    }
    EXPECT_EQ(CharacterGroup::parse("Z×Z/3"), CharacterGroup(1, {3}));
    EXPECT_EQ(CharacterGroup::parse(R"({"free_rank":2,"torsion":[5]})"), CharacterGroup(2, {5}));
    auto g = CharacterGroup(1, {3});
    EXPECT_EQ(CharacterGroup::from_json(nlohmann::json::parse(g.to_json().dump())), g);
    EXPECT_THROW(CharacterGroup::parse("Q"), std::invalid_argument);
    EXPECT_THROW(CharacterGroup::parse("Z/1"), std::invalid_argument);
    EXPECT_THROW(CharacterGroup::parse("{bad"), std::invalid_argument);
}

TEST(CharacterGroup, ArithmeticReducesResidues)
{
    auto g = CharacterGroup(1, {3});
    auto a = g.make({2}, {2});
    auto b = g.make({-1}, {5}); // 5 = 2 mod 3
    EXPECT_EQ(b.residues[0], 2);
    EXPECT_EQ(g.add(a, b), g.make({1}, {1}));
    EXPECT_EQ(g.multiple(3, a), g.make({6}, {0}));
    EXPECT_EQ(g.add(a, g.negate(a)), g.zero());
    EXPECT_EQ(g.character_string(a), "χ(2|2)");
    EXPECT_THROW(g.make({1, 2}, {0}), std::invalid_argument);
    EXPECT_THROW(g.add(a, CharacterGroup(0, {2}).zero()), std::invalid_argument);
}

TEST(RepRing, CharactersMultiplyByAddingLabels)
{
    auto g = CharacterGroup(0, {2});
    auto s = RepRingElement::character(g, g.make({}, {1}));
    // the sign representation squares to the trivial one
    EXPECT_EQ(rep_mul(s, s), RepRingElement::one(g));
    auto u = rep_add(RepRingElement::one(g), s);
    auto u2 = rep_mul(u, u);
    EXPECT_EQ(u2.dimension(), 4);
    EXPECT_EQ(u2, RepRingElement(g, {{g.zero(), 2}, {g.make({}, {1}), 2}}));
    // Ψ^k sends χ to χ^k: on Z/2 even k kill the label
    EXPECT_EQ(rep_adams(2, s), RepRingElement::one(g));
    EXPECT_EQ(rep_adams(3, s), s);
    EXPECT_THROW(rep_mul(s, RepRingElement::one(CharacterGroup(1, {}))), std::invalid_argument);
}

// Property: R(G) is a commutative ring and Ψ^k is a ring map with Ψ^j Ψ^k = Ψ^{jk}.
TEST(RepRing, RingLawsAndAdams)
{
    for (const auto& g : default_groups()) {
        for (std::uint64_t i = 0; i < 20; ++i) {
            Rng rng = Rng::for_sample(61, i);
            auto rnd = [&] {
                std::map<Character, long> t;
                for (int j = 0; j < 3; ++j) {
                    t[g.random_character(rng, 2)] += rng.uniform(-2, 2);
                }
                return RepRingElement(g, t);
            };
            auto a = rnd(), b = rnd(), c = rnd();
            EXPECT_EQ(rep_mul(a, b), rep_mul(b, a));
            EXPECT_EQ(rep_mul(rep_mul(a, b), c), rep_mul(a, rep_mul(b, c)));
            EXPECT_EQ(rep_mul(a, rep_add(b, c)), rep_add(rep_mul(a, b), rep_mul(a, c)));
            EXPECT_EQ(rep_mul(a, b).dimension(), a.dimension() * b.dimension());
            for (long k = 1; k <= 4; ++k) {
                EXPECT_EQ(rep_adams(k, rep_mul(a, b)), rep_mul(rep_adams(k, a), rep_adams(k, b)));
                EXPECT_EQ(rep_adams(2, rep_adams(k, a)), rep_adams(2 * k, a));
            }
        }
    }
}

// Property: Γ_g is a commutative ring and Ψ^k acts as a ring map.
TEST(GammaG, RingLawsAndAdams)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (const auto& g : default_groups()) {
            GammaGRing r{m, g};
            for (std::uint64_t i = 0; i < 8; ++i) {
                Rng rng = Rng::for_sample(62, i);
                auto a = random_gammag(m, g, rng);
                auto b = random_gammag(m, g, rng);
                auto c = random_gammag(m, g, rng);
                EXPECT_EQ(r.mul(a, b), r.mul(b, a)) << name << " " << g.to_string();
                EXPECT_EQ(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c))) << name;
                EXPECT_EQ(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c))) << name;
                EXPECT_EQ(r.mul(a, r.one()), a) << name;
                for (long k = 1; k <= 3; ++k) {
                    EXPECT_EQ(gammag_adams(k, r.mul(a, b)), r.mul(gammag_adams(k, a), gammag_adams(k, b))) << name;
                }
            }
        }
    }
}

TEST(Equivariant, NormalFormChecksMembership)
{
    auto m = builtin_model("s2");
    auto g = CharacterGroup(1, {});
    EquivCycle e;
    e.roots.emplace_back(el(m, "x"), CharacterGroup(0, {2}).make({}, {1}));
    EXPECT_THROW(equiv_normal_form(m, g, e), std::invalid_argument);
}

TEST(Equivariant, LabelledLinesMultiplyByAddingRootsAndCharacters)
{
    auto m = builtin_model("s2");
    auto g = CharacterGroup(1, {3});
    auto a = g.make({1}, {2});
    auto b = g.make({-2}, {2});
    auto x = el(m, "x");
    auto y = el(m, "-2*x");
    EXPECT_EQ(equiv_cycle_mul(labelled_line(m, g, x, a), labelled_line(m, g, y, b)),
              labelled_line(m, g, x + y, g.add(a, b)));
    EXPECT_EQ(equiv_cycle_mul(labelled_line(m, g, x, a), equiv_one(m, g)), labelled_line(m, g, x, a));
}

TEST(Equivariant, SameRootDifferentCharactersDoNotCancel)
{
    auto m = builtin_model("torus2");
    auto g = CharacterGroup(0, {2});
    auto x = el(m, "dx1*dx2");
    EquivCycle plus;
    plus.roots.emplace_back(x, g.zero());
    EquivCycle minus;
    minus.roots.emplace_back(x, g.make({}, {1}));
    auto c = equiv_normal_form(m, g, plus, minus);
    EXPECT_EQ(c.virtual_rank(), 0);
    EXPECT_FALSE(c.is_zero());
    EXPECT_TRUE(equiv_normal_form(m, g, plus, plus).is_zero());
}

TEST(Equivariant, ExteriorSquareOfLabelledSum)
{
    auto m = builtin_model("torus2");
    auto g = CharacterGroup(1, {});
    auto x = el(m, "dx1*dx2");
    auto y = el(m, "2*dx1*dx2");
    auto a = g.make({1}, {});
    auto b = g.make({3}, {});
    EquivCycle e;
    e.roots = {{x, a}, {y, b}};
    auto sum = equiv_normal_form(m, g, e);
    EXPECT_EQ(equiv_lambda(2, sum), labelled_line(m, g, x + y, g.add(a, b)));
    EXPECT_TRUE(equiv_lambda(3, sum).is_zero());
}

TEST(Equivariant, AdamsOnLabelledLineIsTensorPower)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (const auto& g : default_groups()) {
            Rng rng = Rng::for_sample(63, 0);
            auto x = random_line_root(m, rng);
            auto c = g.random_character(rng, 2);
            auto L = labelled_line(m, g, x, c);
            auto power = equiv_one(m, g);
            for (long k = 1; k <= 4; ++k) {
                power = equiv_cycle_mul(power, L);
                EXPECT_EQ(equiv_adams(k, L), power) << name << " " << g.to_string();
                EXPECT_EQ(equiv_adams(k, L), labelled_line(m, g, x * Rational(k), g.multiple(k, c)));
            }
        }
    }
}

TEST(Equivariant, ChernSimonsPerCharacter)
{
    auto m = builtin_model("s2");
    auto g = CharacterGroup(0, {2});
    auto c0 = g.zero();
    auto c1 = g.make({}, {1});
    Rng rng = Rng::for_sample(64, 0);
    EquivCycle e;
    e.roots = {{random_line_root(m, rng), c0}, {random_line_root(m, rng), c1}, {random_line_root(m, rng), c1}};
    Perturbation p = random_perturbation(m, 3, rng);
    auto cs = equiv_chern_simons(e, p);
    auto ch0 = ch_Tg(m, e);
    auto ch1 = ch_Tg(m, perturb_roots(e, p));
    for (const auto& c : {c0, c1}) {
        GradedElement expected(m);
        for (std::size_t i = 0; i < e.roots.size(); ++i) {
            if (e.roots[i].second == c) {
                expected += exp_form(e.roots[i].first + differential(p.beta[i])) - exp_form(e.roots[i].first);
            }
        }
        EXPECT_EQ(differential(cs[c]), expected) << g.character_string(c);
        EXPECT_EQ(differential(cs[c]), ch1[c] - ch0[c]);
    }
}

// Property: forgetting the characters is a λ-ring map onto the non-equivariant classes.
TEST(Equivariant, ForgettingLabelsIsLambdaMap)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        for (const auto& g : default_groups()) {
            for (std::uint64_t i = 0; i < 6; ++i) {
                Rng rng = Rng::for_sample(65, i);
                auto a = random_equiv_class(m, g, rng);
                auto b = random_equiv_class(m, g, rng);
                EXPECT_EQ(forget_labels(equiv_cycle_mul(a, b)), cycle_mul(forget_labels(a), forget_labels(b)))
                    << name << " " << g.to_string();
                EXPECT_EQ(forget_labels(class_add(a, b)), class_add(forget_labels(a), forget_labels(b)));
                for (std::size_t k = 1; k <= 3; ++k) {
                    EXPECT_EQ(forget_labels(equiv_lambda(k, a)), cycle_lambda(k, forget_labels(a))) << name << k;
                }
                EXPECT_EQ(forget_labels(equiv_adams(2, a)), cycle_adams(2, forget_labels(a)));
            }
        }
    }
}

TEST(Harness, EquivariantAxiomsOnSmallSamples)
{
    VerifyOptions opt;
    opt.samples = 3;
    opt.seed = 5;
    opt.truncation = 4;
    opt.mul_order = 3;
    for (const auto& name : kModels) {
        for (const auto& g : default_groups()) {
            auto m = builtin_model(name);
            EXPECT_TRUE(verify_axioms(EquivContext{m, g}, VerifyMode::Lambda, opt).all_passed())
                << name << " " << g.to_string();
            EXPECT_TRUE(verify_axioms(GammaGContext{m, g}, VerifyMode::Lambda, opt).all_passed())
                << name << " " << g.to_string();
        }
    }
}
