/**
 * @file test_gamma.cpp
 * @brief The twisted ring Γ(B), its Adams operations and λ-structure.
 */

#include <gtest/gtest.h>

#include <lambda_forge/gamma.hpp>

using namespace lambda_forge;

namespace {

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }

GradedElement el(const ModelPtr& m, const std::string& text) { return GradedElement::parse(m, text); }

GammaElement even(const ModelPtr& m, const std::string& text) { return GammaElement::from_even(el(m, text)); }

GammaElement odd(const ModelPtr& m, const std::string& text)
{
    return GammaElement::from_odd(OddCoset::normalize(el(m, text)));
}

const std::vector<std::string> kModels = {"torus4", "s2", "cp3", "heisenberg"};

} // namespace

TEST(Gamma, ConstructorValidatesEvenPart)
{
    auto m = builtin_model("s2");
    EXPECT_THROW(GammaElement(el(m, "y"), OddCoset(m)), std::invalid_argument); // odd degree
    auto cone = build_model(ModelSpec::from_json(nlohmann::json::parse(
        R"({"name":"cone","top_degree":3,"generators":[{"name":"a","degree":2},{"name":"b","degree":3}],
            "differential":[{"of":"a","value":"b"}]})")));
    EXPECT_THROW(GammaElement(el(cone, "a"), OddCoset(cone)), std::invalid_argument); // not closed
    auto h = builtin_model("heisenberg");
    EXPECT_NO_THROW(GammaElement(el(h, "1 + e1*e2"), OddCoset(h)));
}

TEST(Gamma, TwistedProductByHand)
{
    // heisenberg: (0, e3)*(0, e1) = (0, -d(e3)∧e1) = (0, -e1 e2 e1) = 0; (0, e3)*(0, e3) = (0, -e1 e2 e3)
    auto h = builtin_model("heisenberg");
    auto a = odd(h, "e3");
    auto prod = gamma_mul(a, a);
    EXPECT_TRUE(prod.even().is_zero());
    EXPECT_EQ(prod.odd(), OddCoset::normalize(el(h, "-e1*e2*e3")));
    EXPECT_TRUE(gamma_mul(a, odd(h, "e1")).is_zero());
    // (1 + e1e2, 0) * (0, e3) = (0, e3 + e1 e2 e3)
    EXPECT_EQ(gamma_mul(even(h, "1 + e1*e2"), a).odd(), OddCoset::normalize(el(h, "e3 + e1*e2*e3")));
}

// Property: Γ is a commutative ring with unit.
TEST(Gamma, RingLawsOnRandomElements)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        GammaRing r{m};
        for (std::uint64_t i = 0; i < 15; ++i) {
            Rng rng = Rng::for_sample(31, i);
            auto a = random_gamma(m, rng);
            auto b = random_gamma(m, rng);
            auto c = random_gamma(m, rng);
            EXPECT_EQ(r.mul(a, b), r.mul(b, a)) << name;
            EXPECT_EQ(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c))) << name;
            EXPECT_EQ(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c))) << name;
            EXPECT_EQ(r.mul(a, r.one()), a) << name;
        }
    }
}

TEST(Gamma, AdamsOperationsAreRingMapsAndCompose)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        GammaRing r{m};
        for (std::uint64_t i = 0; i < 10; ++i) {
            Rng rng = Rng::for_sample(32, i);
            auto a = random_gamma(m, rng);
            auto b = random_gamma(m, rng);
            for (long k = 1; k <= 4; ++k) {
                EXPECT_EQ(gamma_adams(k, r.mul(a, b)), r.mul(gamma_adams(k, a), gamma_adams(k, b))) << name;
                EXPECT_EQ(gamma_adams(k, r.add(a, b)), r.add(gamma_adams(k, a), gamma_adams(k, b))) << name;
                EXPECT_EQ(gamma_adams(2, gamma_adams(k, a)), gamma_adams(2 * k, a)) << name;
            }
            EXPECT_EQ(gamma_adams(1, a), a);
        }
    }
    EXPECT_THROW(gamma_adams(0, GammaRing{builtin_model("s2")}.one()), std::invalid_argument);
}

TEST(Gamma, LambdaOfIntegersIsBinomial)
{
    auto m = builtin_model("cp3");
    GammaRing r{m};
    for (long n = -3; n <= 4; ++n) {
        auto x = GammaElement::from_even(GradedElement::scalar(m, q(n)));
        auto s = gamma_lambda_series(x, 5);
        for (std::size_t k = 0; k <= 5; ++k) {
            // binom(n, k) for any integer n
            Rational b(1);
            for (std::size_t j = 0; j < k; ++j) {
                b = b * (q(n) - q(static_cast<long>(j))) / q(static_cast<long>(j + 1));
            }
            EXPECT_EQ(s[k], GammaElement::from_even(GradedElement::scalar(m, b))) << n << " " << k;
        }
    }
}

TEST(Gamma, LambdaOfLineClassIsOnePlusLineT)
{
    for (const std::string name : {"cp3", "torus4", "s2"}) {
        auto m = builtin_model(name);
        for (std::uint64_t i = 0; i < 5; ++i) {
            Rng rng = Rng::for_sample(33, i);
            auto line = GammaElement::from_even(exp_form(random_closed(m, 2, rng)));
            auto s = gamma_lambda_series(line, 4);
            EXPECT_EQ(s[1], line);
            for (std::size_t k = 2; k <= 4; ++k) {
                EXPECT_TRUE(s[k].is_zero()) << name << " k=" << k;
            }
        }
    }
}

TEST(Gamma, LambdaOfSquareZeroOddClass)
{
    // on a torus d = 0, so (0, φ)^2 = 0 and λ^k(0, φ) = (0, (-1)^{k-1} Ψ^k φ / k)
    auto m = builtin_model("torus4");
    for (std::uint64_t i = 0; i < 5; ++i) {
        Rng rng = Rng::for_sample(34, i);
        auto phi = random_odd(m, rng);
        auto x = GammaElement::from_odd(OddCoset::normalize(phi));
        auto s = gamma_lambda_series(x, 4);
        for (long k = 1; k <= 4; ++k) {
            Rational c = q(k % 2 == 1 ? 1 : -1, k);
            EXPECT_EQ(s[static_cast<std::size_t>(k)], GammaElement::from_odd(OddCoset::normalize(scale_by_weight(phi, k) * c)));
        }
    }
}

TEST(Gamma, RestrictionToEvenIsLambdaHomomorphism)
{
    for (const auto& name : kModels) {
        auto m = builtin_model(name);
        GammaRing r{m};
        for (std::uint64_t i = 0; i < 10; ++i) {
            Rng rng = Rng::for_sample(35, i);
            auto a = random_gamma(m, rng);
            auto b = random_gamma(m, rng);
            EXPECT_EQ(even_restriction_p(r.mul(a, b)), wedge(a.even(), b.even()));
            for (std::size_t n = 1; n <= 3; ++n) {
                EXPECT_EQ(even_restriction_p(gamma_lambda(n, a)), zeven_lambda(n, a.even())) << name;
            }
            EXPECT_EQ(even_restriction_p(gamma_adams(3, a)), zeven_adams(3, a.even()));
        }
    }
}

TEST(Gamma, VerifyLambdaAxiomsSmall)
{
    VerifyOptions opt;
    opt.samples = 4;
    opt.seed = 2;
    opt.truncation = 4;
    for (const auto& name : kModels) {
        auto rep = verify_axioms(GammaContext{builtin_model(name)}, VerifyMode::Lambda, opt);
        EXPECT_TRUE(rep.all_passed()) << name;
        auto rz = verify_axioms(ZEvenContext{builtin_model(name)}, VerifyMode::AdamsCriterion, opt);
        EXPECT_TRUE(rz.all_passed()) << name;
    }
}
