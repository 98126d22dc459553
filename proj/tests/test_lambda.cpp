/**
 * @file test_lambda.cpp
 * @brief Witt-ring operations on 1 + tA[[t]], Adams operations from λ_t, and the axiom harness.
 */

#include <gtest/gtest.h>

#include <lambda_forge/gamma.hpp>
#include <lambda_forge/lambda.hpp>

using namespace lambda_forge;

namespace {

using QS = TruncSeries<RationalField>;

Rational q(long n, long d = 1) { return Rational(mpz_class(n), mpz_class(d)); }

/// prod (1 + x_i t) truncated at N: the λ_t of a sum of lines with the given roots.
QS from_roots(const std::vector<Rational>& xs, std::size_t N)
{
    std::vector<Rational> c(N + 1, q(0));
    c[0] = q(1);
    for (const auto& x : xs) {
        for (std::size_t k = N; k >= 1; --k) {
            c[k] += x * c[k - 1];
        }
    }
    return QS(RationalField{}, std::move(c));
}

std::vector<Rational> random_roots(Rng& rng, std::size_t count)
{
    std::vector<Rational> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(rng.small_rational(3, 2));
    }
    return out;
}

template <CommutativeRing R, class Gen>
TruncSeries<R> random_unit_series(const R& r, std::size_t N, Gen gen)
{
    std::vector<typename R::value_type> c{r.one()};
    for (std::size_t k = 1; k <= N; ++k) {
        c.push_back(gen());
    }
    return TruncSeries<R>(r, std::move(c));
}

/// The ring laws of (1 + tA[[t]], +~, x~) on one triple.
template <CommutativeRing R>
void expect_witt_laws(const TruncSeries<R>& i, const TruncSeries<R>& j, const TruncSeries<R>& k)
{
    const std::size_t N = i.order();
    EXPECT_TRUE(witt_add(i, j).equals(witt_add(j, i)));
    EXPECT_TRUE(witt_add(witt_add(i, j), k).equals(witt_add(i, witt_add(j, k))));
    EXPECT_TRUE(witt_add(i, witt_neg(i)).equals(TruncSeries<R>::one(i.ring(), N)));
    EXPECT_TRUE(witt_mul(i, j).equals(witt_mul(j, i)));
    EXPECT_TRUE(witt_mul(witt_mul(i, j), k).equals(witt_mul(i, witt_mul(j, k))));
    EXPECT_TRUE(witt_mul(i, witt_add(j, k)).equals(witt_add(witt_mul(i, j), witt_mul(i, k))));
    EXPECT_TRUE(witt_mul(i, one_plus_t(i.ring(), N)).equals(i));
}

} // namespace

TEST(Witt, ProductOfRootSetsIsPairwiseRootSet)
{
    const std::size_t N = 6;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng = Rng::for_sample(21, s);
        auto xs = random_roots(rng, static_cast<std::size_t>(rng.uniform(1, 3)));
        auto ys = random_roots(rng, static_cast<std::size_t>(rng.uniform(1, 3)));
        std::vector<Rational> pair;
        for (const auto& x : xs) {
            for (const auto& y : ys) {
                pair.push_back(x * y);
            }
        }
        EXPECT_TRUE(witt_mul(from_roots(xs, N), from_roots(ys, N)).equals(from_roots(pair, N)));
    }
}

TEST(Witt, ExteriorPowerOfRootSetIsSubsetProducts)
{
    const std::size_t N = 8;
    Rng rng = Rng::for_sample(22, 0);
    auto xs = random_roots(rng, 4);
    // λ~^2: all products x_i x_j (i < j)
    std::vector<Rational> pairs;
    for (std::size_t a = 0; a < xs.size(); ++a) {
        for (std::size_t b = a + 1; b < xs.size(); ++b) {
            pairs.push_back(xs[a] * xs[b]);
        }
    }
    auto l2 = witt_lambda(2, from_roots(xs, N));
    EXPECT_EQ(l2.order(), 4u);
    EXPECT_TRUE(l2.equals(from_roots(pairs, 4)));
    // a line has no exterior powers above 1
    auto l3 = witt_lambda(3, from_roots({q(5)}, 6));
    EXPECT_TRUE(l3.equals(QS::one(RationalField{}, 2)));
    EXPECT_TRUE(witt_lambda(0, from_roots(xs, N)).equals(one_plus_t(RationalField{}, N)));
    EXPECT_THROW(witt_lambda(9, from_roots(xs, N)), std::invalid_argument);
}

// Property: ring laws on seeded triples over Q.
TEST(Witt, RingLawsOverRationals)
{
    const std::size_t N = 6;
    for (std::uint64_t s = 0; s < 40; ++s) {
        Rng rng = Rng::for_sample(23, s);
        auto gen = [&] { return rng.small_rational(3, 3); };
        auto i = random_unit_series(RationalField{}, N, gen);
        auto j = random_unit_series(RationalField{}, N, gen);
        auto k = random_unit_series(RationalField{}, N, gen);
        expect_witt_laws(i, j, k);
    }
}

TEST(Witt, RingLawsOverGammaOfTorus)
{
    const std::size_t N = 6;
    auto m = builtin_model("torus4");
    GammaRing r{m};
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng rng = Rng::for_sample(24, s);
        auto gen = [&] { return random_gamma(m, rng, 1); };
        expect_witt_laws(random_unit_series(r, N, gen), random_unit_series(r, N, gen), random_unit_series(r, N, gen));
    }
}

TEST(Witt, RejectsNonUnitSeries)
{
    QS bad(RationalField{}, {q(2), q(1), q(0)});
    QS good = from_roots({q(1)}, 2);
    EXPECT_THROW(witt_mul(bad, good), std::invalid_argument);
    EXPECT_THROW(witt_add(good, bad), std::invalid_argument);
    EXPECT_THROW(witt_lambda(1, bad), std::invalid_argument);
}

TEST(Adams, LogDerivativeGivesPowerSums)
{
    const std::size_t N = 6;
    Rng rng = Rng::for_sample(25, 0);
    auto xs = random_roots(rng, 3);
    auto psi = adams_via_log(from_roots(xs, N));
    ASSERT_EQ(psi.size(), N);
    for (std::size_t k = 1; k <= N; ++k) {
        Rational p(0);
        for (const auto& x : xs) {
            p += pow(x, static_cast<unsigned>(k));
        }
        EXPECT_EQ(psi[k - 1], p) << "k=" << k;
    }
    EXPECT_TRUE(lambda_from_adams(RationalField{}, psi, N).equals(from_roots(xs, N)));
}

TEST(Adams, NewtonInversionNeedsQAlgebra)
{
    struct IntRing {
        using value_type = long;
        long zero() const { return 0; }
        long one() const { return 1; }
        long add(long a, long b) const { return a + b; }
        long neg(long a) const { return -a; }
        long mul(long a, long b) const { return a * b; }
        bool equal(long a, long b) const { return a == b; }
        std::string to_string(long a) const { return std::to_string(a); }
        bool operator==(const IntRing&) const = default;
    };
    // ψ over Z works since only the series inverse is used
    TruncSeries<IntRing> s(IntRing{}, {1, 3, 2, 0});
    auto psi = adams_via_log(s);
    EXPECT_EQ(psi, (std::vector<long>{3, 5, 9})); // roots 1 and 2: 1+2, 1+4, 1+8
    EXPECT_THROW(lambda_from_adams(IntRing{}, psi, 3), std::domain_error);
}

TEST(Harness, AdamsCriterionOnBinomialContext)
{
    VerifyOptions opt;
    opt.samples = 10;
    opt.truncation = 5;
    auto rep = verify_axioms(BinomialContext{}, VerifyMode::AdamsCriterion, opt);
    EXPECT_TRUE(rep.all_passed());
}

TEST(Harness, ReportJsonShape)
{
    VerifyOptions opt;
    opt.samples = 2;
    opt.seed = 9;
    opt.truncation = 3;
    auto rep = verify_axioms(PlantedFailureContext{}, VerifyMode::Lambda, opt);
    auto j = rep.to_json();
    EXPECT_EQ(j.at("mode"), "lambda");
    EXPECT_EQ(j.at("context"), "planted-failure(Q)");
    EXPECT_EQ(j.at("seed"), 9);
    EXPECT_EQ(j.at("truncation"), 3);
    ASSERT_TRUE(j.at("checks").is_array());
    bool any_fail = false;
    for (const auto& c : j.at("checks")) {
        EXPECT_TRUE(c.contains("axiom") && c.contains("instance") && c.contains("pass") && c.contains("witness"));
        if (!c.at("pass").get<bool>()) {
            any_fail = true;
            EXPECT_TRUE(c.at("witness").is_string());
        }
    }
    EXPECT_TRUE(any_fail);
    EXPECT_EQ(rep.to_json().dump(), j.dump());
}

TEST(Harness, SameSeedSameReport)
{
    VerifyOptions opt;
    opt.samples = 8;
    opt.seed = 3;
    opt.truncation = 4;
    auto a = verify_axioms(BinomialContext{}, VerifyMode::Lambda, opt).to_json().dump();
    auto b = verify_axioms(BinomialContext{}, VerifyMode::Lambda, opt).to_json().dump();
    EXPECT_EQ(a, b);
    opt.seed = 4;
    EXPECT_NE(verify_axioms(BinomialContext{}, VerifyMode::Lambda, opt).to_json().dump(), a);
}

TEST(Harness, ModeNames)
{
    EXPECT_EQ(parse_mode("pre-lambda"), VerifyMode::PreLambda);
    EXPECT_EQ(mode_name(VerifyMode::AdamsCriterion), "adams-criterion");
    EXPECT_THROW(parse_mode("beta"), std::invalid_argument);
}
