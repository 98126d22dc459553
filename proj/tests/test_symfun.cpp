/**
 * @file test_symfun.cpp
 * @brief Universal polynomials P_n, P_{n,m}, ν_k and their disk cache.
 *
 * The main oracle evaluates at random rational roots: with s_k = e_k(ξ) and
 * σ_k = e_k(ζ), P_n must equal the t^n coefficient of prod (1 + ξ_i ζ_j t),
 * computed here by plain polynomial multiplication in t.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <lambda_forge/cache.hpp>
#include <lambda_forge/symfun.hpp>

using namespace lambda_forge;

namespace {

using QVec = std::vector<Rational>;

/// Coefficients of prod (1 + x_i t), i.e. 1, e_1, e_2, ...
QVec elementary_values(const QVec& xs)
{
    QVec e{Rational(1)};
    for (const auto& x : xs) {
        e.push_back(Rational(0));
        for (std::size_t k = e.size() - 1; k >= 1; --k) {
            e[k] += x * e[k - 1];
        }
    }
    return e;
}

QVec random_roots(Rng& rng, std::size_t count)
{
    QVec out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(rng.small_rational(5, 4));
    }
    return out;
}

std::map<std::string, Rational> assign_family(std::string (*name)(unsigned), const QVec& e, unsigned upto)
{
    std::map<std::string, Rational> a;
    for (unsigned k = 1; k <= upto; ++k) {
        a[name(k)] = k < e.size() ? e[k] : Rational(0);
    }
    return a;
}

/// All m-element subset products of xs.
void subset_products(const QVec& xs, std::size_t m, std::size_t start, Rational acc, QVec& out)
{
    if (m == 0) {
        out.push_back(acc);
        return;
    }
    for (std::size_t i = start; i + m <= xs.size(); ++i) {
        subset_products(xs, m - 1, i + 1, acc * xs[i], out);
    }
}

MultiPoly eval_poly(const MultiPoly& p, const std::map<std::string, MultiPoly>& a) { return eval_in_ring(p, a, PolyRing{}); }

} // namespace

TEST(UniversalPolys, SmallCasesByHand)
{
    auto& t = UniversalTable::instance();
    EXPECT_EQ(t.Pn(1), MultiPoly::parse("s1*σ1"));
    EXPECT_EQ(t.Pn(2), MultiPoly::parse("s1^2*σ2 + s2*σ1^2 - 2*s2*σ2"));
    EXPECT_EQ(t.Pn(2).to_string(), "s1²σ2 + s2σ1² − 2s2σ2");
    EXPECT_EQ(t.Pnm(2, 2), MultiPoly::parse("s1*s3 - s4"));
    EXPECT_EQ(t.nu(2), MultiPoly::parse("s1^2 - 2*s2"));
    EXPECT_EQ(t.nu(3), MultiPoly::parse("s1^3 - 3*s1*s2 + 3*s3"));
}

// Property: re-expansion at random rational roots, n <= 5.
TEST(UniversalPolys, PnReexpandsAtRandomRoots)
{
    for (unsigned n = 1; n <= 5; ++n) {
        const MultiPoly pn = UniversalTable::instance().Pn(n);
        for (std::uint64_t trial = 0; trial < 6; ++trial) {
            Rng rng = Rng::for_sample(100 + n, trial);
            QVec xi = random_roots(rng, n);
            QVec zeta = random_roots(rng, n);
            QVec pairwise;
            for (const auto& a : xi) {
                for (const auto& b : zeta) {
                    pairwise.push_back(a * b);
                }
            }
            Rational expected = elementary_values(pairwise)[n];
            auto a = assign_family(s_var, elementary_values(xi), n);
            auto b = assign_family(sigma_var, elementary_values(zeta), n);
            a.insert(b.begin(), b.end());
            EXPECT_EQ(eval_in_ring(pn, a, RationalField{}), expected) << "n=" << n << " trial " << trial;
        }
    }
}

TEST(UniversalPolys, PnmReexpandsAtRandomRoots)
{
    for (unsigned n = 1; n <= 4; ++n) {
        for (unsigned m = 1; n * m <= 8; ++m) {
            const MultiPoly p = UniversalTable::instance().Pnm(n, m);
            for (std::uint64_t trial = 0; trial < 3; ++trial) {
                Rng rng = Rng::for_sample(200 + 10 * n + m, trial);
                QVec xi = random_roots(rng, n * m);
                QVec prods;
                subset_products(xi, m, 0, Rational(1), prods);
                Rational expected = elementary_values(prods)[n];
                EXPECT_EQ(eval_in_ring(p, assign_family(s_var, elementary_values(xi), n * m), RationalField{}),
                          expected)
                    << "n=" << n << " m=" << m;
            }
        }
    }
}

TEST(UniversalPolys, NewtonPowerSums)
{
    for (unsigned k = 1; k <= 6; ++k) {
        Rng rng = Rng::for_sample(300, k);
        QVec xi = random_roots(rng, k + 1);
        Rational expected(0);
        for (const auto& x : xi) {
            expected += pow(x, k);
        }
        EXPECT_EQ(eval_in_ring(UniversalTable::instance().nu(k), assign_family(s_var, elementary_values(xi), k),
                               RationalField{}),
                  expected);
    }
}

TEST(UniversalPolys, WeightsAreHomogeneous)
{
    for (unsigned n = 1; n <= 5; ++n) {
        const auto pn = UniversalTable::instance().Pn(n);
        EXPECT_EQ(family_weight(pn, var_family(s_var, n)), n);
        EXPECT_EQ(family_weight(pn, var_family(sigma_var, n)), n);
        EXPECT_TRUE(pn.has_integer_coefficients());
    }
    for (unsigned n = 1; n <= 4; ++n) {
        for (unsigned m = 1; n * m <= 8; ++m) {
            const auto p = UniversalTable::instance().Pnm(n, m);
            EXPECT_EQ(family_weight(p, var_family(s_var, n * m)), n * m);
            EXPECT_TRUE(p.has_integer_coefficients());
        }
    }
}

TEST(UniversalPolys, SpecializationToALine)
{
    for (unsigned n = 1; n <= 5; ++n) {
        std::map<std::string, MultiPoly> a;
        a[s_var(1)] = MultiPoly::variable(s_var(1));
        for (unsigned k = 2; k <= n; ++k) {
            a[s_var(k)] = MultiPoly();
        }
        for (unsigned k = 1; k <= n; ++k) {
            a[sigma_var(k)] = MultiPoly::variable(sigma_var(k));
        }
        EXPECT_EQ(eval_poly(UniversalTable::instance().Pn(n), a),
                  MultiPoly::variable(s_var(1), n) * MultiPoly::variable(sigma_var(n)));
    }
    for (unsigned n = 1; n <= 4; ++n) {
        for (unsigned m = 2; n * m <= 8; ++m) {
            std::map<std::string, MultiPoly> a;
            a[s_var(1)] = MultiPoly::variable(s_var(1));
            for (unsigned k = 2; k <= n * m; ++k) {
                a[s_var(k)] = MultiPoly();
            }
            EXPECT_TRUE(eval_poly(UniversalTable::instance().Pnm(n, m), a).is_zero()) << n << "," << m;
        }
    }
}

TEST(UniversalPolys, DegenerateIndices)
{
    for (unsigned k = 1; k <= 6; ++k) {
        EXPECT_EQ(UniversalTable::instance().Pnm(k, 1), MultiPoly::variable(s_var(k)));
        EXPECT_EQ(UniversalTable::instance().Pnm(1, k), MultiPoly::variable(s_var(k)));
    }
}

TEST(UniversalPolys, StableInNumberOfVariables)
{
    EXPECT_EQ(compute_Pn(3, 5).poly, compute_Pn(3).poly);
    EXPECT_EQ(compute_Pnm(2, 2, 6).poly, compute_Pnm(2, 2).poly);
    EXPECT_THROW(compute_Pn(3, 2), std::invalid_argument);
}

class CacheTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = std::filesystem::temp_directory_path() /
              ("lf-cache-test-" + std::to_string(::getpid()) + "-" +
               ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::remove_all(dir);
    }
    void TearDown() override { std::filesystem::remove_all(dir); }
    std::filesystem::path dir;
};

TEST_F(CacheTest, StoreLoadStats)
{
    PolyCache c(dir);
    auto p = MultiPoly::parse("s1*s3 - s4");
    EXPECT_FALSE(c.load("Pnm/2/2").has_value());
    c.store("Pnm/2/2", p);
    auto back = c.load("Pnm/2/2");
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, p);
    EXPECT_EQ(c.hits(), 1u);
    auto st = c.stats();
    EXPECT_EQ(st.entries, 1u);
    ASSERT_EQ(st.keys.size(), 1u);
    EXPECT_EQ(st.keys[0], "Pnm/2/2");
    EXPECT_EQ(c.clear(), 1u);
    EXPECT_EQ(c.stats().entries, 0u);
}

TEST_F(CacheTest, CorruptEntryIsDetectedAndRewritten)
{
    PolyCache c(dir);
    c.store("Pn/3", UniversalTable::instance().Pn(3));
    {
        // flip a coefficient but keep valid JSON
        auto path = c.path_of("Pn/3");
        std::ifstream in(path);
        auto j = nlohmann::json::parse(in);
        j["poly"]["terms"][0]["num"] = "12345";
        std::ofstream(path) << j.dump();
    }
    PolyCache fresh(dir);
    EXPECT_FALSE(fresh.load("Pn/3").has_value());
    ASSERT_EQ(fresh.corrupt_keys().size(), 1u);
    EXPECT_EQ(fresh.stats().invalid.size(), 1u);

    // the disk copy is read before the in-memory table, so the bad entry is noticed and rewritten
    PolyCache fixer(dir);
    EXPECT_EQ(cached_universal(&fixer, UniversalKind::Pn, 3).poly, UniversalTable::instance().Pn(3));
    EXPECT_EQ(fixer.corrupt_keys(), std::vector<std::string>{"Pn/3"});
    PolyCache again(dir);
    auto p = again.load("Pn/3");
    ASSERT_TRUE(p.has_value());
    EXPECT_EQ(*p, UniversalTable::instance().Pn(3));
    EXPECT_TRUE(again.corrupt_keys().empty());
}

TEST_F(CacheTest, GarbageFileCountsAsCorrupt)
{
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "nu_4.json") << "not json";
    PolyCache c(dir);
    EXPECT_FALSE(c.load("nu/4").has_value());
    EXPECT_EQ(c.corrupt_keys(), std::vector<std::string>{"nu/4"});
}

TEST_F(CacheTest, ResolveDirPrefersFlag)
{
    EXPECT_EQ(PolyCache::resolve_dir("/x/y"), std::filesystem::path("/x/y"));
    ::setenv("LAMBDA_FORGE_CACHE", "/from/env", 1);
    EXPECT_EQ(PolyCache::resolve_dir(""), std::filesystem::path("/from/env"));
}
