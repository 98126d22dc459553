#pragma once

/**
 * @file lambda.hpp
 * @brief The Witt-style ring 1 + A[[t]]^+, Adams/λ conversion and the
 *        axiom-verification harness for λ-ring contexts.
 */

#include <concepts>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ring.hpp"
#include "series.hpp"
#include "symfun.hpp"

namespace lambda_forge {

/// Elements of 1 + A[[t]]^+ are TruncSeries with constant term 1.
template <CommutativeRing R>
using LambdaSeries = TruncSeries<R>;

template <CommutativeRing R>
void require_unit_constant(const TruncSeries<R>& s, const char* what)
{
    if (!s.ring().equal(s[0], s.ring().one())) {
        throw std::invalid_argument(std::string(what) + ": constant term must be 1, got " + s.ring().to_string(s[0]));
    }
}

/// The series 1 + t.
template <CommutativeRing R>
TruncSeries<R> one_plus_t(const R& ring, std::size_t order)
{
    std::vector<typename R::value_type> c(order + 1, ring.zero());
    c[0] = ring.one();
    c[1] = ring.one();
    return TruncSeries<R>(ring, std::move(c));
}

/// I +~ J := I * J.
template <CommutativeRing R>
TruncSeries<R> witt_add(const TruncSeries<R>& i, const TruncSeries<R>& j)
{
    require_unit_constant(i, "witt_add");
    require_unit_constant(j, "witt_add");
    return series_mul(i, j);
}

/// The additive inverse for +~, i.e. the series inverse.
template <CommutativeRing R>
TruncSeries<R> witt_neg(const TruncSeries<R>& i)
{
    return series_invert(i);
}

/// I x~ J: coefficient n is P_n(a_1..a_n; b_1..b_n).
template <CommutativeRing R>
TruncSeries<R> witt_mul(const TruncSeries<R>& i, const TruncSeries<R>& j)
{
    require_unit_constant(i, "witt_mul");
    require_unit_constant(j, "witt_mul");
    detail::require_compatible(i, j);
    const R& r = i.ring();
    const std::size_t n_max = i.order();
    std::map<std::string, typename R::value_type> assignment;
    for (std::size_t k = 1; k <= n_max; ++k) {
        assignment.emplace(s_var(static_cast<unsigned>(k)), i[k]);
        assignment.emplace(sigma_var(static_cast<unsigned>(k)), j[k]);
    }
    std::vector<typename R::value_type> c(n_max + 1, r.zero());
    c[0] = r.one();
    for (std::size_t n = 1; n <= n_max; ++n) {
        c[n] = eval_in_ring(UniversalTable::instance().Pn(static_cast<unsigned>(n)), assignment, r);
    }
    return TruncSeries<R>(r, std::move(c));
}

/**
 * λ~^m(I): coefficient n is P_{n,m}(a_1..a_{nm}). Coefficient n needs a_{nm},
 * so the result is known to order floor(N/m); λ~^0(I) = 1 + t at order N.
 */
template <CommutativeRing R>
TruncSeries<R> witt_lambda(std::size_t m, const TruncSeries<R>& i)
{
    require_unit_constant(i, "witt_lambda");
    const R& r = i.ring();
    const std::size_t n_total = i.order();
    if (m == 0) {
        return one_plus_t(r, n_total);
    }
    if (m > n_total) {
        throw std::invalid_argument("witt_lambda: λ~^" + std::to_string(m) + " needs truncation order >= " +
                                    std::to_string(m) + ", have " + std::to_string(n_total));
    }
    const std::size_t order = n_total / m;
    std::map<std::string, typename R::value_type> assignment;
    for (std::size_t k = 1; k <= order * m; ++k) {
        assignment.emplace(s_var(static_cast<unsigned>(k)), i[k]);
    }
    std::vector<typename R::value_type> c(order + 1, r.zero());
    c[0] = r.one();
    for (std::size_t n = 1; n <= order; ++n) {
        c[n] = eval_in_ring(UniversalTable::instance().Pnm(static_cast<unsigned>(n), static_cast<unsigned>(m)),
                            assignment, r);
    }
    return TruncSeries<R>(r, std::move(c));
}

/**
 * Ψ^1..Ψ^N from the logarithmic derivative: d/dt log s = s'/s has
 * coefficients (-1)^n Ψ^{n+1}. Only s' and the series inverse are needed,
 * so no division by integers takes place.
 */
template <CommutativeRing R>
std::vector<typename R::value_type> adams_via_log(const TruncSeries<R>& s)
{
    require_unit_constant(s, "adams_via_log");
    const R& r = s.ring();
    if (s.order() == 1) {
        return {s[1]};
    }
    auto logd = series_mul(series_derivative(s), series_truncate(series_invert(s), s.order() - 1));
    std::vector<typename R::value_type> psi;
    for (std::size_t n = 0; n < s.order(); ++n) {
        psi.push_back(n % 2 == 0 ? logd[n] : r.neg(logd[n]));
    }
    return psi;
}

/**
 * exp(sum_k (-1)^{k-1} Ψ^k t^k / k) truncated at N, through the Newton
 * recurrence n e_n = sum_k (-1)^{k-1} Ψ^k e_{n-k}. Needs a Q-algebra.
 */
template <CommutativeRing R>
TruncSeries<R> lambda_from_adams(const R& r, const std::vector<typename R::value_type>& psi, std::size_t order)
{
    if constexpr (!RationalAlgebra<R>) {
        throw std::domain_error("lambda_from_adams needs division by integers; ring is not a Q-algebra");
    } else {
        if (psi.size() < order) {
            throw std::invalid_argument("lambda_from_adams: need Ψ^1..Ψ^" + std::to_string(order) + ", got " +
                                        std::to_string(psi.size()));
        }
        std::vector<typename R::value_type> e(order + 1, r.zero());
        e[0] = r.one();
        for (std::size_t n = 1; n <= order; ++n) {
            auto acc = r.zero();
            for (std::size_t k = 1; k <= n; ++k) {
                auto term = r.mul(psi[k - 1], e[n - k]);
                acc = k % 2 == 1 ? r.add(acc, term) : ring_sub(r, acc, term);
            }
            e[n] = r.scale(acc, Rational(1) / Rational(static_cast<long>(n)));
        }
        return TruncSeries<R>(r, std::move(e));
    }
}

// ---------------------------------------------------------------------------
// Contexts and the harness

/**
 * A λ-context supplies a ring, λ_t of an element to a requested order, and a
 * seeded sample generator.
 */
template <class C>
concept LambdaContext = requires(const C& c, const typename C::value_type& x, Rng& rng, std::size_t n) {
    typename C::ring_type;
    requires CommutativeRing<typename C::ring_type>;
    requires std::same_as<typename C::value_type, typename C::ring_type::value_type>;
    { c.ring() } -> std::convertible_to<typename C::ring_type>;
    { c.lambda_series(x, n) } -> std::convertible_to<TruncSeries<typename C::ring_type>>;
    { c.sample(rng) } -> std::convertible_to<typename C::value_type>;
    { c.name() } -> std::convertible_to<std::string>;
};

/// λ_t(x) truncated at N.
template <LambdaContext C>
TruncSeries<typename C::ring_type> lambda_t(const C& ctx, const typename C::value_type& x, std::size_t order)
{
    return ctx.lambda_series(x, order);
}

/// λ^n(x) alone.
template <LambdaContext C>
typename C::value_type lambda_op(const C& ctx, std::size_t n, const typename C::value_type& x)
{
    if (n == 0) {
        return ctx.ring().one();
    }
    return ctx.lambda_series(x, n)[n];
}

enum class VerifyMode { PreLambda, Lambda, AdamsCriterion };

inline std::string mode_name(VerifyMode m)
{
    switch (m) {
    case VerifyMode::PreLambda:
        return "pre-lambda";
    case VerifyMode::Lambda:
        return "lambda";
    case VerifyMode::AdamsCriterion:
        return "adams-criterion";
    }
    return "?";
}

inline VerifyMode parse_mode(const std::string& s)
{
    if (s == "pre-lambda") {
        return VerifyMode::PreLambda;
    }
    if (s == "lambda") {
        return VerifyMode::Lambda;
    }
    if (s == "adams" || s == "adams-criterion") {
        return VerifyMode::AdamsCriterion;
    }
    throw std::invalid_argument("unknown verification mode '" + s + "'");
}

struct AxiomCheck {
    std::string axiom;
    std::string instance;
    bool pass = true;
    std::string witness; // empty when passing
};

struct AxiomReport {
    std::string mode;
    std::string context;
    std::uint64_t seed = 0;
    std::size_t truncation = 0;
    std::vector<AxiomCheck> checks;

    bool all_passed() const
    {
        for (const auto& c : checks) {
            if (!c.pass) {
                return false;
            }
        }
        return true;
    }

    std::size_t failures() const
    {
        std::size_t n = 0;
        for (const auto& c : checks) {
            n += c.pass ? 0 : 1;
        }
        return n;
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["mode"] = mode;
        j["context"] = context;
        j["seed"] = seed;
        j["truncation"] = truncation;
        auto arr = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json e;
            e["axiom"] = c.axiom;
            e["instance"] = c.instance;
            e["pass"] = c.pass;
            e["witness"] = c.pass ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(c.witness);
            arr.push_back(std::move(e));
        }
        j["checks"] = std::move(arr);
        return j;
    }
};

struct VerifyOptions {
    std::size_t samples = 50;
    std::uint64_t seed = 0;
    std::size_t truncation = 6;
    std::size_t mul_order = 0;  // order for λ_t(xy) = λ_t(x) x~ λ_t(y); 0 means the truncation
    std::size_t comp_limit = 0; // largest nm for λ_t(λ^n x) = λ~^n(λ_t x); 0 means the truncation
};

namespace detail {

template <CommutativeRing R>
std::string series_witness(const TruncSeries<R>& lhs, const TruncSeries<R>& rhs)
{
    std::size_t k = lhs.first_difference(rhs);
    const R& r = lhs.ring();
    return "coefficient t^" + std::to_string(k) + ": " + r.to_string(lhs[k]) + " ≠ " + r.to_string(rhs[k]);
}

} // namespace detail

/**
 * Checks the axioms of `mode` on `samples` seeded elements. Sample i draws
 * from its own stream Rng::for_sample(seed, i), so entries depend only on
 * (seed, i) and the report is identical across runs.
 */
template <LambdaContext C>
AxiomReport verify_axioms(const C& ctx, VerifyMode mode, const VerifyOptions& opt)
{
    using R = typename C::ring_type;
    using V = typename C::value_type;
    const R r = ctx.ring();
    const std::size_t N = opt.truncation;
    if (N < 1) {
        throw std::invalid_argument("truncation order must be >= 1");
    }
    AxiomReport rep;
    rep.mode = mode_name(mode);
    rep.context = ctx.name();
    rep.seed = opt.seed;
    rep.truncation = N;

    auto record = [&](const std::string& axiom, const std::string& instance, bool pass, std::string witness) {
        rep.checks.push_back({axiom, instance, pass, pass ? std::string() : std::move(witness)});
    };
    auto compare_series = [&](const std::string& axiom, const std::string& instance, const TruncSeries<R>& lhs,
                              const TruncSeries<R>& rhs, const std::string& prefix) {
        bool ok = lhs.first_difference(rhs) == TruncSeries<R>::npos;
        record(axiom, instance, ok, ok ? "" : prefix + detail::series_witness(lhs, rhs));
    };
    auto compare_values = [&](const std::string& axiom, const std::string& instance, const V& lhs, const V& rhs,
                              const std::string& prefix) {
        bool ok = r.equal(lhs, rhs);
        record(axiom, instance, ok, ok ? "" : prefix + r.to_string(lhs) + " ≠ " + r.to_string(rhs));
    };

    // fixed instances
    if (mode != VerifyMode::AdamsCriterion) {
        compare_series("lambda_t(0) = 1", "0", ctx.lambda_series(r.zero(), N), TruncSeries<R>::one(r, N), "");
    }
    if (mode == VerifyMode::Lambda) {
        compare_series("lambda_t(1) = 1 + t", "1", ctx.lambda_series(r.one(), N), one_plus_t(r, N), "");
    }
    if (mode == VerifyMode::AdamsCriterion) {
        auto psi_one = adams_via_log(ctx.lambda_series(r.one(), N));
        for (std::size_t n = 1; n <= N; ++n) {
            compare_values("psi^n(1) = 1", "n=" + std::to_string(n), psi_one[n - 1], r.one(), "");
        }
    }

    const std::size_t mul_order = opt.mul_order == 0 ? N : std::min(opt.mul_order, N);
    const std::size_t comp_limit = opt.comp_limit == 0 ? N : std::min(opt.comp_limit, N);

    for (std::size_t i = 0; i < opt.samples; ++i) {
        Rng rng = Rng::for_sample(opt.seed, i);
        const V x = ctx.sample(rng);
        const V y = ctx.sample(rng);
        const std::string tag = "sample " + std::to_string(i);
        const std::string xs = "x = " + r.to_string(x) + "; ";
        const std::string xys = "x = " + r.to_string(x) + ", y = " + r.to_string(y) + "; ";
        auto lx = ctx.lambda_series(x, N);
        auto ly = ctx.lambda_series(y, N);

        if (mode == VerifyMode::PreLambda || mode == VerifyMode::Lambda) {
            compare_values("lambda^0(x) = 1", tag, lx[0], r.one(), xs);
            compare_values("lambda^1(x) = x", tag, lx[1], x, xs);
            compare_series("lambda_t(x+y) = lambda_t(x) lambda_t(y)", tag, ctx.lambda_series(r.add(x, y), N),
                           series_mul(lx, ly), xys);
        }
        if (mode == VerifyMode::Lambda) {
            auto lhs = ctx.lambda_series(r.mul(x, y), mul_order);
            auto rhs = witt_mul(series_truncate(lx, mul_order), series_truncate(ly, mul_order));
            compare_series("lambda_t(xy) = lambda_t(x) x~ lambda_t(y)", tag, lhs, rhs, xys);
            for (std::size_t n = 1; n <= comp_limit; ++n) {
                const std::size_t order = comp_limit / n;
                auto inner = n <= N ? lx[n] : lambda_op(ctx, n, x);
                auto lhs_c = ctx.lambda_series(inner, order);
                auto rhs_c = witt_lambda(n, series_truncate(lx, order * n));
                compare_series("lambda_t(lambda^n x) = lambda~^n(lambda_t x)", tag + ", n=" + std::to_string(n),
                               lhs_c, rhs_c, xs);
            }
        }
        if (mode == VerifyMode::AdamsCriterion) {
            auto px = adams_via_log(lx);
            auto py = adams_via_log(ly);
            auto psum = adams_via_log(ctx.lambda_series(r.add(x, y), N));
            auto pprod = adams_via_log(ctx.lambda_series(r.mul(x, y), N));
            for (std::size_t n = 1; n <= N; ++n) {
                const std::string inst = tag + ", n=" + std::to_string(n);
                compare_values("psi^n(x+y) = psi^n(x) + psi^n(y)", inst, psum[n - 1], r.add(px[n - 1], py[n - 1]),
                               xys);
                compare_values("psi^n(xy) = psi^n(x) psi^n(y)", inst, pprod[n - 1], r.mul(px[n - 1], py[n - 1]),
                               xys);
            }
            for (std::size_t m = 1; m <= N; ++m) {
                auto pm = adams_via_log(ctx.lambda_series(px[m - 1], N / m));
                for (std::size_t n = 1; n * m <= N; ++n) {
                    compare_values("psi^n(psi^m(x)) = psi^(nm)(x)",
                                   tag + ", n=" + std::to_string(n) + ", m=" + std::to_string(m), pm[n - 1],
                                   px[n * m - 1], xs);
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Small reference contexts

/// Q with λ_t(x) = (1 + t)^x, i.e. λ^n(x) = binom(x, n).
struct BinomialContext {
    using ring_type = RationalField;
    using value_type = Rational;

    RationalField ring() const { return {}; }
    std::string name() const { return "binomial(Q)"; }

    TruncSeries<RationalField> lambda_series(const Rational& x, std::size_t order) const
    {
        std::vector<Rational> c(order + 1, Rational(0));
        c[0] = Rational(1);
        for (std::size_t n = 1; n <= order; ++n) {
            c[n] = c[n - 1] * (x - Rational(static_cast<long>(n - 1))) / Rational(static_cast<long>(n));
        }
        return TruncSeries<RationalField>(RationalField{}, std::move(c));
    }

    Rational sample(Rng& rng) const { return rng.small_rational(4, 3); }
};

/// λ^n(x) := 0 for n >= 1: violates λ^1 = id, used to exercise failure reporting.
struct PlantedFailureContext {
    using ring_type = RationalField;
    using value_type = Rational;

    RationalField ring() const { return {}; }
    std::string name() const { return "planted-failure(Q)"; }

    TruncSeries<RationalField> lambda_series(const Rational&, std::size_t order) const
    {
        return TruncSeries<RationalField>::one(RationalField{}, order);
    }

    Rational sample(Rng& rng) const
    {
        Rational q = rng.small_rational(5, 1);
        return q.is_zero() ? Rational(1) : q;
    }
};

} // namespace lambda_forge
