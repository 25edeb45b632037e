#include <doctest.h>

#include <random>

#include "oracle.hpp"

#include <hps/algebra.hpp>

using namespace hps;

namespace
{

ContextPtr ctx8() { return make_context(EpsGrid::decades(1, 8, 1)); }

GenNum net(const std::string &text, const NetContext &c)
{
    return GenNum::from_expr(NetExpr::parse(text, ExprContext::Net), c);
}

HpsCoefficients co(const ContextPtr &c, const std::string &e) { return HpsCoefficients::from_expr(c, e); }

HpsCoefficients seq(const ContextPtr &c, std::vector<long> head)
{
    return HpsCoefficients::from_sequence(
        c, [head](std::size_t n) { return n < head.size() ? Real(head[n]) : Real(0); }, "finite");
}

GenNum limit_at(const HpsCoefficients &a, const std::string &x)
{
    const auto &c = a.context();
    return series_limit(HpsSeries(a, GenNum::constant(Real(0), c.size())), net(x, c));
}

void check_all(const HpsCoefficients &a, std::size_t n_max, const std::function<oracle::Mp(std::size_t)> &want,
               double tol)
{
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t i = 0; i < a.context().size(); ++i) {
            CHECK_MESSAGE(oracle::abs(oracle::Mp(a(n, i)) - want(n)).d() <= tol, "n=" << n << " i=" << i);
        }
    }
}

} // namespace

TEST_CASE("scalar multiplication")
{
    auto c = ctx8();
    auto z = scalar_mul(GenNum::constant(Real(0), c->size()), co(c, "1"));
    check_all(z, 20, [](std::size_t) { return oracle::Mp(0); }, 0);
    auto two = scalar_mul(GenNum::constant(Real(2), c->size()), co(c, "1"));
    for (const auto &v : limit_at(two, "1/2").values) {
        CHECK(oracle::abs(oracle::Mp(v) - oracle::Mp(4)).d() < 1e-60);
    }
    auto big = scalar_mul(net("rho^(-1)", *c), co(c, "1"));
    REQUIRE(big.witness.has_value());
    CHECK(big.witness->Q == 0);
    CHECK(big.witness->R == 1);
    CHECK_THROWS_AS(scalar_mul(net("exp(1/rho)", *c), co(c, "1")), NotModerate);
}

TEST_CASE("sum")
{
    auto c = ctx8();
    auto s = add(co(c, "1"), co(c, "1/factorial(n)"));
    oracle::Mp want = oracle::Mp(2) + oracle::exp(oracle::Mp(1) / oracle::Mp(2));
    for (const auto &v : limit_at(s, "1/2").values) {
        CHECK(oracle::rel_err(oracle::Mp(v), want).d() < 1e-60);
    }
    auto z = add(co(c, "1"), co(c, "0-1"));
    check_all(z, 30, [](std::size_t) { return oracle::Mp(0); }, 0);
    RadiusEstimate r = radius(z);
    for (const auto &v : r.r.values) {
        CHECK((v.is_inf() && v.sign() > 0));
    }
}

TEST_CASE("Cauchy product")
{
    auto c = ctx8();
    auto sq = cauchy_product(co(c, "1"), co(c, "1"));
    check_all(sq, 64, [](std::size_t n) { return oracle::Mp(static_cast<long>(n + 1)); }, 0);
    for (const auto &v : limit_at(sq, "1/2").values) {
        CHECK(oracle::abs(oracle::Mp(v) - oracle::Mp(4)).d() < 1e-60);
    }
    auto z = cauchy_product(co(c, "2^n"), HpsCoefficients::zero(c));
    check_all(z, 20, [](std::size_t) { return oracle::Mp(0); }, 0);
}

TEST_CASE("Cauchy product commutes with the limit")
{
    auto c = ctx8();
    const char *fams[] = {"1", "1/factorial(n)", "(-1)^n/(n+1)", "(1/3)^n*(n+1)"};
    for (const char *a : fams) {
        for (const char *b : fams) {
            GenNum lab = limit_at(cauchy_product(co(c, a), co(c, b)), "1/2");
            GenNum la = limit_at(co(c, a), "1/2"), lb = limit_at(co(c, b), "1/2");
            for (std::size_t i = 0; i < c->size(); ++i) {
                CHECK(oracle::rel_err(oracle::Mp(lab[i]), oracle::Mp(la[i]) * oracle::Mp(lb[i])).d() < 1e-60);
            }
        }
    }
}

TEST_CASE("division")
{
    auto c = ctx8();
    auto ones = reciprocal_div(seq(c, {1}), seq(c, {1, -1}));
    check_all(ones, 64, [](std::size_t) { return oracle::Mp(1); }, 0);
    auto self = reciprocal_div(co(c, "2^n+n"), co(c, "2^n+n"));
    check_all(self, 40, [](std::size_t n) { return oracle::Mp(n == 0 ? 1 : 0); }, 1e-60);
    auto em = reciprocal_div(seq(c, {1}), co(c, "1/factorial(n)"));
    check_all(em, 40, [](std::size_t n) {
        return oracle::Mp(n % 2 ? -1 : 1) / oracle::factorial(n);
    }, 1e-70);
    CHECK_THROWS_AS(reciprocal_div(seq(c, {1}), co(c, "rho^10+n")), NotInvertible);
}

TEST_CASE("division round trip on random pairs, up to convolution rounding")
{
    auto c = ctx8();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 8; ++t) {
        const std::string a = std::to_string(1 + rng() % 9) + "^n/(n+1)";
        const std::string b = "1+(" + std::to_string(1 + rng() % 5) + "/7)^n*rho^(" + std::to_string(rng() % 3)
                              + ")";
        auto A = co(c, a), B = co(c, b);
        auto D = reciprocal_div(A, B, 40);
        for (std::size_t i = 0; i < c->size(); ++i) {
            for (std::size_t n = 0; n <= 40; ++n) {
                oracle::Mp conv(0), scale(0);
                for (std::size_t k = 0; k <= n; ++k) {
                    oracle::Mp term = oracle::Mp(D(k, i)) * oracle::Mp(B(n - k, i));
                    conv = conv + term;
                    scale = scale + oracle::abs(term);
                }
                oracle::Mp an(A(n, i));
                scale = scale + oracle::abs(an);
                CHECK_MESSAGE(oracle::abs(conv - an) <= scale * oracle::pow(oracle::Mp(2), -200L), a << " / " << b);
            }
        }
    }
}

TEST_CASE("composition")
{
    auto c = ctx8();
    auto id = seq(c, {0, 1});
    auto b = co(c, "(n+1)^2*max(0,min(n,1))");
    auto cb = compose(id, b, 20);
    check_all(cb, 20, [&](std::size_t n) { return oracle::Mp(n == 0 ? 0L : static_cast<long>((n + 1) * (n + 1))); },
              0);
    auto a = co(c, "1/factorial(n)");
    auto ca = compose(a, id, 20);
    check_all(ca, 20, [](std::size_t n) { return oracle::Mp(1) / oracle::factorial(n); }, 1e-70);
}

TEST_CASE("derivative and integral")
{
    auto c = ctx8();
    check_all(derive(co(c, "1/factorial(n)")), 30, [](std::size_t n) { return oracle::Mp(1) / oracle::factorial(n); },
              1e-70);
    auto d1 = derive(co(c, "1"));
    check_all(d1, 30, [](std::size_t n) { return oracle::Mp(static_cast<long>(n + 1)); }, 0);
    RadiusEstimate r = radius(d1);
    for (const auto &v : r.r.values) {
        CHECK(oracle::rel_err(oracle::Mp(v), oracle::Mp(1)).d() < 1e-6);
    }
    check_all(derive(HpsCoefficients::zero(c)), 10, [](std::size_t) { return oracle::Mp(0); }, 0);

    auto in = integrate(co(c, "1"));
    check_all(in, 30, [](std::size_t n) { return n == 0 ? oracle::Mp(0) : oracle::Mp(1) / oracle::Mp(static_cast<long>(n)); },
              1e-70);
    for (const auto &v : limit_at(in, "1/2").values) {
        CHECK(oracle::abs(oracle::Mp(v) - oracle::log(oracle::Mp(2))).d() < 1e-60);
    }
}

TEST_CASE("recentering")
{
    auto c = ctx8();
    GenNum zero = GenNum::constant(Real(0), c->size());
    auto same = recenter(co(c, "2^n"), zero, zero, 20);
    check_all(same, 20, [](std::size_t n) { return oracle::pow(oracle::Mp(2), static_cast<long>(n)); }, 0);
    auto geo = recenter(co(c, "1"), zero, net("1/2", *c), 20);
    check_all(geo, 20, [](std::size_t n) { return oracle::pow(oracle::Mp(2), static_cast<long>(n + 1)); }, 1e-50);
    auto ex = recenter(co(c, "1/factorial(n)"), zero, net("1", *c), 20);
    check_all(ex, 20, [](std::size_t n) { return oracle::exp(oracle::Mp(1)) / oracle::factorial(n); }, 1e-60);
    RecenterOptions tight;
    tight.m_max = 10;
    tight.check_convergence = false;
    CHECK_THROWS_AS(recenter(co(c, "1"), zero, net("1/2", *c), 20, tight), InsufficientTruncation);
}

TEST_CASE("reversion")
{
    auto c = ctx8();
    auto id = seq(c, {0, 1});
    check_all(reverse(id, 20), 20, [](std::size_t n) { return oracle::Mp(n == 1 ? 1 : 0); }, 0);

    // x + x^2 reverts to the signed Catalan numbers: g_n = (-1)^(n-1) C_(n-1).
    auto g = reverse(seq(c, {0, 1, 1}), 30);
    auto catalan = [](std::size_t k) {
        return oracle::factorial(2 * k) / (oracle::factorial(k + 1) * oracle::factorial(k));
    };
    check_all(g, 30, [&](std::size_t n) {
        if (n == 0) {
            return oracle::Mp(0);
        }
        return oracle::Mp(n % 2 ? 1 : -1) * catalan(n - 1);
    }, 1e-40);
    auto back = compose(seq(c, {0, 1, 1}), g, 30);
    check_all(back, 30, [](std::size_t n) { return oracle::Mp(n == 1 ? 1 : 0); }, 1e-40);

    CHECK_THROWS_AS(reverse(co(c, "rho^10*max(0,min(n,1))"), 10, 5), NotInvertible);
}

TEST_CASE("coefficient ring operations re-derive witnesses")
{
    auto c = ctx8();
    auto a = co(c, "rho^(-n)");
    attach_witness(a);
    REQUIRE(a.witness.has_value());
    RingOps r = coeff_ring_ops(a, a);
    REQUIRE(r.product.witness.has_value());
    CHECK(r.product.witness->Q == 2 * a.witness->Q);
    REQUIRE(r.sum.witness.has_value());
}

TEST_CASE("invertibility margin")
{
    auto c = ctx8();
    CHECK(invertibility_margin(net("1", *c), *c, 8) == 0L);
    CHECK(invertibility_margin(net("rho^3", *c), *c, 8) == 3L);
    CHECK_FALSE(invertibility_margin(net("rho^9", *c), *c, 8).has_value());
}
