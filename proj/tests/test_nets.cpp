#include <doctest.h>

#include <random>

#include "oracle.hpp"

#include <hps/nets.hpp>

using namespace hps;

namespace
{

ContextPtr ctx8(const std::string &sigma = "rho")
{
    return make_context(EpsGrid::decades(1, 8, 1), "eps", sigma);
}

GenNum net(const std::string &text, const NetContext &c)
{
    return GenNum::from_expr(NetExpr::parse(text, ExprContext::Net), c);
}

} // namespace

TEST_CASE("grid invariants")
{
    EpsGrid g = EpsGrid::decades(1, 8, 1);
    CHECK(g.size() == 8);
    CHECK(g.tail().size() == 7);
    CHECK(g.points.front() == Real::parse("0.1"));
    g.validate();

    EpsGrid bad = g;
    std::swap(bad.points[2], bad.points[3]);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(EpsGrid::decades(1, 3, 3), ConfigError);
    EpsGrid outside{{Real(2), Real::parse("0.5")}, 0};
    CHECK_THROWS_AS(outside.validate(), ConfigError);
}

TEST_CASE("valuation examples")
{
    auto c = ctx8();
    for (const auto &v : valuation(net("rho^2", *c), c->rho, c->grid)) {
        CHECK(snap(v) == Real(2));
    }
    for (const auto &v : valuation(net("0", *c), c->rho, c->grid)) {
        CHECK((v.is_inf() && v.sign() > 0));
    }
    for (const auto &v : valuation(net("rho^(-3)", *c), c->rho, c->grid)) {
        CHECK(snap(v) == Real(-3));
    }
}

TEST_CASE("a gauge equal to 1 is rejected")
{
    auto c = make_context(EpsGrid::decades(0, 4, 1));
    CHECK_THROWS_AS(valuation(net("rho", *c), c->rho, c->grid), InvalidGauge);
}

TEST_CASE("valuation of random powers is the exponent")
{
    auto c = ctx8();
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        const long p = static_cast<long>(rng() % 41) - 20;
        const long q = 1 + static_cast<long>(rng() % 7);
        GenNum x = net("rho^(" + std::to_string(p) + "/" + std::to_string(q) + ")", *c);
        oracle::Mp want = oracle::Mp(p) / oracle::Mp(q);
        for (const auto &v : valuation(x, c->rho, c->grid)) {
            CHECK(oracle::abs(oracle::Mp(v) - want).d() < 1e-60);
        }
    }
}

TEST_CASE("moderateness examples")
{
    auto c = ctx8();
    Verdict a = is_moderate(net("rho^(-2)", *c), c->rho, c->grid, 5);
    CHECK(a.passed());
    CHECK(a.witness["N"] == 2);
    Verdict b = is_moderate(net("rho^(1/eps)", *c), c->rho, c->grid, 10);
    CHECK(b.passed());
    CHECK(b.witness["N"] == 0);
    Verdict d = is_moderate(net("rho^(-1/eps)", *c), c->rho, c->grid, 10);
    CHECK(d.failed());
    REQUIRE(d.counterexample);
    CHECK(d.counterexample->grid_index >= 1);
}

TEST_CASE("negligibility examples")
{
    auto c6 = make_context(EpsGrid::decades(1, 6, 1));
    auto c = ctx8();
    Verdict z = is_negligible(net("0", *c), c->rho, c->grid, 8);
    CHECK(z.passed());
    CHECK(z.witness["q"] == 8);
    CHECK(is_negligible(net("rho^(1/eps)", *c6), c6->rho, c6->grid, 8).passed());
    Verdict m = is_negligible(net("rho^3", *c), c->rho, c->grid, 8);
    CHECK(m.status == Status::Inconclusive);
    CHECK(m.notes.find("moderate, non-negligible") != std::string::npos);
    CHECK(is_negligible(net("1", *c), c->rho, c->grid, 8).failed());
}

TEST_CASE("verdict invariants")
{
    auto c = ctx8();
    const char *nets[] = {"rho^(-2)", "rho^(1/eps)", "rho^(-1/eps)", "rho^3", "1", "0", "exp(-1/rho)", "log(rho)"};
    for (const char *t : nets) {
        GenNum x = net(t, *c);
        for (const Verdict &v : {is_moderate(x, c->rho, c->grid, 10), is_negligible(x, c->rho, c->grid, 8)}) {
            if (v.passed()) {
                CHECK_FALSE(v.witness.empty());
            }
            if (v.failed()) {
                CHECK(v.counterexample.has_value());
            }
        }
        // negligible implies moderate
        if (is_negligible(x, c->rho, c->grid, 8).passed()) {
            CHECK(is_moderate(x, c->rho, c->grid, 10).passed());
        }
        // a larger bound never turns a Pass into something else
        if (is_moderate(x, c->rho, c->grid, 4).passed()) {
            CHECK(is_moderate(x, c->rho, c->grid, 9).passed());
        }
    }
}

TEST_CASE("combine is a lattice meet")
{
    const Status all[] = {Status::Pass, Status::Fail, Status::Inconclusive};
    for (Status a : all) {
        CHECK(combine(a, Status::Pass) == a);
        CHECK(combine(a, Status::Fail) == Status::Fail);
        for (Status b : all) {
            CHECK(combine(a, b) == combine(b, a));
        }
    }
    CHECK(combine(Status::Inconclusive, Status::Pass) == Status::Inconclusive);
}

TEST_CASE("extended equality")
{
    auto c = ctx8();
    GenNum x = net("1/(1-rho)", *c);
    CHECK(ext_eq(x, x, c->rho, c->grid, 6).passed());
    std::vector<Real> inf(c->size(), Real::infinity(1));
    CHECK(ext_eq(ExtGenNum(inf), ExtGenNum(inf), c->rho, c->grid, 6).passed());
    CHECK(ext_eq(net("1", *c), net("1+rho^(1/eps)", *c), c->rho, c->grid, 6).passed());
    std::vector<Real> neg(c->size(), Real::infinity(-1));
    Verdict mism = ext_eq(ExtGenNum(inf), ExtGenNum(neg), c->rho, c->grid, 6);
    CHECK(mism.failed());
    CHECK(mism.counterexample.has_value());
    CHECK(ext_eq(net("1", *c), net("1+rho", *c), c->rho, c->grid, 6).failed());
    // symmetric
    GenNum y = net("1+rho^7", *c);
    CHECK(ext_eq(x, y, c->rho, c->grid, 6).status == ext_eq(y, x, c->rho, c->grid, 6).status);
}

TEST_CASE("gauge order")
{
    auto c = ctx8();
    Verdict one = gauge_le_star(c->sigma, c->rho, c->grid, 8);
    CHECK(one.passed());
    CHECK(one.witness["Q"] == 1.0);
    auto c2 = ctx8("rho^2");
    CHECK(gauge_le_star(c2->sigma, c2->rho, c2->grid, 8).witness["Q"] == 2.0);
    auto cexp = ctx8("exp(-exp(1/rho))");
    Verdict s = gauge_le_star(cexp->sigma, cexp->rho, cexp->grid, 8);
    CHECK(s.passed());
    CHECK(s.witness["Q"] == 8);
    CHECK(s.witness["saturated"] == true);
    auto csqrt = ctx8("rho^(1/8)");
    CHECK(gauge_le_star(csqrt->sigma, csqrt->rho, csqrt->grid, 8).failed());
}

TEST_CASE("hypernaturals")
{
    auto c = ctx8();
    HyperNat N = hypernat_from_expr(NetExpr::parse("sigma^(-1)", ExprContext::Net), c->sigma, c->grid, 8);
    CHECK(N.sigma_witness == 1);
    for (std::size_t i = 0; i < c->size(); ++i) {
        CHECK(N.values[i] == floor(Real(1) / c->grid.points[i]));
    }
    HyperNat Z = hypernat_from_expr(NetExpr::parse("0", ExprContext::Net), c->sigma, c->grid, 8);
    CHECK(Z.sigma_witness == 0);
    for (const auto &v : Z.values) {
        CHECK(v.is_zero());
    }
    CHECK_THROWS_AS(hypernat_from_expr(NetExpr::parse("exp(1/sigma)", ExprContext::Net), c->sigma, c->grid, 8),
                    NotHypernatural);
    CHECK_THROWS_AS(hypernat_from_expr(NetExpr::parse("0-1", ExprContext::Net), c->sigma, c->grid, 8),
                    NotHypernatural);
    HyperNat P = sigma_power(*c, 3);
    CHECK(P.values.back() == Real::parse("1e24"));
}

TEST_CASE("hypernaturals beyond the exponent range keep their logarithm")
{
    auto c = ctx8("exp(-exp(1/rho))");
    HyperNat N = hypernat_from_expr(NetExpr::parse("sigma^(-1)", ExprContext::Net), c->sigma, c->grid, 8, &c->rho);
    CHECK(N.sigma_witness == 1);
    CHECK_FALSE(N.representable(c->size() - 1));
    oracle::Mp want = oracle::exp(oracle::Mp(100000000));
    CHECK(oracle::rel_err(oracle::Mp(N.log_values.back()), want).d() < 1e-60);
}
