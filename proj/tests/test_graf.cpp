#include <doctest.h>

#include <sstream>

#include "oracle.hpp"

#include <hps/graf.hpp>

using namespace hps;

namespace
{

ContextPtr ctx8() { return make_context(EpsGrid::decades(1, 8, 1)); }

GenNum net(const std::string &text, const NetContext &c)
{
    return GenNum::from_expr(NetExpr::parse(text, ExprContext::Net), c);
}

// Moments and mu values of the standard bump, computed independently with
// mpmath (double exponential quadrature at 80 digits, cross-checked with
// Gauss-Legendre on the two smooth pieces).
const char *const m2 = "0.291344516314155831687326788392221923254410445811443364359068";
const char *const m4 = "0.106425276824453208571544246661518522095357816153907435949854";
const char *const m10 = "0.0135558127210835365203205953892949872609555439791871672122196";
const char *const m40 = "0.0000601802573225791220049299682360879275305265000166792231061175";

struct MuRef {
    const char *y;
    const char *mu;
};
const MuRef mu_refs[] = {
    {"1", "0.216243164950402696126511244908141244182047708984238360641347"},
    {"0.5", "0.232980243426525915227491704624535474660999364733690950690638"},
    {"0.75", "0.225912576935199330730553291132112648387289321056835146237627"},
    {"2", "0.156629851260684057735124052605980601902183321705362246375597"},
};

const MollifierSpec &standard_delta(const ContextPtr &c)
{
    static const MollifierSpec m = MollifierSpec::standard(GenNum::gauge_power(*c, Real(-1)));
    return m;
}

} // namespace

TEST_CASE("bump profile")
{
    CHECK(standard_bump(Real(0)) == Real(1));
    CHECK(standard_bump(Real::parse("0.5")) == Real(1));
    CHECK(standard_bump(Real(1)).is_zero());
    CHECK(standard_bump(Real(2)).is_zero());
    for (const char *x : {"0.6", "0.75", "0.9", "0.99"}) {
        Real v = standard_bump(Real::parse(x));
        CHECK(v > Real(0));
        CHECK(v < Real(1));
        CHECK(standard_bump(-Real::parse(x)) == v);
    }
    // psi(1/2) = 1/2, so beta(3/4) = 1/2
    CHECK(oracle::abs(oracle::Mp(standard_bump(Real::parse("0.75"))) - oracle::Mp("0.5")).d() < 1e-70);
}

TEST_CASE("bump moments match the quadrature reference")
{
    auto c = ctx8();
    const MollifierSpec &m = standard_delta(c);
    CHECK(oracle::rel_err(oracle::Mp(m.moments[0]), oracle::Mp("1.5")).d() < 1e-55);
    CHECK(oracle::rel_err(oracle::Mp(m.moments[2]), oracle::Mp(m2)).d() < 1e-55);
    CHECK(oracle::rel_err(oracle::Mp(m.moments[4]), oracle::Mp(m4)).d() < 1e-55);
    CHECK(oracle::rel_err(oracle::Mp(m.moments[10]), oracle::Mp(m10)).d() < 1e-55);
    CHECK(oracle::rel_err(oracle::Mp(m.moments[40]), oracle::Mp(m40)).d() < 1e-55);
    for (std::size_t n = 1; n < 60; n += 2) {
        CHECK(m.moments[n].is_zero());
    }
    // |m_n| is decreasing and bounded by m_0
    for (std::size_t n = 2; n + 2 < m.moments.size(); n += 2) {
        CHECK(m.moments[n + 2] < m.moments[n]);
    }
}

TEST_CASE("moments CSV round trip and validation")
{
    auto c = ctx8();
    const MollifierSpec &m = standard_delta(c);
    std::stringstream ss;
    write_moments_csv(m, ss);
    std::vector<Real> back = read_moments_csv(ss);
    REQUIRE(back.size() == m.moments.size());
    for (std::size_t n = 0; n < back.size(); ++n) {
        CHECK(back[n] == m.moments[n]);
    }
    std::vector<Real> bad = m.moments;
    bad[3] = Real::parse("0.01");
    CHECK_THROWS_AS(MollifierSpec::from_moments(bad, m.b, "broken"), InvalidMollifier);
}

TEST_CASE("delta coefficients")
{
    auto c = ctx8();
    const MollifierSpec &m = standard_delta(c);
    HpsCoefficients a = delta_coeffs(m, c);
    for (std::size_t n = 1; n < 40; n += 2) {
        CHECK(a.structurally_zero(n));
        CHECK(a(n, 3).is_zero());
    }
    // a_2 = -m_2 b^3 / (2 pi 2!)
    for (std::size_t i = 0; i < c->size(); ++i) {
        oracle::Mp b = oracle::Mp(1) / oracle::Mp(c->rho.values()[i]);
        oracle::Mp want = oracle::Mp(0) - oracle::Mp(m2) * b * b * b / (oracle::Mp(4) * oracle::pi());
        CHECK(oracle::rel_err(oracle::Mp(a(2, i)), want).d() < 1e-55);
    }
    Verdict w = check_weak_moderate(a, 64, 8, 8);
    REQUIRE(w.passed());
    CHECK(w.witness["Q"] == 1);
    CHECK(w.witness["R"] == 1);
    RadiusClassification rc = classify_radius(radius(a), *c, 8);
    for (std::size_t i : c->grid.tail()) {
        CHECK(rc.classes[i] == RadiusClass::Infinite);
    }
}

TEST_CASE("delta evaluation against the Fourier reference")
{
    auto c = ctx8();
    const MollifierSpec &m = standard_delta(c);
    GenNum at0 = delta_eval(m, net("0", *c), *c);
    for (std::size_t i = 0; i < c->size(); ++i) {
        oracle::Mp want = oracle::Mp("1.5") / (oracle::Mp(2) * oracle::pi() * oracle::Mp(c->rho.values()[i]));
        CHECK(oracle::rel_err(oracle::Mp(at0[i]), want).d() < 1e-55);
    }
    for (const MuRef &r : mu_refs) {
        GenNum v = delta_eval(m, net(std::string(r.y) + "*rho", *c), *c);
        for (std::size_t i = 0; i < c->size(); ++i) {
            oracle::Mp want = oracle::Mp(r.mu) / oracle::Mp(c->rho.values()[i]);
            CHECK_MESSAGE(oracle::rel_err(oracle::Mp(v[i]), want).d() < 1e-50, "y=" << r.y);
        }
    }
    CHECK_THROWS_AS(delta_eval(m, net("1", *c), *c), OutOfCheckableRange);
}

TEST_CASE("delta partial sums against direct evaluation")
{
    auto c = ctx8();
    HyperNat N = hypernat_from_expr(NetExpr::parse("max(8, 1/sigma)", ExprContext::Net), c->sigma, c->grid, 8);
    CHECK(delta_crosscheck(standard_delta(c), c, net("rho", *c), N, 4).passed());
}

TEST_CASE("Taylor coefficients")
{
    auto c = ctx8();
    GenNum zero = GenNum::constant(Real(0), c->size());
    HpsCoefficients e = taylor_coeffs(GsfNet::from_expr(c, "exp(x)"), zero, 20);
    for (std::size_t n = 0; n <= 20; ++n) {
        CHECK(oracle::rel_err(oracle::Mp(e(n, 2)), oracle::Mp(1) / oracle::factorial(n)).d() < 1e-70);
    }
    Verdict weak;
    HpsCoefficients g = taylor_coeffs(GsfNet::from_expr(c, "factorial(n)/(1-x)^(n+1)"), zero, 20, &weak);
    for (std::size_t n = 0; n <= 20; ++n) {
        CHECK(g(n, 5) == Real(1));
    }
    CHECK(weak.passed());

    const MollifierSpec &m = standard_delta(c);
    GsfNet delta(c,
                 [&m, c](int k, const Real &x, std::size_t i) {
                     REQUIRE(x.is_zero());
                     const Real b = m.b[i];
                     return m.mu_derivative_at_zero(static_cast<std::size_t>(k)) * pow(b, static_cast<long>(k + 1));
                 },
                 "delta at 0");
    HpsCoefficients td = taylor_coeffs(delta, zero, 16);
    HpsCoefficients dc = delta_coeffs(m, c);
    for (std::size_t n = 0; n <= 16; ++n) {
        for (std::size_t i = 0; i < c->size(); ++i) {
            CHECK(oracle::rel_err(oracle::Mp(td(n, i)), oracle::Mp(dc(n, i))).d() < 1e-60);
        }
    }
}

TEST_CASE("factorial growth test")
{
    auto c = ctx8();
    GenNum zero = GenNum::constant(Real(0), c->size());
    GenNum unit = GenNum::constant(Real(1), c->size());
    std::vector<GenNum> xs{zero, net("1/2", *c), net("-1/2", *c), unit};
    GrowthWitness ex = graf_check(GsfNet::from_expr(c, "exp(x)"), zero, unit, 16, xs);
    CHECK(ex.verdict.passed());
    REQUIRE(ex.inv_R_exponent.has_value());
    CHECK(std::abs(*ex.inv_R_exponent) <= 0.1);

    const MollifierSpec &m = standard_delta(c);
    GsfNet delta = GsfNet::from_series(HpsSeries(delta_coeffs(m, c), zero));
    std::vector<GenNum> dxs{net("rho/2", *c), net("-rho/2", *c)};
    GrowthWitness de = graf_check(delta, zero, GenNum::gauge_power(*c, Real(1)), 16, dxs);
    CHECK(de.verdict.passed());
    REQUIRE(de.inv_R_exponent.has_value());
    CHECK(std::abs(*de.inv_R_exponent - 1.0) <= 0.1);

    GrowthWitness nf = graf_check(GsfNet::from_expr(c, "factorial(n)^2"), zero, unit, 16, xs);
    CHECK(nf.verdict.failed());
    CHECK(nf.verdict.counterexample.has_value());
}

TEST_CASE("flat point")
{
    CHECK(flat_function(Real(0)).is_zero());
    CHECK(flat_function(Real(-3)).is_zero());
    CHECK(oracle::rel_err(oracle::Mp(flat_function(Real(1))), oracle::exp(oracle::Mp(-1))).d() < 1e-70);
    auto c = ctx8();
    for (const char *r : {"1/2", "1", "2"}) {
        GenNum x = net("rho^(" + std::string(r) + ")", *c);
        std::vector<Real> f;
        for (const auto &v : x.values) {
            f.push_back(flat_function(v));
        }
        CHECK_MESSAGE(is_negligible(GenNum{f, std::nullopt}, c->rho, c->grid, 8).passed(), r);
    }
    CHECK(flat_point_check(c, 8).passed());
}

TEST_CASE("nowhere-analytic rejection")
{
    auto c = ctx8();
    CHECK(nowhere_analytic_reject(c, 64).passed());
    CHECK(check_weak_moderate(HpsCoefficients::from_expr(c, "exp(-2*n)*(4*n^2)^n/factorial(n)"), 64, 16, 64).failed());
    CHECK(check_weak_moderate(HpsCoefficients::from_expr(c, "1/factorial(n)"), 64, 16, 64).passed());
}
