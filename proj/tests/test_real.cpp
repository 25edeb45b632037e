#include <doctest.h>

#include <thread>

#include "oracle.hpp"

using hps::Real;

TEST_CASE("default precision is 256 bits and scoped overrides restore it")
{
    CHECK(hps::working_precision() == 256);
    {
        hps::PrecisionScope s(512);
        CHECK(Real(1).precision() == 512);
        {
            hps::PrecisionScope inner(80);
            CHECK(Real(3).precision() == 80);
        }
        CHECK(hps::working_precision() == 512);
    }
    CHECK(Real(2).precision() == 256);
}

TEST_CASE("precision is per thread")
{
    hps::PrecisionScope s(1024);
    unsigned seen = 0;
    std::thread t([&] { seen = hps::working_precision(); });
    t.join();
    CHECK(seen == 256);
    CHECK(hps::working_precision() == 1024);
}

TEST_CASE("string round trip at full precision")
{
    Real x = hps::exp(Real(1)) / Real(7);
    CHECK(Real::parse(x.str()) == x);
    Real tiny = hps::pow(Real(10), -300000L);
    CHECK(Real::parse(tiny.str()) == tiny);
    CHECK(Real::infinity(1).str() == "inf");
    CHECK(Real::infinity(-1).str() == "-inf");
    CHECK(Real(0).str() == "0");
}

TEST_CASE("exponent range survives rho^(n/eps) magnitudes")
{
    // 10^-(8e8 * 65): far outside double and the default MPFR range.
    Real v = hps::pow(Real(10), -52000000000L);
    CHECK(v.is_finite());
    CHECK_FALSE(v.is_zero());
    oracle::Mp lv(hps::log(v));
    oracle::Mp want = oracle::Mp(-52000000000L) * oracle::log(oracle::Mp(10));
    CHECK(oracle::rel_err(lv, want).d() < 1e-60);
}

TEST_CASE("elementary functions agree with raw MPFR")
{
    for (const char *s : {"0.5", "1.25", "3", "17.75"}) {
        Real x = Real::parse(s);
        oracle::Mp m(s);
        CHECK(oracle::rel_err(oracle::Mp(hps::exp(x)), oracle::exp(m)).d() < 1e-70);
        CHECK(oracle::rel_err(oracle::Mp(hps::log(x)), oracle::log(m)).d() < 1e-70);
        CHECK(oracle::rel_err(oracle::Mp(hps::sqrt(x)), oracle::sqrt(m)).d() < 1e-70);
        CHECK(oracle::rel_err(oracle::Mp(hps::cos(x)), oracle::cos(m)).d() < 1e-70);
    }
    CHECK(Real::factorial(20) == Real(2432902008176640000ULL));
    CHECK(hps::rootn(Real(1024), 10) == Real(2));
}

TEST_CASE("lgamma matches log of factorial")
{
    for (unsigned long n : {1ul, 5ul, 30ul, 170ul}) {
        Real lg = hps::lgamma(Real(n + 1));
        oracle::Mp want = oracle::log(oracle::factorial(n));
        CHECK(oracle::abs(oracle::Mp(lg) - want).d() < 1e-60);
    }
}

TEST_CASE("snap only moves values within rounding noise")
{
    Real third = Real(1) / Real(3);
    Real almost = Real(2) - hps::ldexp(Real(1), -250);
    CHECK(hps::snap(almost) == Real(2));
    CHECK(hps::snap(third) == third);
    CHECK(hps::snap(Real(5) / Real(4) + hps::ldexp(Real(1), -240), 4) == Real(5) / Real(4));
    CHECK(hps::snap(Real::parse("1.1"), 4) == Real::parse("1.1"));
}

TEST_CASE("noise floor scales with magnitude")
{
    Real a = hps::noise_floor(Real(1));
    Real b = hps::noise_floor(Real(1024));
    CHECK(b == a * Real(1024));
    CHECK(a < hps::ldexp(Real(1), -200));
}
