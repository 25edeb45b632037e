#include <hps/real.hpp>

#include <climits>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hps
{

namespace
{

thread_local unsigned tl_precision = default_precision_bits;
thread_local bool tl_range_ready = false;

// MPFR keeps the exponent range per thread in thread-safe builds.
inline void ensure_range()
{
    if (!tl_range_ready) {
        mpfr_set_emin(mpfr_get_emin_min());
        mpfr_set_emax(mpfr_get_emax_max());
        tl_range_ready = true;
    }
}

} // namespace

unsigned working_precision()
{
    return tl_precision;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_(tl_precision)
{
    if (bits < MPFR_PREC_MIN || bits > 1u << 20) {
        throw std::invalid_argument("precision out of range: " + std::to_string(bits));
    }
    ensure_range();
    tl_precision = bits;
}

PrecisionScope::~PrecisionScope()
{
    tl_precision = saved_;
}

Real::Real(uninit_tag, unsigned bits)
{
    ensure_range();
    mpfr_init2(v_, static_cast<mpfr_prec_t>(bits));
}

Real make_real_uninit()
{
    return Real(Real::uninit_tag{}, working_precision());
}

Real::Real() : Real(uninit_tag{}, tl_precision)
{
    mpfr_set_zero(v_, 1);
}

Real::Real(int v) : Real(uninit_tag{}, tl_precision)
{
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(long v) : Real(uninit_tag{}, tl_precision)
{
    mpfr_set_si(v_, v, MPFR_RNDN);
}

Real::Real(unsigned long v) : Real(uninit_tag{}, tl_precision)
{
    mpfr_set_ui(v_, v, MPFR_RNDN);
}

Real::Real(long long v) : Real(static_cast<long>(v))
{
}

Real::Real(unsigned long long v) : Real(static_cast<unsigned long>(v))
{
}

Real::Real(double v) : Real(uninit_tag{}, tl_precision)
{
    mpfr_set_d(v_, v, MPFR_RNDN);
}

Real Real::parse(std::string_view text)
{
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r')) {
        s.pop_back();
    }
    std::size_t first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
        throw std::invalid_argument("empty number");
    }
    s = s.substr(first);
    Real r;
    if (s == "inf" || s == "+inf") {
        return infinity(1);
    }
    if (s == "-inf") {
        return infinity(-1);
    }
    if (s == "nan") {
        return nan();
    }
    char *end = nullptr;
    mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (end == s.c_str() || *end != '\0') {
        throw std::invalid_argument("not a decimal number: '" + s + "'");
    }
    return r;
}

Real Real::infinity(int sign)
{
    Real r;
    mpfr_set_inf(r.v_, sign < 0 ? -1 : 1);
    return r;
}

Real Real::nan()
{
    Real r;
    mpfr_set_nan(r.v_);
    return r;
}

Real Real::pi()
{
    Real r;
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real Real::factorial(unsigned long n)
{
    Real r;
    mpfr_fac_ui(r.v_, n, MPFR_RNDN);
    return r;
}

Real::Real(const Real &other) : Real(uninit_tag{}, other.precision())
{
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real &&other) noexcept
{
    // Steal the limbs and leave `other` as a valid 2-bit zero.
    *v_ = *other.v_;
    mpfr_init2(other.v_, MPFR_PREC_MIN);
    mpfr_set_zero(other.v_, 1);
}

Real &Real::operator=(const Real &other)
{
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

Real &Real::operator=(Real &&other) noexcept
{
    if (this != &other) {
        mpfr_swap(v_, other.v_);
    }
    return *this;
}

Real::~Real()
{
    mpfr_clear(v_);
}

int Real::sign() const
{
    if (mpfr_nan_p(v_)) {
        return 0;
    }
    int s = mpfr_sgn(v_);
    return s > 0 ? 1 : (s < 0 ? -1 : 0);
}

long Real::to_long() const
{
    if (is_nan()) {
        return 0;
    }
    if (!mpfr_fits_slong_p(v_, MPFR_RNDZ)) {
        return sign() > 0 ? LONG_MAX : LONG_MIN;
    }
    return mpfr_get_si(v_, MPFR_RNDZ);
}

std::string Real::str() const
{
    return str(static_cast<int>(mpfr_get_str_ndigits(10, mpfr_get_prec(v_))));
}

std::string Real::str(int digits) const
{
    if (is_nan()) {
        return "nan";
    }
    if (is_inf()) {
        return sign() > 0 ? "inf" : "-inf";
    }
    if (is_zero()) {
        return "0";
    }
    mpfr_exp_t e = 0;
    char *raw = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(digits), v_, MPFR_RNDN);
    std::string m(raw);
    mpfr_free_str(raw);
    std::string out;
    if (m.front() == '-') {
        out.push_back('-');
        m.erase(m.begin());
    }
    while (m.size() > 1 && m.back() == '0') {
        m.pop_back();
    }
    // mantissa is 0.d1d2... * 10^e; print as d1.d2... e(e-1)
    out.push_back(m[0]);
    if (m.size() > 1) {
        out.push_back('.');
        out.append(m, 1, std::string::npos);
    }
    long exponent = static_cast<long>(e) - 1;
    if (exponent != 0) {
        out += "e" + std::to_string(exponent);
    }
    return out;
}

Real &Real::operator+=(const Real &o)
{
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real &Real::operator-=(const Real &o)
{
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real &Real::operator*=(const Real &o)
{
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real &Real::operator/=(const Real &o)
{
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

Real operator+(const Real &a, const Real &b)
{
    Real r = make_real_uninit();
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator-(const Real &a, const Real &b)
{
    Real r = make_real_uninit();
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator*(const Real &a, const Real &b)
{
    Real r = make_real_uninit();
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator/(const Real &a, const Real &b)
{
    Real r = make_real_uninit();
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

Real operator-(const Real &a)
{
    Real r = make_real_uninit();
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
}

std::ostream &operator<<(std::ostream &os, const Real &x)
{
    return os << x.str();
}

#define HPS_UNARY(name, fn)                                                                                            \
    Real name(const Real &x)                                                                                           \
    {                                                                                                                  \
        Real r = make_real_uninit();                                                                                   \
        fn(r.get(), x.get(), MPFR_RNDN);                                                                               \
        return r;                                                                                                      \
    }

HPS_UNARY(abs, mpfr_abs)
HPS_UNARY(sqrt, mpfr_sqrt)
HPS_UNARY(exp, mpfr_exp)
HPS_UNARY(log, mpfr_log)
HPS_UNARY(cos, mpfr_cos)

#undef HPS_UNARY

Real pow(const Real &base, const Real &e)
{
    Real r = make_real_uninit();
    mpfr_pow(r.get(), base.get(), e.get(), MPFR_RNDN);
    return r;
}

Real pow(const Real &base, long e)
{
    Real r = make_real_uninit();
    mpfr_pow_si(r.get(), base.get(), e, MPFR_RNDN);
    return r;
}

Real rootn(const Real &x, unsigned long n)
{
    Real r = make_real_uninit();
    mpfr_rootn_ui(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}

Real lgamma(const Real &x)
{
    Real r = make_real_uninit();
    mpfr_lngamma(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Real floor(const Real &x)
{
    Real r(x);
    mpfr_floor(r.get(), x.get());
    return r;
}

Real ceil(const Real &x)
{
    Real r(x);
    mpfr_ceil(r.get(), x.get());
    return r;
}

Real round(const Real &x)
{
    Real r(x);
    mpfr_round(r.get(), x.get());
    return r;
}

Real min(const Real &a, const Real &b)
{
    return b < a ? b : a;
}

Real max(const Real &a, const Real &b)
{
    return a < b ? b : a;
}

Real ldexp(const Real &x, long e)
{
    Real r(x);
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}

Real noise_floor(const Real &scale, unsigned guard_bits)
{
    const long prec = static_cast<long>(working_precision());
    return ldexp(abs(scale), -(prec - static_cast<long>(guard_bits)));
}

Real snap(const Real &x, long denominator)
{
    if (!x.is_finite()) {
        return x;
    }
    Real scaled = x * Real(denominator);
    Real nearest = round(scaled);
    Real tol = noise_floor(max(Real(1), abs(scaled)), 16);
    if (abs(scaled - nearest) <= tol) {
        return nearest / Real(denominator);
    }
    return x;
}

} // namespace hps
