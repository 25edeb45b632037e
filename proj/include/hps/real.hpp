// Extended-precision real numbers backed by MPFR.
//
// Every Real carries its own mantissa precision. Newly produced values use the
// calling thread's working precision (see PrecisionScope). The exponent range
// is widened to the MPFR maximum so that nets like rho^(n/eps) stay
// representable on desk-scale grids.

#ifndef HPS_REAL_HPP
#define HPS_REAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <mpfr.h>

namespace hps
{

inline constexpr unsigned default_precision_bits = 256;
inline constexpr unsigned min_precision_bits = 64;

/// Working precision (bits) of the calling thread.
unsigned working_precision();

/// Sets the working precision of the calling thread for the lifetime of the
/// scope.
class PrecisionScope
{
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope &) = delete;
    PrecisionScope &operator=(const PrecisionScope &) = delete;

private:
    unsigned saved_;
};

class Real
{
public:
    Real();
    Real(int v);
    Real(long v);
    Real(unsigned long v);
    Real(long long v);
    Real(unsigned long long v);
    Real(double v);

    /// Parses a decimal (or "inf"/"-inf") string, rounding to nearest.
    static Real parse(std::string_view text);
    static Real infinity(int sign = 1);
    static Real nan();
    static Real pi();
    /// n! correctly rounded to the working precision (exact while it fits).
    static Real factorial(unsigned long n);

    Real(const Real &other);
    Real(Real &&other) noexcept;
    Real &operator=(const Real &other);
    Real &operator=(Real &&other) noexcept;
    ~Real();

    unsigned precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_inf() const { return mpfr_inf_p(v_) != 0; }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_integer() const { return mpfr_integer_p(v_) != 0; }
    /// -1, 0 or +1 (0 for NaN as well).
    int sign() const;

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    /// Truncates toward zero; saturates at the long range.
    long to_long() const;
    /// Round-trippable decimal string at full precision ("inf", "-inf", "nan" for specials).
    std::string str() const;
    /// Decimal string with the given number of significant digits.
    std::string str(int digits) const;

    mpfr_srcptr get() const { return v_; }
    mpfr_ptr get() { return v_; }

    Real &operator+=(const Real &o);
    Real &operator-=(const Real &o);
    Real &operator*=(const Real &o);
    Real &operator/=(const Real &o);

    friend Real operator+(const Real &a, const Real &b);
    friend Real operator-(const Real &a, const Real &b);
    friend Real operator*(const Real &a, const Real &b);
    friend Real operator/(const Real &a, const Real &b);
    friend Real operator-(const Real &a);

    friend bool operator==(const Real &a, const Real &b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const Real &a, const Real &b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real &a, const Real &b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real &a, const Real &b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real &a, const Real &b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

private:
    struct uninit_tag {
    };
    explicit Real(uninit_tag, unsigned bits);
    friend Real make_real_uninit();

    mpfr_t v_;
};

std::ostream &operator<<(std::ostream &os, const Real &x);

Real abs(const Real &x);
Real sqrt(const Real &x);
Real exp(const Real &x);
Real log(const Real &x);
Real cos(const Real &x);
Real pow(const Real &base, const Real &e);
Real pow(const Real &base, long e);
/// Correctly rounded n-th root of a non-negative value.
Real rootn(const Real &x, unsigned long n);
/// log(Gamma(x)) for x > 0.
Real lgamma(const Real &x);
Real floor(const Real &x);
Real ceil(const Real &x);
Real round(const Real &x);
Real min(const Real &a, const Real &b);
Real max(const Real &a, const Real &b);
/// x * 2^e, exact.
Real ldexp(const Real &x, long e);

/// Magnitude below which a difference of values of size `scale` is rounding
/// noise: |scale| * 2^-(prec - guard_bits).
Real noise_floor(const Real &scale, unsigned guard_bits = 32);

/// Snaps `x` to the nearest multiple of 1/denominator when it lies within
/// the rounding noise of the working precision; otherwise returns x.
Real snap(const Real &x, long denominator = 1);

} // namespace hps

#endif
