// Generalized real analytic functions: Taylor coefficients, the factorial
// growth test on derivatives, the mollifier-based delta and the flat-point and
// nowhere-analytic examples.

#ifndef HPS_GRAF_HPP
#define HPS_GRAF_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <hps/algebra.hpp>

namespace hps
{

/// Derivative net (k, eps, x) -> f_eps^(k)(x).
class GsfNet
{
public:
    using DerivFn = std::function<Real(int k, const Real &x, std::size_t i)>;

    GsfNet(ContextPtr ctx, DerivFn deriv, std::string name, int k_max = 1 << 20);

    /// Expression in n (derivative order), x, eps, rho, sigma.
    static GsfNet from_expr(ContextPtr ctx, const std::string &text);
    /// f^(k)(x) as the eps-wise limit of the k-th derived series.
    static GsfNet from_series(const HpsSeries &s, long q_target = 64);

    Real derivative(int k, const Real &x, std::size_t i) const;
    GenNum derivative(int k, const GenNum &x) const;

    const NetContext &context() const { return *ctx_; }
    const ContextPtr &context_ptr() const { return ctx_; }
    const std::string &name() const { return name_; }
    int k_max() const { return k_max_; }

private:
    ContextPtr ctx_;
    DerivFn deriv_;
    std::string name_;
    int k_max_;
};

/// a_k = f^(k)(c)/k!, table of depth n_max. The weak-moderateness verdict is
/// stored in `weak` when given.
HpsCoefficients taylor_coeffs(const GsfNet &f, const GenNum &c, std::size_t n_max, Verdict *weak = nullptr);

/// |f^(n)(x)| <= C n!/R^n with C = kappa rho^-p, R = lambda rho^q.
struct GrowthWitness {
    GenNum s;
    GenNum C;
    GenNum R;
    Verdict verdict;
    std::optional<double> p, q, kappa, lambda;
    /// rho-exponent of 1/R (q of the witness); nullopt on Fail.
    std::optional<double> inv_R_exponent;

    json to_json() const;
};

GrowthWitness graf_check(const GsfNet &f, const GenNum &c, const GenNum &s, std::size_t n_max,
                         const std::vector<GenNum> &sample_x);

/// Moments m_n of an even bump beta on [-1, 1] and the scale b of
/// delta_eps(x) = b_eps mu(b_eps x), mu the inverse Fourier transform of beta.
struct MollifierSpec {
    std::vector<Real> moments;
    GenNum b;
    std::string profile;

    /// The fixed bump: 1 on [-1/2, 1/2], psi(2(1 - |x|)) outside, with
    /// psi(t) = f(t)/(f(t) + f(1 - t)) and f(t) = exp(-1/t). Moments by
    /// tanh-sinh quadrature.
    static MollifierSpec standard(const GenNum &b, std::size_t n_moments = 320);
    /// Throws InvalidMollifier when the moments violate evenness or bounds.
    static MollifierSpec from_moments(std::vector<Real> moments, const GenNum &b, std::string profile);
    void validate() const;

    /// mu^(n)(0) = (-1)^(n/2) m_n / (2 pi) for even n, 0 for odd n.
    Real mu_derivative_at_zero(std::size_t n) const;
};

/// The bump profile itself (for oracles and reports).
Real standard_bump(const Real &x);

void write_moments_csv(const MollifierSpec &m, std::ostream &os);
std::vector<Real> read_moments_csv(std::istream &is);

/// a_n = mu^(n)(0) b^(n+1) / n!; odd entries structurally zero.
HpsCoefficients delta_coeffs(const MollifierSpec &m, ContextPtr ctx);

struct DeltaOptions {
    /// Largest |b x| for which the moment series is summed.
    double y_max = 32;
};

/// b mu(b x) through the moment series of mu. Throws OutOfCheckableRange when
/// |b x| exceeds y_max on the tail or the moments run out.
GenNum delta_eval(const MollifierSpec &m, const GenNum &x, const NetContext &ctx, const DeltaOptions &opt = {});

/// Hyperfinite partial sums of delta_coeffs at x against delta_eval, to
/// rho^q on the tail.
Verdict delta_crosscheck(const MollifierSpec &m, ContextPtr ctx, const GenNum &x, const HyperNat &N, long q);

/// f(x) = exp(-1/x) (x > 0), 0 otherwise.
Real flat_function(const Real &x);

Verdict flat_point_check(ContextPtr ctx, long q_max);

Verdict nowhere_analytic_reject(ContextPtr ctx, std::size_t n_max);

} // namespace hps

#endif
