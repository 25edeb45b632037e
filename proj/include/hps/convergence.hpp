// Weak moderateness, strong equivalence, radius of convergence, hyperfinite
// sums and the membership test for the set of convergence.

#ifndef HPS_CONVERGENCE_HPP
#define HPS_CONVERGENCE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <hps/coefficients.hpp>

namespace hps
{

/// Least-squares fit of log|a_n| against the basis
///   n log n, n, log n, 1, 1/n, 1/n^2, 1/n^3.
/// `E` (coefficient of n log n) separates super-geometric decay (E < 0, infinite
/// radius) and growth (E > 0, zero radius) from geometric behaviour, where
/// `A` is the exponential rate: limsup |a_n|^(1/n) = exp(A).
struct GrowthFit {
    Real E;
    Real A;
    bool geometric = false; // |E| <= tolerance; A then comes from a refit without the n log n term
    std::size_t points = 0;
};

inline constexpr double growth_tolerance = 0.01;

/// points: (n, log|a_n|) with n >= 1. Rough (oscillating) point sets are fitted
/// through their upper envelope.
GrowthFit fit_log_growth(const std::vector<std::pair<Real, Real>> &points);

std::optional<WeakWitness> witness_from(const Verdict &v);

Verdict check_weak_moderate(const HpsCoefficients &a, std::size_t n_max, long Q_max, long R_max);
Verdict check_strong_eq(const HpsCoefficients &a, const HpsCoefficients &a_bar, std::size_t n_max, long q_max,
                        long r_max);

struct RadiusEstimate {
    ExtGenNum r;      // r_eps, possibly +inf (or 0 for super-geometric growth)
    ExtGenNum inv_r;  // limsup |a_n|^(1/n)
    std::pair<std::size_t, std::size_t> window;
    std::vector<std::string> method; // per eps: "exact", "fit", "vanishing", "super-geometric"
    std::vector<Real> growth;        // per eps: E of the fit (0 for exact/vanishing)
    std::vector<std::vector<Real>> running_max; // per eps, per n in window; filled on request
    std::vector<std::string> warnings;

    json to_json(bool curves = false) const;
};

RadiusEstimate radius(const HpsCoefficients &a, std::size_t n_lo = 16, std::size_t n_hi = 256, bool curves = false);

enum class RadiusClass { Infinite, BeyondAllTestedPowers, Moderate };
std::string to_string(RadiusClass c);

struct RadiusClassification {
    std::vector<RadiusClass> classes;
    std::optional<long> P_m;
    /// Grid indices per class (the subpoint partition).
    std::vector<std::size_t> infinite, beyond, moderate;
    std::vector<std::string> notes;

    json to_json() const;
};

RadiusClassification classify_radius(const RadiusEstimate &rad, const NetContext &ctx, long P_max);

/// Per-eps termination diagnostics of a summation.
struct SumInfo {
    std::vector<std::size_t> terms;
    std::vector<Real> tail_bound;
    /// Entry i is set when the value is only a lower bound on the magnitude
    /// (log|S| >= log_lower[i]); the sum exceeded every moderate bound first.
    std::vector<std::optional<Real>> log_lower;
};

/// sum_{n=0}^{N_eps} a_n (x - c)^n, in increasing n. Stops early once the
/// remaining terms are below a quarter ulp of the partial sum under a
/// geometric majorant.
GenNum hyperfinite_sum(const HpsSeries &s, const GenNum &x, const HyperNat &N, std::size_t n_cap = 1000000,
                       SumInfo *info = nullptr);

struct LimitOptions {
    long q_target = 64;
    std::size_t n_cap = 1000000;
    /// When set to N, stop as soon as a same-sign partial sum exceeds rho^-N
    /// and report a magnitude lower bound instead of throwing.
    std::optional<long> explode_valuation;
};

/// eps-wise value of the full series. Throws DivergentSeries when no
/// convergent tail is found within the budget.
GenNum series_limit(const HpsSeries &s, const GenNum &x, long q_target = 64);
GenNum series_limit(const HpsSeries &s, const GenNum &x, const LimitOptions &opt, SumInfo *info);

Verdict is_formal_hps(const HpsSeries &s, const GenNum &x, int sample_count = 5, long N_max = 64,
                      std::size_t n_cap = 1000000);

/// k-th derived family: (n+k)!/n! a_{n+k}.
HpsCoefficients derived_family(const HpsCoefficients &a, int k);

Verdict derivative_net_moderate(const HpsSeries &s, const GenNum &x, int k_max, long N_max = 64);

struct ConvergeOptions {
    std::size_t n_lo = 16;
    std::size_t n_hi = 256;
    long margin_m = 6;
    int sample_count = 5;
    int ladder = 4;
    long q_limit = 4;
    int k_max = 3;
    long N_max = 64;
    long q_target = 64;
    std::size_t n_cap = 1000000;
};

struct ConvergenceReport {
    Verdict cond_radius;
    Verdict cond_formal;
    Verdict cond_limit;
    Verdict cond_derivs;
    Verdict overall;
    std::optional<GenNum> limit;

    json to_json() const;
};

ConvergenceReport converges_at(const HpsSeries &s, const GenNum &x, const ConvergeOptions &opt = {});

struct EventualBoundReport {
    GenNum R_bound;
    long R_exponent = 0; // R = 2 * rho^-R_exponent
    std::size_t N_start = 0;
    Verdict verdict;

    json to_json() const;
};

EventualBoundReport eventually_bounded(const HpsSeries &s, const GenNum &x, std::size_t n_max, long N_max = 64);

struct ShortcutResult {
    Verdict verdict;
    std::vector<Real> h; // |x - c| / |x_bar - c| per eps
    GenNum K;            // eventual bound at x_bar: |terms| <= K h^n
    std::optional<GenNum> limit;

    json to_json() const;
};

/// Throws PreconditionError naming the violated precondition.
ShortcutResult converge_shortcut(const HpsSeries &s, const GenNum &x, const GenNum &x_bar,
                                 const ConvergeOptions &opt = {});

/// Radius rho^Q of the ball on which the summands stay bounded by rho^-R.
GenNum ball_guarantee(const HpsCoefficients &a);

} // namespace hps

#endif
