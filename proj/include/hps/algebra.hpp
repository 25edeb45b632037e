// Closure operations on HPS coefficient families. Every result gets its
// weak-moderateness witness re-derived on the grid (or none when the check
// does not pass).

#ifndef HPS_ALGEBRA_HPP
#define HPS_ALGEBRA_HPP

#include <cstddef>

#include <hps/convergence.hpp>

namespace hps
{

/// Depth and search box used when re-deriving witnesses on results.
struct WitnessOptions {
    std::size_t n_max = 64;
    long Q_max = 16;
    long R_max = 64;
};

/// Runs check_weak_moderate and stores the witness on `a` when it passes.
Verdict attach_witness(HpsCoefficients &a, const WitnessOptions &opt = {});

class NotModerate : public Error
{
public:
    explicit NotModerate(const std::string &msg) : Error("not-moderate", msg) {}
};

HpsCoefficients scalar_mul(const GenNum &r, const HpsCoefficients &a, const WitnessOptions &opt = {});
HpsCoefficients add(const HpsCoefficients &a, const HpsCoefficients &b, const WitnessOptions &opt = {});
HpsCoefficients negate(const HpsCoefficients &a);

/// c_n = sum_{k=0}^n a_k b_{n-k}, extended lazily; n_max is the witness depth.
HpsCoefficients cauchy_product(const HpsCoefficients &a, const HpsCoefficients &b, std::size_t n_max = 64);

/// d with d * b = a. b_0 must satisfy |b_0| >= rho^m on the tail for some
/// m <= m_max. The round trip is verified up to n_max.
HpsCoefficients reciprocal_div(const HpsCoefficients &a, const HpsCoefficients &b, std::size_t n_max = 64,
                               long m_max = 8);

/// Coefficients of a(b(x)) where a is centered at b_0: c_0 = a_0 and
/// c_n = sum_{k=1}^n a_k [ (b - b_0)^k ]_n. Table of depth n_max.
HpsCoefficients compose(const HpsCoefficients &a, const HpsCoefficients &b, std::size_t n_max);

HpsCoefficients derive(const HpsCoefficients &a);
HpsCoefficients integrate(const HpsCoefficients &a);

struct RecenterOptions {
    std::size_t m_max = 512;
    /// Tail of each double sum must be below rho^q_tol * (1 + |a_bar_n|).
    long q_tol = 8;
    /// Run converges_at(series(a, c), c_bar) first.
    bool check_convergence = true;
};

/// a_bar_n = sum_{m >= n} a_m binom(m, n) (c_bar - c)^(m - n). Throws
/// InsufficientTruncation when m_max terms do not reach the tolerance.
HpsCoefficients recenter(const HpsCoefficients &a, const GenNum &c, const GenNum &c_bar, std::size_t n_max,
                         const RecenterOptions &opt = {});

/// Compositional inverse g (g_0 = 0) of a - a_0, by order-by-order triangular
/// solve. |a_1| must be at least rho^m on the tail for some m <= m_max.
HpsCoefficients reverse(const HpsCoefficients &a, std::size_t n_max, long m_max = 8);

struct RingOps {
    HpsCoefficients sum;
    HpsCoefficients product; // pointwise a_n b_n
};

RingOps coeff_ring_ops(const HpsCoefficients &a, const HpsCoefficients &b, const WitnessOptions &opt = {});

/// Smallest m <= m_max with |x| >= rho^m on the tail; nullopt when none.
std::optional<long> invertibility_margin(const GenNum &x, const NetContext &ctx, long m_max);

} // namespace hps

#endif
