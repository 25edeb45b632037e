// Coefficient families (n, eps) -> a_{n,eps} and hyper-power series.

#ifndef HPS_COEFFICIENTS_HPP
#define HPS_COEFFICIENTS_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <hps/nets.hpp>

namespace hps
{

/// Integers (Q, R) with |a_{n,eps}| <= rho_eps^(-nQ-R) for all n and tail eps.
struct WeakWitness {
    long Q = 0;
    long R = 0;
};

class CoefficientSource
{
public:
    virtual ~CoefficientSource() = default;
    virtual Real value(std::size_t n, std::size_t i) const = 0;
    /// log|a| and sign; overridden where the value itself may leave the
    /// exponent range.
    virtual LogAbs log_value(std::size_t n, std::size_t i) const;
    /// log|a_n| at an index given by value and logarithm (the value may be
    /// +inf when n leaves the exponent range). nullopt when not evaluable.
    virtual std::optional<LogAbs> log_value_at(const Real &n, const Real &log_n, std::size_t i) const;
    /// Largest available n, for table-backed families.
    virtual std::optional<std::size_t> depth() const { return std::nullopt; }
    virtual std::string describe() const = 0;
    /// True when a_n is known to be exactly zero for this n (all eps).
    virtual bool structurally_zero(std::size_t) const { return false; }
};

class HpsCoefficients
{
public:
    using Fn = std::function<Real(std::size_t n, std::size_t i)>;
    using Table = std::vector<std::vector<Real>>; // [n][grid index]

    HpsCoefficients(ContextPtr ctx, std::shared_ptr<const CoefficientSource> src);

    static HpsCoefficients from_expr(ContextPtr ctx, const NetExpr &expr);
    static HpsCoefficients from_expr(ContextPtr ctx, const std::string &text);
    /// Same value at every eps: a_n = f(n).
    static HpsCoefficients from_sequence(ContextPtr ctx, std::function<Real(std::size_t)> f, std::string description);
    static HpsCoefficients from_table(ContextPtr ctx, Table rows, std::string description = "table");
    static HpsCoefficients from_function(ContextPtr ctx, Fn f, std::string description,
                                         std::optional<std::size_t> depth = std::nullopt,
                                         std::function<bool(std::size_t)> zero = {});
    static HpsCoefficients zero(ContextPtr ctx);
    /// Lazily extended table: row(n, rows 0..n-1) computes row n on first use.
    using RowFn = std::function<std::vector<Real>(std::size_t n, const Table &previous)>;
    static HpsCoefficients memoized(ContextPtr ctx, RowFn row, std::string description,
                                    std::function<bool(std::size_t)> zero = {});

    Real operator()(std::size_t n, std::size_t i) const;
    LogAbs log_abs(std::size_t n, std::size_t i) const;
    std::optional<LogAbs> log_abs_at(const Real &n, const Real &log_n, std::size_t i) const
    {
        return src_->log_value_at(n, log_n, i);
    }
    bool structurally_zero(std::size_t n) const { return src_->structurally_zero(n); }
    std::optional<std::size_t> depth() const { return src_->depth(); }
    /// Throws ConfigError if the family is shorter than n_max.
    void require_depth(std::size_t n_max) const;
    std::string describe() const { return src_->describe(); }

    /// Table copy of rows 0..n_max.
    HpsCoefficients materialize(std::size_t n_max) const;
    /// a_n at every grid point, as a net.
    GenNum row(std::size_t n) const;

    const NetContext &context() const { return *ctx_; }
    const ContextPtr &context_ptr() const { return ctx_; }

    std::optional<WeakWitness> witness;

private:
    ContextPtr ctx_;
    std::shared_ptr<const CoefficientSource> src_;
};

/// CSV round trip: header "n,eps_index,value", n-major, eps-minor.
void write_table_csv(const HpsCoefficients &a, std::size_t n_max, std::ostream &os);
HpsCoefficients read_table_csv(ContextPtr ctx, std::istream &is, std::string description = "csv table");

struct HpsSeries {
    HpsCoefficients coeffs;
    GenNum center;
    Verdict gauge_order; // gauge_le_star(sigma, rho), recorded at construction
    std::string name;

    HpsSeries(HpsCoefficients a, GenNum c, std::string name = {}, long Q_max = 8);

    const NetContext &context() const { return coeffs.context(); }
};

} // namespace hps

#endif
