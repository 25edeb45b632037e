// Finite-grid realization of nets over eps in (0,1]: grids, gauges,
// generalized numbers, hypernaturals and the three-valued predicates built on
// them.

#ifndef HPS_NETS_HPP
#define HPS_NETS_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <hps/errors.hpp>
#include <hps/expr.hpp>
#include <hps/real.hpp>

namespace hps
{

using json = nlohmann::ordered_json;

/// Strictly decreasing eps values in (0,1]; asymptotic predicates are
/// checked on the tail [tail_start, size).
struct EpsGrid {
    std::vector<Real> points;
    std::size_t tail_start = 0;

    /// eps = 10^-k for k = k_lo..k_hi.
    static EpsGrid decades(int k_lo, int k_hi, std::size_t tail_start = 0);

    std::size_t size() const { return points.size(); }
    std::vector<std::size_t> tail() const;
    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

class Gauge
{
public:
    /// Evaluates `expr` on the grid. `rho` must be given when the expression
    /// refers to rho (as in sigma = exp(-exp(1/rho))).
    static Gauge from_expr(std::string name, const NetExpr &expr, const EpsGrid &grid, const Gauge *rho = nullptr);
    /// rho_eps = eps.
    static Gauge identity(const EpsGrid &grid);

    const std::string &name() const { return name_; }
    const std::optional<NetExpr> &expr() const { return expr_; }
    /// Values may underflow to 0 for extremely small gauges; log_values never do.
    const std::vector<Real> &values() const { return values_; }
    const std::vector<Real> &log_values() const { return log_values_; }
    std::size_t size() const { return values_.size(); }

private:
    Gauge() = default;
    void validate() const;

    std::string name_;
    std::optional<NetExpr> expr_;
    std::vector<Real> values_;
    std::vector<Real> log_values_;
};

/// A grid, the gauge rho every predicate is measured against, and the gauge
/// sigma used for hypernatural truncations.
struct NetContext {
    EpsGrid grid;
    Gauge rho;
    Gauge sigma;

    std::size_t size() const { return grid.size(); }
    Env env(std::size_t i) const;
};

using ContextPtr = std::shared_ptr<const NetContext>;

ContextPtr make_context(EpsGrid grid, const std::string &rho_expr = "eps", const std::string &sigma_expr = "rho");

/// One representative net, a value per grid point.
struct GenNum {
    std::vector<Real> values;
    std::optional<NetExpr> expr;

    static GenNum from_expr(const NetExpr &expr, const NetContext &ctx);
    static GenNum from_expr(const std::string &text, const NetContext &ctx);
    static GenNum constant(const Real &c, std::size_t size);
    /// The net rho_eps^k.
    static GenNum gauge_power(const NetContext &ctx, const Real &k);

    std::size_t size() const { return values.size(); }
    const Real &operator[](std::size_t i) const { return values[i]; }
};

GenNum operator+(const GenNum &a, const GenNum &b);
GenNum operator-(const GenNum &a, const GenNum &b);
GenNum operator*(const GenNum &a, const GenNum &b);
GenNum operator/(const GenNum &a, const GenNum &b);
GenNum abs(const GenNum &a);

/// Values in R plus -inf/+inf (radii).
struct ExtGenNum {
    std::vector<Real> values;

    ExtGenNum() = default;
    explicit ExtGenNum(std::vector<Real> v) : values(std::move(v)) {}
    ExtGenNum(const GenNum &g) : values(g.values) {}
    std::size_t size() const { return values.size(); }
};

/// Non-negative integer net N_eps bounded by sigma_eps^-M on the tail. Values
/// too large for the exponent range are carried by their logarithm only
/// (value = +inf).
struct HyperNat {
    std::vector<Real> values;
    std::vector<Real> log_values;
    long sigma_witness = 0;

    std::size_t size() const { return values.size(); }
    bool representable(std::size_t i) const { return values[i].is_finite(); }
};

enum class Status { Pass, Fail, Inconclusive };

std::string to_string(Status s);

struct Counterexample {
    std::size_t grid_index = 0;
    Real eps;
    std::string detail;
    json values = json::object();
};

struct Verdict {
    Status status = Status::Inconclusive;
    json witness = json::object();
    std::optional<Counterexample> counterexample;
    std::string notes;

    static Verdict pass(json witness, std::string notes = {});
    static Verdict fail(Counterexample cx, std::string notes = {}, json witness = json::object());
    static Verdict inconclusive(std::string notes, json witness = json::object());

    bool passed() const { return status == Status::Pass; }
    bool failed() const { return status == Status::Fail; }
    json to_json() const;
};

/// Conjunction: Fail dominates Inconclusive dominates Pass.
Status combine(Status a, Status b);

/// Tolerance on valuation exponents used by the trend proxies.
inline constexpr double trend_tolerance = 0.05;

/// v_eps = log|x_eps| / log rho_eps (+inf where x_eps = 0).
std::vector<Real> valuation(const GenNum &x, const Gauge &rho, const EpsGrid &grid);
/// Same, from precomputed log|x_eps| (for values outside the exponent range).
std::vector<Real> valuation_from_logs(const std::vector<Real> &log_abs, const Gauge &rho, const EpsGrid &grid);

Verdict is_moderate(const GenNum &x, const Gauge &rho, const EpsGrid &grid, long N_max);
Verdict is_moderate_valuation(const std::vector<Real> &v, const EpsGrid &grid, long N_max);
Verdict is_negligible(const GenNum &x, const Gauge &rho, const EpsGrid &grid, long q_max);
Verdict is_negligible_valuation(const std::vector<Real> &v, const EpsGrid &grid, long q_max);
Verdict ext_eq(const ExtGenNum &x, const ExtGenNum &y, const Gauge &rho, const EpsGrid &grid, long q_max);
Verdict gauge_le_star(const Gauge &sigma, const Gauge &rho, const EpsGrid &grid, long Q_max);
HyperNat hypernat_from_expr(const NetExpr &expr, const Gauge &sigma, const EpsGrid &grid, long M_max,
                            const Gauge *rho = nullptr);
/// N_eps = floor(sigma_eps^-j).
HyperNat sigma_power(const NetContext &ctx, long j);

/// |a - b| with differences below the rounding noise of max(|a|,|b|) set to 0.
Real clean_difference(const Real &a, const Real &b);

/// Grid indices forming a subpoint: verdict helpers restricted to them.
std::vector<std::size_t> restrict_tail(const EpsGrid &grid, const std::vector<std::size_t> &subset);

json real_json(const Real &x);
json reals_json(const std::vector<Real> &xs);

} // namespace hps

#endif
