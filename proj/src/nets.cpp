#include <hps/nets.hpp>

#include <algorithm>

namespace hps
{

namespace
{

// Valuations are snapped to quarter exponents when they sit within rounding
// noise of one, so that pure powers of the gauge read back exactly.
Real snap_exponent(const Real &v)
{
    return snap(v, 4);
}

std::size_t argmin(const std::vector<Real> &v, const std::vector<std::size_t> &idx)
{
    std::size_t best = idx.front();
    for (std::size_t i : idx) {
        if (v[i] < v[best]) {
            best = i;
        }
    }
    return best;
}

bool non_decreasing(const std::vector<Real> &v, const std::vector<std::size_t> &idx, double tol)
{
    const Real t(tol);
    for (std::size_t k = 1; k < idx.size(); ++k) {
        const Real &prev = v[idx[k - 1]];
        const Real &cur = v[idx[k]];
        if (prev.is_inf() && prev.sign() > 0) {
            if (!(cur.is_inf() && cur.sign() > 0)) {
                return false;
            }
            continue;
        }
        if (cur < prev - t) {
            return false;
        }
    }
    return true;
}

bool non_increasing(const std::vector<Real> &v, const std::vector<std::size_t> &idx, double tol)
{
    const Real t(tol);
    for (std::size_t k = 1; k < idx.size(); ++k) {
        if (v[idx[k]] > v[idx[k - 1]] + t) {
            return false;
        }
    }
    return true;
}

bool strictly_decreasing(const std::vector<Real> &v, const std::vector<std::size_t> &idx)
{
    if (idx.size() < 2) {
        return false;
    }
    for (std::size_t k = 1; k < idx.size(); ++k) {
        const Real &a = v[idx[k - 1]];
        const Real &b = v[idx[k]];
        const bool both_neg_inf = a.is_inf() && b.is_inf() && a.sign() < 0 && b.sign() < 0;
        if (!(b < a) && !both_neg_inf) {
            return false;
        }
    }
    return true;
}

std::vector<std::size_t> checked_tail(const EpsGrid &grid)
{
    auto t = grid.tail();
    if (t.empty()) {
        throw ConfigError("empty grid tail");
    }
    return t;
}

Counterexample make_cx(const EpsGrid &grid, std::size_t i, std::string detail, json values = json::object())
{
    Counterexample cx;
    cx.grid_index = i;
    cx.eps = grid.points[i];
    cx.detail = std::move(detail);
    cx.values = std::move(values);
    return cx;
}

Env bare_env(const Real &eps)
{
    return Env{eps, eps, log(eps), std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
}

} // namespace

EpsGrid EpsGrid::decades(int k_lo, int k_hi, std::size_t tail_start)
{
    EpsGrid g;
    for (int k = k_lo; k <= k_hi; ++k) {
        g.points.push_back(pow(Real(10), static_cast<long>(-k)));
    }
    g.tail_start = tail_start;
    g.validate();
    return g;
}

std::vector<std::size_t> EpsGrid::tail() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = tail_start; i < points.size(); ++i) {
        out.push_back(i);
    }
    return out;
}

void EpsGrid::validate() const
{
    if (points.empty()) {
        throw ConfigError("eps grid is empty");
    }
    if (tail_start >= points.size()) {
        throw ConfigError("tail_start " + std::to_string(tail_start) + " outside grid of size "
                          + std::to_string(points.size()));
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Real &p = points[i];
        if (!(p.sign() > 0) || p > Real(1)) {
            throw ConfigError("eps grid point #" + std::to_string(i) + " = " + p.str(20) + " not in (0,1]");
        }
        if (i > 0 && !(p < points[i - 1])) {
            throw ConfigError("eps grid not strictly decreasing at #" + std::to_string(i));
        }
    }
}

Gauge Gauge::from_expr(std::string name, const NetExpr &expr, const EpsGrid &grid, const Gauge *rho)
{
    if (!rho && expr.uses(NetExpr::Var::Rho)) {
        throw InvalidGauge("gauge '" + name + "' refers to rho, which is not available here");
    }
    if (expr.uses(NetExpr::Var::Sigma)) {
        throw InvalidGauge("gauge '" + name + "' refers to sigma");
    }
    Gauge g;
    g.name_ = std::move(name);
    g.expr_ = expr;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Env env = bare_env(grid.points[i]);
        if (rho) {
            env.rho = rho->values_[i];
            env.log_rho = rho->log_values_[i];
        }
        LogAbs la;
        try {
            la = eval_log(expr, env);
        } catch (const EvalError &e) {
            throw InvalidGauge("gauge '" + g.name_ + "': " + e.what());
        }
        if (la.sign <= 0) {
            throw InvalidGauge("gauge '" + g.name_ + "' is not positive at eps#" + std::to_string(i));
        }
        Real v;
        try {
            v = eval(expr, env);
        } catch (const EvalError &) {
            v = la.value();
        }
        if (v.is_zero() || !v.is_finite()) {
            v = la.value();
        }
        g.values_.push_back(v);
        g.log_values_.push_back(la.log_abs);
    }
    g.validate();
    return g;
}

Gauge Gauge::identity(const EpsGrid &grid)
{
    return from_expr("rho", NetExpr::parse("eps", ExprContext::Net), grid);
}

void Gauge::validate() const
{
    for (std::size_t i = 0; i < log_values_.size(); ++i) {
        const Real &l = log_values_[i];
        if (!l.is_finite()) {
            throw InvalidGauge("gauge '" + name_ + "' is not finite and positive at eps#" + std::to_string(i));
        }
        if (l > noise_floor(Real(1))) {
            throw InvalidGauge("gauge '" + name_ + "' exceeds 1 at eps#" + std::to_string(i));
        }
        if (i > 0 && l > log_values_[i - 1] + noise_floor(max(Real(1), abs(l)))) {
            throw InvalidGauge("gauge '" + name_ + "' increases at eps#" + std::to_string(i));
        }
    }
    if (log_values_.size() > 1 && !(log_values_.back() < log_values_.front())) {
        throw InvalidGauge("gauge '" + name_ + "' does not decrease along the grid");
    }
}

Env NetContext::env(std::size_t i) const
{
    Env e{grid.points[i], rho.values()[i], rho.log_values()[i], sigma.values()[i], sigma.log_values()[i],
          std::nullopt, std::nullopt, std::nullopt};
    return e;
}

ContextPtr make_context(EpsGrid grid, const std::string &rho_expr, const std::string &sigma_expr)
{
    grid.validate();
    Gauge rho = Gauge::from_expr("rho", NetExpr::parse(rho_expr, ExprContext::Net), grid);
    Gauge sigma = Gauge::from_expr("sigma", NetExpr::parse(sigma_expr, ExprContext::Net), grid, &rho);
    return std::make_shared<const NetContext>(NetContext{std::move(grid), std::move(rho), std::move(sigma)});
}

GenNum GenNum::from_expr(const NetExpr &expr, const NetContext &ctx)
{
    GenNum g;
    g.expr = expr;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        Real v = eval(expr, ctx.env(i));
        if (!v.is_finite()) {
            throw EvalError("net value is not finite at eps#" + std::to_string(i), expr.str());
        }
        g.values.push_back(std::move(v));
    }
    return g;
}

GenNum GenNum::from_expr(const std::string &text, const NetContext &ctx)
{
    return from_expr(NetExpr::parse(text, ExprContext::Net), ctx);
}

GenNum GenNum::constant(const Real &c, std::size_t size)
{
    GenNum g;
    g.values.assign(size, c);
    return g;
}

GenNum GenNum::gauge_power(const NetContext &ctx, const Real &k)
{
    GenNum g;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        g.values.push_back(exp(k * ctx.rho.log_values()[i]));
    }
    return g;
}

namespace
{

template <typename Op>
GenNum zip(const GenNum &a, const GenNum &b, Op op)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("generalized numbers on different grids");
    }
    GenNum out;
    out.values.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.values.push_back(op(a.values[i], b.values[i]));
    }
    return out;
}

} // namespace

GenNum operator+(const GenNum &a, const GenNum &b)
{
    return zip(a, b, [](const Real &x, const Real &y) { return x + y; });
}

GenNum operator-(const GenNum &a, const GenNum &b)
{
    return zip(a, b, [](const Real &x, const Real &y) { return x - y; });
}

GenNum operator*(const GenNum &a, const GenNum &b)
{
    return zip(a, b, [](const Real &x, const Real &y) { return x * y; });
}

GenNum operator/(const GenNum &a, const GenNum &b)
{
    return zip(a, b, [](const Real &x, const Real &y) { return x / y; });
}

GenNum abs(const GenNum &a)
{
    GenNum out;
    for (const auto &v : a.values) {
        out.values.push_back(abs(v));
    }
    return out;
}

std::string to_string(Status s)
{
    switch (s) {
        case Status::Pass:
            return "pass";
        case Status::Fail:
            return "fail";
        case Status::Inconclusive:
            return "inconclusive";
    }
    return "?";
}

Verdict Verdict::pass(json witness, std::string notes)
{
    Verdict v;
    v.status = Status::Pass;
    v.witness = std::move(witness);
    v.notes = std::move(notes);
    return v;
}

Verdict Verdict::fail(Counterexample cx, std::string notes, json witness)
{
    Verdict v;
    v.status = Status::Fail;
    v.counterexample = std::move(cx);
    v.notes = std::move(notes);
    v.witness = std::move(witness);
    return v;
}

Verdict Verdict::inconclusive(std::string notes, json witness)
{
    Verdict v;
    v.status = Status::Inconclusive;
    v.notes = std::move(notes);
    v.witness = std::move(witness);
    return v;
}

json Verdict::to_json() const
{
    json j;
    j["status"] = to_string(status);
    j["witness"] = witness;
    if (counterexample) {
        j["counterexample"] = {{"grid_index", counterexample->grid_index},
                               {"eps", real_json(counterexample->eps)},
                               {"detail", counterexample->detail},
                               {"values", counterexample->values}};
    }
    if (!notes.empty()) {
        j["notes"] = notes;
    }
    return j;
}

Status combine(Status a, Status b)
{
    if (a == Status::Fail || b == Status::Fail) {
        return Status::Fail;
    }
    if (a == Status::Inconclusive || b == Status::Inconclusive) {
        return Status::Inconclusive;
    }
    return Status::Pass;
}

std::vector<Real> valuation_from_logs(const std::vector<Real> &log_abs, const Gauge &rho, const EpsGrid &grid)
{
    if (log_abs.size() != grid.size() || rho.size() != grid.size()) {
        throw std::invalid_argument("net size does not match the grid");
    }
    std::vector<Real> v;
    v.reserve(log_abs.size());
    for (std::size_t i = 0; i < log_abs.size(); ++i) {
        const Real &lr = rho.log_values()[i];
        if (lr.is_zero()) {
            throw InvalidGauge("gauge '" + rho.name() + "' equals 1 at eps#" + std::to_string(i)
                               + "; valuations are undefined there");
        }
        if (log_abs[i].is_inf() && log_abs[i].sign() < 0) {
            v.push_back(Real::infinity(1));
        } else {
            v.push_back(snap_exponent(log_abs[i] / lr));
        }
    }
    return v;
}

std::vector<Real> valuation(const GenNum &x, const Gauge &rho, const EpsGrid &grid)
{
    std::vector<Real> logs;
    logs.reserve(x.size());
    for (const auto &val : x.values) {
        logs.push_back(val.is_zero() ? Real::infinity(-1) : log(abs(val)));
    }
    return valuation_from_logs(logs, rho, grid);
}

Verdict is_moderate_valuation(const std::vector<Real> &v, const EpsGrid &grid, long N_max)
{
    if (N_max < 0) {
        throw ConfigError("N_max must be non-negative");
    }
    const auto tail = checked_tail(grid);
    const std::size_t worst = argmin(v, tail);
    const Real &vmin = v[worst];
    if (vmin.is_inf() && vmin.sign() > 0) {
        return Verdict::pass({{"N", 0}}, "net vanishes on the tail");
    }
    const Real needed = max(Real(0), ceil(-vmin));
    const long N = needed.to_long();
    if (needed <= Real(N_max)) {
        return Verdict::pass({{"N", N}, {"min_valuation", real_json(vmin)}});
    }
    json w = {{"N_needed", real_json(needed)}, {"N_max", N_max}};
    if (strictly_decreasing(v, tail)) {
        return Verdict::fail(make_cx(grid, worst,
                                     "|x| > rho^-" + std::to_string(N_max) + " and the valuation keeps decreasing",
                                     {{"valuation", real_json(vmin)}}),
                             "valuation decreasing without bound on the tail", w);
    }
    return Verdict::inconclusive("bound rho^-N_max exceeded, but the valuation trend is not decreasing", w);
}

Verdict is_moderate(const GenNum &x, const Gauge &rho, const EpsGrid &grid, long N_max)
{
    return is_moderate_valuation(valuation(x, rho, grid), grid, N_max);
}

Verdict is_negligible_valuation(const std::vector<Real> &v, const EpsGrid &grid, long q_max)
{
    if (q_max < 1) {
        throw ConfigError("q_max must be at least 1");
    }
    const auto tail = checked_tail(grid);
    const std::size_t worst = argmin(v, tail);
    const Real &vmin = v[worst];
    if (vmin.is_inf() && vmin.sign() > 0) {
        return Verdict::pass({{"q", q_max}}, "net vanishes on the tail");
    }
    const bool rising = non_decreasing(v, tail, trend_tolerance);
    json w = {{"min_valuation", real_json(vmin)}};
    if (vmin >= Real(q_max) && rising) {
        w["q"] = q_max;
        return Verdict::pass(w);
    }
    // A valuation that keeps growing along the tail witnesses every q, even
    // when its smallest value is below q_max.
    bool growing = tail.size() >= 2;
    for (std::size_t k = 1; k < tail.size() && growing; ++k) {
        const Real &a = v[tail[k - 1]];
        const Real &b = v[tail[k]];
        growing = (b.is_inf() && b.sign() > 0) || b > a + Real(trend_tolerance);
    }
    if (growing && vmin >= Real(1)) {
        w["q"] = floor(vmin).to_long();
        return Verdict::pass(w, "valuation increasing along the tail");
    }
    if (vmin < Real(1) && non_increasing(v, tail, trend_tolerance)) {
        return Verdict::fail(make_cx(grid, worst, "|x| > rho^1 and the valuation is not increasing",
                                     {{"valuation", real_json(vmin)}}),
                             "", w);
    }
    if (vmin >= Real(q_max)) {
        return Verdict::inconclusive("bound rho^q_max holds but the valuation decreases along the tail", w);
    }
    Real vmax = vmin;
    for (std::size_t i : tail) {
        if (v[i].is_finite()) {
            vmax = max(vmax, v[i]);
        }
    }
    if (vmax - vmin <= Real(trend_tolerance) * Real(static_cast<long>(tail.size()))) {
        return Verdict::inconclusive("moderate, non-negligible", w);
    }
    return Verdict::inconclusive("valuation below q_max on the tail", w);
}

Verdict is_negligible(const GenNum &x, const Gauge &rho, const EpsGrid &grid, long q_max)
{
    return is_negligible_valuation(valuation(x, rho, grid), grid, q_max);
}

Real clean_difference(const Real &a, const Real &b)
{
    Real d = abs(a - b);
    if (d <= noise_floor(max(abs(a), abs(b)))) {
        return Real(0);
    }
    return d;
}

Verdict ext_eq(const ExtGenNum &x, const ExtGenNum &y, const Gauge &rho, const EpsGrid &grid, long q_max)
{
    if (x.size() != y.size() || x.size() != grid.size()) {
        throw std::invalid_argument("ext_eq: shapes differ");
    }
    const auto tail = checked_tail(grid);
    std::vector<Real> logs(grid.size(), Real::infinity(-1));
    for (std::size_t i : tail) {
        const Real &a = x.values[i];
        const Real &b = y.values[i];
        if (a.is_nan() || b.is_nan()) {
            throw std::invalid_argument("ext_eq: NaN value");
        }
        if (a.is_inf() || b.is_inf()) {
            if (!(a == b)) {
                return Verdict::fail(make_cx(grid, i, "infinite values differ",
                                             {{"x", real_json(a)}, {"y", real_json(b)}}));
            }
            continue;
        }
        Real d = clean_difference(a, b);
        if (!d.is_zero()) {
            logs[i] = log(d);
        }
    }
    return is_negligible_valuation(valuation_from_logs(logs, rho, grid), grid, q_max);
}

Verdict gauge_le_star(const Gauge &sigma, const Gauge &rho, const EpsGrid &grid, long Q_max)
{
    const auto tail = checked_tail(grid);
    std::vector<Real> ratio(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Real &lr = rho.log_values()[i];
        if (lr.is_zero()) {
            throw InvalidGauge("gauge '" + rho.name() + "' equals 1 at eps#" + std::to_string(i));
        }
        ratio[i] = snap_exponent(sigma.log_values()[i] / lr);
    }
    const std::size_t worst = argmin(ratio, tail);
    const Real &rmin = ratio[worst];
    if (rmin > Real(Q_max)) {
        return Verdict::pass({{"Q", Q_max}, {"saturated", true}},
                             "sigma << every rho^Q on grid (Q saturated at Q_max)");
    }
    const Real Q = floor(rmin * Real(4)) / Real(4);
    if (Q.sign() > 0) {
        return Verdict::pass({{"Q", Q.to_double()}, {"saturated", false}});
    }
    return Verdict::fail(make_cx(grid, worst, "sigma > rho^(1/4)", {{"log_sigma_over_log_rho", real_json(rmin)}}));
}

HyperNat hypernat_from_expr(const NetExpr &expr, const Gauge &sigma, const EpsGrid &grid, long M_max,
                            const Gauge *rho)
{
    const auto tail = checked_tail(grid);
    HyperNat N;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Env env = bare_env(grid.points[i]);
        if (rho) {
            env.rho = rho->values()[i];
            env.log_rho = rho->log_values()[i];
        }
        env.sigma = sigma.values()[i];
        env.log_sigma = sigma.log_values()[i];
        std::optional<Real> direct;
        try {
            Real v = eval(expr, env);
            if (v.is_finite()) {
                direct = std::move(v);
            }
        } catch (const EvalError &) {
        }
        if (direct) {
            if (direct->sign() < 0) {
                throw NotHypernatural("expression '" + expr.str() + "' is negative at eps#" + std::to_string(i));
            }
            Real n = floor(snap(*direct));
            N.log_values.push_back(n.is_zero() ? Real::infinity(-1) : log(n));
            N.values.push_back(std::move(n));
            continue;
        }
        LogAbs la = eval_log(expr, env);
        if (la.sign < 0) {
            throw NotHypernatural("expression '" + expr.str() + "' is negative at eps#" + std::to_string(i));
        }
        Real v = la.value();
        N.values.push_back(v.is_finite() ? floor(v) : Real::infinity(1));
        N.log_values.push_back(la.log_abs);
    }
    Real M(0);
    for (std::size_t i : tail) {
        const Real &ln = N.log_values[i];
        if (ln.sign() <= 0) {
            continue;
        }
        M = max(M, ceil(snap(ln / -sigma.log_values()[i])));
    }
    if (M > Real(M_max)) {
        throw NotHypernatural("'" + expr.str() + "' needs sigma^-M with M = " + M.str(12) + " > M_max = "
                              + std::to_string(M_max) + "; it is not sigma-moderate");
    }
    N.sigma_witness = M.to_long();
    return N;
}

HyperNat sigma_power(const NetContext &ctx, long j)
{
    HyperNat N;
    N.sigma_witness = j;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        Real l = Real(-j) * ctx.sigma.log_values()[i];
        Real v = exp(l);
        if (v.is_finite()) {
            Real n = floor(snap(v));
            N.log_values.push_back(n.is_zero() ? Real::infinity(-1) : log(n));
            N.values.push_back(std::move(n));
        } else {
            N.values.push_back(Real::infinity(1));
            N.log_values.push_back(std::move(l));
        }
    }
    return N;
}

std::vector<std::size_t> restrict_tail(const EpsGrid &grid, const std::vector<std::size_t> &subset)
{
    std::vector<std::size_t> out;
    for (std::size_t i : subset) {
        if (i >= grid.tail_start && i < grid.size()) {
            out.push_back(i);
        }
    }
    return out;
}

json real_json(const Real &x)
{
    return x.str(40);
}

json reals_json(const std::vector<Real> &xs)
{
    json a = json::array();
    for (const auto &x : xs) {
        a.push_back(real_json(x));
    }
    return a;
}

} // namespace hps
