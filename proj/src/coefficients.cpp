#include <hps/coefficients.hpp>

#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

namespace hps
{

LogAbs CoefficientSource::log_value(std::size_t n, std::size_t i) const
{
    Real v = value(n, i);
    if (v.is_zero()) {
        return {Real::infinity(-1), 0};
    }
    return {log(abs(v)), v.sign()};
}

std::optional<LogAbs> CoefficientSource::log_value_at(const Real &n, const Real &, std::size_t i) const
{
    if (!n.is_finite() || n.sign() < 0 || n > Real(static_cast<unsigned long>(1ul << 62))) {
        return std::nullopt;
    }
    try {
        return log_value(static_cast<std::size_t>(n.to_long()), i);
    } catch (const Error &) {
        return std::nullopt;
    }
}

namespace
{

class ExprSource : public CoefficientSource
{
public:
    ExprSource(ContextPtr ctx, NetExpr e) : ctx_(std::move(ctx)), expr_(std::move(e)) {}

    Real value(std::size_t n, std::size_t i) const override
    {
        Env env = ctx_->env(i);
        env.n = Real(static_cast<unsigned long>(n));
        Real v = eval(expr_, env);
        if (!v.is_finite()) {
            throw PrecisionError("coefficient '" + expr_.str() + "' is not finite", n, i);
        }
        return v;
    }

    LogAbs log_value(std::size_t n, std::size_t i) const override
    {
        Env env = ctx_->env(i);
        env.n = Real(static_cast<unsigned long>(n));
        try {
            Real v = eval(expr_, env);
            if (v.is_finite() && !v.is_zero()) {
                return {log(abs(v)), v.sign()};
            }
        } catch (const EvalError &) {
        }
        return eval_log(expr_, env);
    }

    std::optional<LogAbs> log_value_at(const Real &n, const Real &log_n, std::size_t i) const override
    {
        if (n.is_finite() && n <= Real(static_cast<unsigned long>(1ul << 62))) {
            return CoefficientSource::log_value_at(n, log_n, i);
        }
        Env env = ctx_->env(i);
        env.n = n;
        env.log_n = log_n;
        try {
            LogAbs la = eval_log(expr_, env);
            if (la.log_abs.is_nan()) {
                return std::nullopt;
            }
            return la;
        } catch (const Error &) {
            return std::nullopt;
        }
    }

    std::string describe() const override { return expr_.str(); }

private:
    ContextPtr ctx_;
    NetExpr expr_;
};

class SequenceSource : public CoefficientSource
{
public:
    SequenceSource(std::function<Real(std::size_t)> f, std::string d) : f_(std::move(f)), desc_(std::move(d)) {}
    Real value(std::size_t n, std::size_t) const override { return f_(n); }
    std::string describe() const override { return desc_; }

private:
    std::function<Real(std::size_t)> f_;
    std::string desc_;
};

class TableSource : public CoefficientSource
{
public:
    TableSource(HpsCoefficients::Table rows, std::string d) : rows_(std::move(rows)), desc_(std::move(d)) {}

    Real value(std::size_t n, std::size_t i) const override
    {
        if (n >= rows_.size()) {
            throw CoefficientRange(n, rows_.empty() ? 0 : rows_.size() - 1);
        }
        return rows_[n].at(i);
    }
    std::optional<std::size_t> depth() const override { return rows_.empty() ? 0 : rows_.size() - 1; }
    std::string describe() const override { return desc_; }
    bool structurally_zero(std::size_t n) const override
    {
        if (n >= rows_.size()) {
            return false;
        }
        for (const auto &v : rows_[n]) {
            if (!v.is_zero()) {
                return false;
            }
        }
        return true;
    }

private:
    HpsCoefficients::Table rows_;
    std::string desc_;
};

class FunctionSource : public CoefficientSource
{
public:
    FunctionSource(HpsCoefficients::Fn f, std::string d, std::optional<std::size_t> depth,
                   std::function<bool(std::size_t)> zero)
        : f_(std::move(f)), desc_(std::move(d)), depth_(depth), zero_(std::move(zero))
    {
    }
    Real value(std::size_t n, std::size_t i) const override
    {
        if (depth_ && n > *depth_) {
            throw CoefficientRange(n, *depth_);
        }
        return f_(n, i);
    }
    std::optional<std::size_t> depth() const override { return depth_; }
    std::string describe() const override { return desc_; }
    bool structurally_zero(std::size_t n) const override { return zero_ && zero_(n); }

private:
    HpsCoefficients::Fn f_;
    std::string desc_;
    std::optional<std::size_t> depth_;
    std::function<bool(std::size_t)> zero_;
};

class MemoSource : public CoefficientSource
{
public:
    MemoSource(HpsCoefficients::RowFn row, std::string d, std::function<bool(std::size_t)> zero)
        : row_(std::move(row)), desc_(std::move(d)), zero_(std::move(zero))
    {
    }

    Real value(std::size_t n, std::size_t i) const override
    {
        std::lock_guard<std::mutex> lock(mu_);
        while (rows_.size() <= n) {
            auto r = row_(rows_.size(), rows_);
            rows_.push_back(std::move(r));
        }
        return rows_[n].at(i);
    }
    std::string describe() const override { return desc_; }
    bool structurally_zero(std::size_t n) const override { return zero_ && zero_(n); }

private:
    HpsCoefficients::RowFn row_;
    std::string desc_;
    std::function<bool(std::size_t)> zero_;
    mutable std::mutex mu_;
    mutable HpsCoefficients::Table rows_;
};

} // namespace

HpsCoefficients::HpsCoefficients(ContextPtr ctx, std::shared_ptr<const CoefficientSource> src)
    : ctx_(std::move(ctx)), src_(std::move(src))
{
}

HpsCoefficients HpsCoefficients::from_expr(ContextPtr ctx, const NetExpr &expr)
{
    if (expr.uses(NetExpr::Var::X)) {
        throw ConfigError("coefficient expression may not use x");
    }
    auto src = std::make_shared<ExprSource>(ctx, expr);
    return HpsCoefficients(std::move(ctx), std::move(src));
}

HpsCoefficients HpsCoefficients::from_expr(ContextPtr ctx, const std::string &text)
{
    return from_expr(std::move(ctx), NetExpr::parse(text, ExprContext::Coefficient));
}

HpsCoefficients HpsCoefficients::from_sequence(ContextPtr ctx, std::function<Real(std::size_t)> f,
                                               std::string description)
{
    auto src = std::make_shared<SequenceSource>(std::move(f), std::move(description));
    return HpsCoefficients(std::move(ctx), std::move(src));
}

HpsCoefficients HpsCoefficients::from_table(ContextPtr ctx, Table rows, std::string description)
{
    for (const auto &r : rows) {
        if (r.size() != ctx->size()) {
            throw ConfigError("coefficient table row has " + std::to_string(r.size()) + " entries, grid has "
                              + std::to_string(ctx->size()));
        }
    }
    auto src = std::make_shared<TableSource>(std::move(rows), std::move(description));
    return HpsCoefficients(std::move(ctx), std::move(src));
}

HpsCoefficients HpsCoefficients::from_function(ContextPtr ctx, Fn f, std::string description,
                                               std::optional<std::size_t> depth,
                                               std::function<bool(std::size_t)> zero)
{
    auto src = std::make_shared<FunctionSource>(std::move(f), std::move(description), depth, std::move(zero));
    return HpsCoefficients(std::move(ctx), std::move(src));
}

HpsCoefficients HpsCoefficients::zero(ContextPtr ctx)
{
    return from_function(
        std::move(ctx), [](std::size_t, std::size_t) { return Real(0); }, "0", std::nullopt,
        [](std::size_t) { return true; });
}

HpsCoefficients HpsCoefficients::memoized(ContextPtr ctx, RowFn row, std::string description,
                                          std::function<bool(std::size_t)> zero)
{
    auto src = std::make_shared<MemoSource>(std::move(row), std::move(description), std::move(zero));
    return HpsCoefficients(std::move(ctx), std::move(src));
}

Real HpsCoefficients::operator()(std::size_t n, std::size_t i) const
{
    return src_->value(n, i);
}

LogAbs HpsCoefficients::log_abs(std::size_t n, std::size_t i) const
{
    return src_->log_value(n, i);
}

void HpsCoefficients::require_depth(std::size_t n_max) const
{
    if (auto d = depth(); d && *d < n_max) {
        throw ConfigError("coefficient family '" + describe() + "' has depth " + std::to_string(*d)
                          + ", need n_max = " + std::to_string(n_max));
    }
}

HpsCoefficients HpsCoefficients::materialize(std::size_t n_max) const
{
    require_depth(n_max);
    Table rows(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        rows[n].reserve(ctx_->size());
        for (std::size_t i = 0; i < ctx_->size(); ++i) {
            rows[n].push_back((*this)(n, i));
        }
    }
    HpsCoefficients out = from_table(ctx_, std::move(rows), describe());
    out.witness = witness;
    return out;
}

GenNum HpsCoefficients::row(std::size_t n) const
{
    GenNum g;
    for (std::size_t i = 0; i < ctx_->size(); ++i) {
        g.values.push_back((*this)(n, i));
    }
    return g;
}

void write_table_csv(const HpsCoefficients &a, std::size_t n_max, std::ostream &os)
{
    os << "n,eps_index,value\n";
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t i = 0; i < a.context().size(); ++i) {
            os << n << ',' << i << ',' << a(n, i).str() << '\n';
        }
    }
}

HpsCoefficients read_table_csv(ContextPtr ctx, std::istream &is, std::string description)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("n,eps_index,value", 0) != 0) {
        throw ConfigError("coefficient CSV: missing header 'n,eps_index,value'");
    }
    HpsCoefficients::Table rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string f_n, f_i, f_v;
        if (!std::getline(ls, f_n, ',') || !std::getline(ls, f_i, ',') || !std::getline(ls, f_v)) {
            throw ConfigError("coefficient CSV line " + std::to_string(lineno) + ": expected 3 fields");
        }
        std::size_t n = 0, i = 0;
        try {
            n = std::stoul(f_n);
            i = std::stoul(f_i);
        } catch (const std::exception &) {
            throw ConfigError("coefficient CSV line " + std::to_string(lineno) + ": bad index");
        }
        const bool starts_row = i == 0 && n == rows.size() && (rows.empty() || rows.back().size() == ctx->size());
        const bool continues_row = i > 0 && i < ctx->size() && !rows.empty() && n == rows.size() - 1
                                   && rows.back().size() == i;
        if (!starts_row && !continues_row) {
            throw ConfigError("coefficient CSV line " + std::to_string(lineno)
                              + ": rows must be n-major, eps-minor and complete");
        }
        if (starts_row) {
            rows.emplace_back();
        }
        try {
            rows.back().push_back(Real::parse(f_v));
        } catch (const std::invalid_argument &e) {
            throw ConfigError("coefficient CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!rows.empty() && rows.back().size() != ctx->size()) {
        throw ConfigError("coefficient CSV: last row incomplete");
    }
    return HpsCoefficients::from_table(std::move(ctx), std::move(rows), std::move(description));
}

HpsSeries::HpsSeries(HpsCoefficients a, GenNum c, std::string nm, long Q_max)
    : coeffs(std::move(a)), center(std::move(c)), name(std::move(nm))
{
    const NetContext &ctx = coeffs.context();
    if (center.size() != ctx.size()) {
        throw ConfigError("series center does not match the grid");
    }
    Verdict m = is_moderate(center, ctx.rho, ctx.grid, 64);
    if (m.failed()) {
        throw ConfigError("series center is not moderate");
    }
    gauge_order = gauge_le_star(ctx.sigma, ctx.rho, ctx.grid, Q_max);
}

} // namespace hps
