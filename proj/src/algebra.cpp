#include <hps/algebra.hpp>

#include <memory>

namespace hps
{

namespace
{

using Column = std::vector<Real>;

Column column(const HpsCoefficients &a, std::size_t n_max, std::size_t i)
{
    Column c;
    c.reserve(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        c.push_back(a.structurally_zero(n) ? Real(0) : a(n, i));
    }
    return c;
}

// Truncated product of two columns up to degree n_max.
Column mul(const Column &a, const Column &b, std::size_t n_max)
{
    Column out(n_max + 1, Real(0));
    for (std::size_t n = 0; n <= n_max; ++n) {
        Real s(0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k < a.size() && n - k < b.size() && !a[k].is_zero() && !b[n - k].is_zero()) {
                s += a[k] * b[n - k];
            }
        }
        out[n] = s;
    }
    return out;
}

// c_0 = a_0, c_n = sum_{k=1}^n a_k [B^k]_n with B = b - b_0.
Column compose_column(const Column &a, Column b, std::size_t n_max)
{
    b[0] = Real(0);
    Column out(n_max + 1, Real(0));
    out[0] = a[0];
    Column power = b; // B^k, starting at k = 1
    for (std::size_t k = 1; k <= n_max; ++k) {
        if (!a[k].is_zero()) {
            for (std::size_t n = k; n <= n_max; ++n) {
                out[n] += a[k] * power[n];
            }
        }
        if (k < n_max) {
            power = mul(power, b, n_max);
        }
    }
    return out;
}

Column abs_column(Column c)
{
    for (auto &v : c) {
        v = abs(v);
    }
    return c;
}

HpsCoefficients from_columns(const ContextPtr &ctx, const std::vector<Column> &cols, std::size_t n_max,
                             std::string desc)
{
    HpsCoefficients::Table rows(n_max + 1, std::vector<Real>(ctx->size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t n = 0; n <= n_max; ++n) {
            rows[n][i] = cols[i][n];
        }
    }
    return HpsCoefficients::from_table(ctx, std::move(rows), std::move(desc));
}

void same_context(const HpsCoefficients &a, const HpsCoefficients &b)
{
    if (a.context_ptr() != b.context_ptr() && a.context().size() != b.context().size()) {
        throw ConfigError("coefficient families live on different grids");
    }
}

std::optional<std::size_t> min_depth(const HpsCoefficients &a, const HpsCoefficients &b)
{
    auto da = a.depth();
    auto db = b.depth();
    if (da && db) {
        return std::min(*da, *db);
    }
    return da ? da : db;
}

} // namespace

Verdict attach_witness(HpsCoefficients &a, const WitnessOptions &opt)
{
    std::size_t n = opt.n_max;
    if (auto d = a.depth()) {
        n = std::min(n, *d);
    }
    if (n < 8) {
        a.witness.reset();
        return Verdict::inconclusive("family too short to derive a witness");
    }
    Verdict v = check_weak_moderate(a, n, opt.Q_max, opt.R_max);
    a.witness = witness_from(v);
    return v;
}

std::optional<long> invertibility_margin(const GenNum &x, const NetContext &ctx, long m_max)
{
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        if (x[i].is_zero()) {
            return std::nullopt;
        }
    }
    for (long m = 0; m <= m_max; ++m) {
        bool ok = true;
        for (std::size_t i : ctx.grid.tail()) {
            if (log(abs(x[i])) < Real(m) * ctx.rho.log_values()[i]) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return m;
        }
    }
    return std::nullopt;
}

HpsCoefficients scalar_mul(const GenNum &r, const HpsCoefficients &a, const WitnessOptions &opt)
{
    const NetContext &ctx = a.context();
    if (r.size() != ctx.size()) {
        throw ConfigError("scalar does not match the grid");
    }
    if (is_moderate(r, ctx.rho, ctx.grid, 64).failed()) {
        throw NotModerate("scalar factor is not moderate");
    }
    bool zero = true;
    for (const auto &v : r.values) {
        zero = zero && v.is_zero();
    }
    HpsCoefficients out = HpsCoefficients::from_function(
        a.context_ptr(), [r, a](std::size_t n, std::size_t i) { return r[i] * a(n, i); },
        "r*(" + a.describe() + ")", a.depth(),
        [a, zero](std::size_t n) { return zero || a.structurally_zero(n); });
    attach_witness(out, opt);
    return out;
}

HpsCoefficients add(const HpsCoefficients &a, const HpsCoefficients &b, const WitnessOptions &opt)
{
    same_context(a, b);
    HpsCoefficients out = HpsCoefficients::from_function(
        a.context_ptr(),
        [a, b](std::size_t n, std::size_t i) {
            Real x = a.structurally_zero(n) ? Real(0) : a(n, i);
            Real y = b.structurally_zero(n) ? Real(0) : b(n, i);
            return x + y;
        },
        "(" + a.describe() + ")+(" + b.describe() + ")", min_depth(a, b),
        [a, b](std::size_t n) { return a.structurally_zero(n) && b.structurally_zero(n); });
    attach_witness(out, opt);
    return out;
}

HpsCoefficients negate(const HpsCoefficients &a)
{
    HpsCoefficients out = HpsCoefficients::from_function(
        a.context_ptr(), [a](std::size_t n, std::size_t i) { return -a(n, i); }, "-(" + a.describe() + ")",
        a.depth(), [a](std::size_t n) { return a.structurally_zero(n); });
    out.witness = a.witness;
    return out;
}

HpsCoefficients cauchy_product(const HpsCoefficients &a, const HpsCoefficients &b, std::size_t n_max)
{
    same_context(a, b);
    const std::size_t size = a.context().size();
    // Row n only needs a_0..a_n and b_0..b_n; rows are memoized.
    auto row = [a, b, size](std::size_t n, const HpsCoefficients::Table &) {
        std::vector<Real> out(size, Real(0));
        for (std::size_t k = 0; k <= n; ++k) {
            if (a.structurally_zero(k) || b.structurally_zero(n - k)) {
                continue;
            }
            for (std::size_t i = 0; i < size; ++i) {
                out[i] += a(k, i) * b(n - k, i);
            }
        }
        return out;
    };
    bool a_zero = true, b_zero = true;
    for (std::size_t n = 0; n <= 64; ++n) {
        a_zero = a_zero && a.structurally_zero(n);
        b_zero = b_zero && b.structurally_zero(n);
    }
    std::function<bool(std::size_t)> zero;
    if (a_zero || b_zero) {
        // TODO: structural zeros of a product of two sparse families (e.g. even
        // x even) are not tracked; only the trivially zero case is.
        zero = [a, b](std::size_t n) {
            for (std::size_t k = 0; k <= n; ++k) {
                if (!a.structurally_zero(k) && !b.structurally_zero(n - k)) {
                    return false;
                }
            }
            return true;
        };
    }
    HpsCoefficients out = HpsCoefficients::memoized(a.context_ptr(), row,
                                                    "(" + a.describe() + ")*(" + b.describe() + ")", zero);
    if (auto d = min_depth(a, b)) {
        out = out.materialize(*d);
    }
    WitnessOptions wopt;
    wopt.n_max = n_max;
    attach_witness(out, wopt);
    return out;
}

HpsCoefficients reciprocal_div(const HpsCoefficients &a, const HpsCoefficients &b, std::size_t n_max, long m_max)
{
    same_context(a, b);
    const NetContext &ctx = a.context();
    if (!invertibility_margin(b.row(0), ctx, m_max)) {
        throw NotInvertible("b_0 is not invertible: |b_0| < rho^" + std::to_string(m_max) + " on the tail");
    }
    const std::size_t size = ctx.size();
    auto row = [a, b, size](std::size_t n, const HpsCoefficients::Table &d) {
        std::vector<Real> out(size);
        for (std::size_t i = 0; i < size; ++i) {
            Real s = a.structurally_zero(n) ? Real(0) : a(n, i);
            for (std::size_t l = 1; l <= n; ++l) {
                if (!b.structurally_zero(l) && !d[n - l][i].is_zero()) {
                    s -= b(l, i) * d[n - l][i];
                }
            }
            out[i] = s / b(0, i);
        }
        return out;
    };
    HpsCoefficients d = HpsCoefficients::memoized(a.context_ptr(), row,
                                                  "(" + a.describe() + ")/(" + b.describe() + ")");
    if (auto depth = min_depth(a, b)) {
        d = d.materialize(*depth);
    }
    // Round trip d * b = a, up to the rounding of the convolution.
    std::size_t check = n_max;
    if (auto depth = d.depth()) {
        check = std::min(check, *depth);
    }
    for (std::size_t i = 0; i < size; ++i) {
        Column dc = column(d, check, i);
        Column bc = column(b, check, i);
        Column prod = mul(dc, bc, check);
        Column scale = mul(abs_column(dc), abs_column(bc), check);
        for (std::size_t n = 0; n <= check; ++n) {
            Real an = a.structurally_zero(n) ? Real(0) : a(n, i);
            if (abs(prod[n] - an) > noise_floor(scale[n] + abs(an))) {
                throw PrecisionError("division round trip failed", n, i);
            }
        }
    }
    WitnessOptions wopt;
    wopt.n_max = n_max;
    attach_witness(d, wopt);
    return d;
}

HpsCoefficients compose(const HpsCoefficients &a, const HpsCoefficients &b, std::size_t n_max)
{
    same_context(a, b);
    a.require_depth(n_max);
    b.require_depth(n_max);
    const ContextPtr &ctx = a.context_ptr();
    std::vector<Column> cols;
    for (std::size_t i = 0; i < ctx->size(); ++i) {
        cols.push_back(compose_column(column(a, n_max, i), column(b, n_max, i), n_max));
    }
    HpsCoefficients out = from_columns(ctx, cols, n_max, "(" + a.describe() + ")o(" + b.describe() + ")");
    attach_witness(out);
    return out;
}

HpsCoefficients derive(const HpsCoefficients &a)
{
    HpsCoefficients out = derived_family(a, 1);
    attach_witness(out);
    return out;
}

HpsCoefficients integrate(const HpsCoefficients &a)
{
    std::optional<std::size_t> depth;
    if (auto d = a.depth()) {
        depth = *d + 1;
    }
    HpsCoefficients out = HpsCoefficients::from_function(
        a.context_ptr(),
        [a](std::size_t n, std::size_t i) {
            if (n == 0) {
                return Real(0);
            }
            return a(n - 1, i) / Real(static_cast<unsigned long>(n));
        },
        "I(" + a.describe() + ")", depth, [a](std::size_t n) { return n == 0 || a.structurally_zero(n - 1); });
    attach_witness(out);
    return out;
}

HpsCoefficients recenter(const HpsCoefficients &a, const GenNum &c, const GenNum &c_bar, std::size_t n_max,
                         const RecenterOptions &opt)
{
    const ContextPtr &ctx = a.context_ptr();
    if (c.size() != ctx->size() || c_bar.size() != ctx->size()) {
        throw ConfigError("recenter: centers do not match the grid");
    }
    if (opt.check_convergence) {
        HpsSeries s(a, c);
        ConvergenceReport rep = converges_at(s, c_bar);
        if (!rep.overall.passed()) {
            throw PreconditionError(Precondition::ConvergenceAtBound,
                                    "the series does not converge at the new center ("
                                        + to_string(rep.overall.status) + ")");
        }
    }
    std::size_t m_max = opt.m_max;
    if (auto d = a.depth()) {
        m_max = std::min(m_max, *d);
    }
    if (m_max < n_max) {
        throw InsufficientTruncation("m_max = " + std::to_string(m_max) + " is below n_max = "
                                     + std::to_string(n_max));
    }
    std::vector<Column> cols(ctx->size(), Column(n_max + 1));
    for (std::size_t i = 0; i < ctx->size(); ++i) {
        const Real d = c_bar[i] - c[i];
        const Real tol_scale = exp(Real(opt.q_tol) * ctx->rho.log_values()[i]);
        for (std::size_t n = 0; n <= n_max; ++n) {
            if (d.is_zero()) {
                cols[i][n] = a.structurally_zero(n) ? Real(0) : a(n, i);
                continue;
            }
            Real sum(0), binom(1), pw(1);
            std::vector<Real> recent;
            bool done = false;
            for (std::size_t m = n; m <= m_max; ++m) {
                if (m > n) {
                    binom = binom * Real(static_cast<unsigned long>(m)) / Real(static_cast<unsigned long>(m - n));
                    pw *= d;
                }
                if (a.structurally_zero(m)) {
                    continue;
                }
                Real t = a(m, i) * binom * pw;
                sum += t;
                if (t.is_zero()) {
                    continue;
                }
                recent.push_back(abs(t));
                if (recent.size() > 8) {
                    recent.erase(recent.begin());
                }
                if (recent.size() == 8) {
                    Real r(0);
                    for (std::size_t k = 1; k < recent.size(); ++k) {
                        r = max(r, recent[k] / recent[k - 1]);
                    }
                    if (r < Real(1)) {
                        Real bound = recent.back() * r / (Real(1) - r);
                        if (bound <= ldexp(abs(sum), -static_cast<long>(working_precision()) - 2)) {
                            done = true;
                            break;
                        }
                        if (m == m_max && bound <= tol_scale * (Real(1) + abs(sum))) {
                            done = true;
                        }
                    }
                }
            }
            if (!done && !recent.empty()) {
                throw InsufficientTruncation("recentered coefficient n=" + std::to_string(n) + " at eps#"
                                             + std::to_string(i) + " not converged within m_max = "
                                             + std::to_string(m_max));
            }
            cols[i][n] = sum;
        }
    }
    HpsCoefficients out = from_columns(ctx, cols, n_max, "recenter(" + a.describe() + ")");
    attach_witness(out);
    return out;
}

HpsCoefficients reverse(const HpsCoefficients &a, std::size_t n_max, long m_max)
{
    a.require_depth(n_max);
    const ContextPtr &ctx = a.context_ptr();
    if (n_max < 1) {
        throw ConfigError("reverse needs n_max >= 1");
    }
    if (!invertibility_margin(a.row(1), *ctx, m_max)) {
        throw NotInvertible("a_1 is not invertible: |a_1| < rho^" + std::to_string(m_max) + " on the tail");
    }
    std::vector<Column> cols;
    for (std::size_t i = 0; i < ctx->size(); ++i) {
        Column ac = column(a, n_max, i);
        // P[k][n] = [g^k]_n, filled order by order.
        std::vector<Column> P(n_max + 1, Column(n_max + 1, Real(0)));
        Column g(n_max + 1, Real(0));
        g[1] = Real(1) / ac[1];
        P[1][1] = g[1];
        for (std::size_t n = 2; n <= n_max; ++n) {
            Real s(0);
            for (std::size_t k = 2; k <= n; ++k) {
                Real p(0);
                for (std::size_t j = 1; j + k - 1 <= n; ++j) {
                    if (!g[j].is_zero() && !P[k - 1][n - j].is_zero()) {
                        p += g[j] * P[k - 1][n - j];
                    }
                }
                P[k][n] = p;
                if (!ac[k].is_zero()) {
                    s += ac[k] * p;
                }
            }
            g[n] = -s / ac[1];
            P[1][n] = g[n];
        }
        // Verify compose(a - a_0, g) = x up to convolution rounding.
        Column shifted = ac;
        shifted[0] = Real(0);
        Column id = compose_column(shifted, g, n_max);
        Column scale = compose_column(abs_column(shifted), abs_column(g), n_max);
        for (std::size_t n = 0; n <= n_max; ++n) {
            Real want = n == 1 ? Real(1) : Real(0);
            if (abs(id[n] - want) > noise_floor(scale[n] + Real(1))) {
                throw PrecisionError("reversion round trip failed", n, i);
            }
        }
        cols.push_back(std::move(g));
    }
    HpsCoefficients out = from_columns(ctx, cols, n_max, "reverse(" + a.describe() + ")");
    attach_witness(out);
    return out;
}

RingOps coeff_ring_ops(const HpsCoefficients &a, const HpsCoefficients &b, const WitnessOptions &opt)
{
    same_context(a, b);
    HpsCoefficients sum = add(a, b, opt);
    HpsCoefficients product = HpsCoefficients::from_function(
        a.context_ptr(), [a, b](std::size_t n, std::size_t i) { return a(n, i) * b(n, i); },
        "(" + a.describe() + ").(" + b.describe() + ")", min_depth(a, b),
        [a, b](std::size_t n) { return a.structurally_zero(n) || b.structurally_zero(n); });
    attach_witness(product, opt);
    return {sum, product};
}

} // namespace hps
