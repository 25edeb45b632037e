#include <hps/graf.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace hps
{

GsfNet::GsfNet(ContextPtr ctx, DerivFn deriv, std::string name, int k_max)
    : ctx_(std::move(ctx)), deriv_(std::move(deriv)), name_(std::move(name)), k_max_(k_max)
{
}

GsfNet GsfNet::from_expr(ContextPtr ctx, const std::string &text)
{
    NetExpr e = NetExpr::parse(text, ExprContext::Function);
    const NetContext *raw = ctx.get();
    return GsfNet(
        ctx,
        [e, raw](int k, const Real &x, std::size_t i) {
            Env env = raw->env(i);
            env.n = Real(k);
            env.x = x;
            return eval(e, env);
        },
        e.str());
}

GsfNet GsfNet::from_series(const HpsSeries &s, long q_target)
{
    HpsSeries series = s;
    return GsfNet(
        s.coeffs.context_ptr(),
        [series, q_target](int k, const Real &x, std::size_t i) {
            // Other grid points sit at the center, where the sum is one term.
            GenNum at = series.center;
            at.values[i] = x;
            HpsSeries dk(derived_family(series.coeffs, k), series.center, series.name);
            return series_limit(dk, at, q_target)[i];
        },
        "series(" + s.coeffs.describe() + ")");
}

Real GsfNet::derivative(int k, const Real &x, std::size_t i) const
{
    if (k < 0 || k > k_max_) {
        throw ConfigError("derivative order " + std::to_string(k) + " outside 0.." + std::to_string(k_max_));
    }
    return deriv_(k, x, i);
}

GenNum GsfNet::derivative(int k, const GenNum &x) const
{
    GenNum out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.values.push_back(derivative(k, x[i], i));
    }
    return out;
}

HpsCoefficients taylor_coeffs(const GsfNet &f, const GenNum &c, std::size_t n_max, Verdict *weak)
{
    const NetContext &ctx = f.context();
    if (c.size() != ctx.size()) {
        throw ConfigError("taylor_coeffs: center does not match the grid");
    }
    HpsCoefficients::Table rows(n_max + 1, std::vector<Real>(ctx.size()));
    for (std::size_t n = 0; n <= n_max; ++n) {
        const Real fact = Real::factorial(n);
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            rows[n][i] = f.derivative(static_cast<int>(n), c[i], i) / fact;
        }
    }
    HpsCoefficients a = HpsCoefficients::from_table(f.context_ptr(), std::move(rows), "taylor(" + f.name() + ")");
    Verdict v = attach_witness(a);
    if (weak) {
        *weak = v;
    }
    return a;
}

json GrowthWitness::to_json() const
{
    json j;
    j["verdict"] = verdict.to_json();
    if (p) {
        j["witness"] = {{"p", *p}, {"q", *q}, {"kappa", *kappa}, {"lambda", *lambda}};
        j["C"] = reals_json(C.values);
        j["R"] = reals_json(R.values);
    }
    j["s"] = reals_json(s.values);
    j["inv_R_exponent"] = inv_R_exponent ? json(*inv_R_exponent) : json(nullptr);
    return j;
}

GrowthWitness graf_check(const GsfNet &f, const GenNum &c, const GenNum &s, std::size_t n_max,
                         const std::vector<GenNum> &sample_x)
{
    const NetContext &ctx = f.context();
    const auto tail = ctx.grid.tail();
    if (tail.empty()) {
        throw ConfigError("empty grid tail");
    }
    if (sample_x.empty()) {
        throw ConfigError("graf_check needs at least one sample point");
    }
    if (n_max < 8) {
        throw ConfigError("graf_check needs n_max >= 8");
    }
    for (const auto &x : sample_x) {
        for (std::size_t i : tail) {
            if (abs(x[i] - c[i]) > s[i]) {
                throw ConfigError("sample point outside the ball B_s(c)");
            }
        }
    }
    GrowthWitness out;
    out.s = s;
    // w[k][n][i] = log|f^(n)(x_k)| - log n!
    std::vector<std::vector<std::vector<Real>>> w(
        sample_x.size(), std::vector<std::vector<Real>>(n_max + 1, std::vector<Real>(ctx.size(), Real::infinity(-1))));
    for (std::size_t k = 0; k < sample_x.size(); ++k) {
        for (std::size_t n = 0; n <= n_max; ++n) {
            const Real lf = lgamma(Real(static_cast<unsigned long>(n + 1)));
            for (std::size_t i : tail) {
                Real d = f.derivative(static_cast<int>(n), sample_x[k][i], i);
                if (!d.is_zero()) {
                    w[k][n][i] = log(abs(d)) - lf;
                }
            }
        }
    }
    // Super-factorial growth: log(|f^(n)|/n!) ~ E n log n with E > 0 is beyond
    // every C/R^n.
    for (std::size_t k = 0; k < sample_x.size(); ++k) {
        bool growing = true;
        Real E_last;
        for (std::size_t i : tail) {
            std::vector<std::pair<Real, Real>> pts;
            for (std::size_t n = 1; n <= n_max; ++n) {
                if (!w[k][n][i].is_inf()) {
                    pts.emplace_back(Real(static_cast<unsigned long>(n)), w[k][n][i]);
                }
            }
            GrowthFit g = fit_log_growth(pts);
            E_last = g.E;
            if (!(g.E > Real(growth_tolerance))) {
                growing = false;
                break;
            }
        }
        if (growing) {
            Counterexample cx;
            cx.grid_index = tail.back();
            cx.eps = ctx.grid.points[cx.grid_index];
            cx.detail = "|f^(n)(x)|/n! grows super-geometrically; no (C, R) bounds it";
            cx.values = {{"sample", k}, {"E", real_json(E_last)}, {"x", real_json(sample_x[k][cx.grid_index])}};
            out.verdict = Verdict::fail(cx);
            return out;
        }
    }

    static const double exps[] = {0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
    std::size_t worst_n = 0, worst_k = 0, worst_i = tail.front();
    Real worst_excess = Real::infinity(-1);
    // Order: smallest q, then smallest p, then largest lambda, then smallest kappa.
    for (double q : exps) {
        for (double p : exps) {
            for (int lam = 4; lam >= -4; --lam) {
                // Needed log kappa: max of w + n log R + p log rho.
                Real need = Real::infinity(-1);
                std::size_t bn = 0, bk = 0, bi = tail.front();
                for (std::size_t k = 0; k < sample_x.size(); ++k) {
                    for (std::size_t n = 0; n <= n_max; ++n) {
                        for (std::size_t i : tail) {
                            if (w[k][n][i].is_inf()) {
                                continue;
                            }
                            const Real &lr = ctx.rho.log_values()[i];
                            Real logR = Real(lam) * log(Real(2)) + Real(q) * lr;
                            Real v = w[k][n][i] + Real(static_cast<unsigned long>(n)) * logR + Real(p) * lr;
                            if (v > need) {
                                need = v;
                                bn = n;
                                bk = k;
                                bi = i;
                            }
                        }
                    }
                }
                const Real limit = Real(4) * log(Real(2));
                if (need <= limit) {
                    int kap = -4;
                    while (Real(kap) * log(Real(2)) < need) {
                        ++kap;
                    }
                    out.p = p;
                    out.q = q;
                    out.kappa = std::ldexp(1.0, kap);
                    out.lambda = std::ldexp(1.0, lam);
                    out.inv_R_exponent = q;
                    for (std::size_t i = 0; i < ctx.size(); ++i) {
                        const Real &lr = ctx.rho.log_values()[i];
                        out.C.values.push_back(ldexp(exp(-Real(p) * lr), kap));
                        out.R.values.push_back(ldexp(exp(Real(q) * lr), lam));
                    }
                    out.verdict = Verdict::pass({{"p", p}, {"q", q}, {"kappa", *out.kappa}, {"lambda", *out.lambda},
                                                 {"n_max", n_max}, {"samples", sample_x.size()}});
                    return out;
                }
                Real excess = need - limit;
                if (worst_excess.is_inf() || excess < worst_excess) {
                    worst_excess = excess;
                    worst_n = bn;
                    worst_k = bk;
                    worst_i = bi;
                }
            }
        }
    }
    Counterexample cx;
    cx.grid_index = worst_i;
    cx.eps = ctx.grid.points[worst_i];
    cx.detail = "witness lattice exhausted";
    cx.values = {{"n", worst_n}, {"sample", worst_k}, {"log_excess", real_json(worst_excess)}};
    out.verdict = Verdict::fail(cx);
    return out;
}

namespace
{

// psi(s) = f(s)/(f(s) + f(1-s)), f(t) = exp(-1/t), given s and 1 - s separately.
Real psi(const Real &s, const Real &one_minus_s)
{
    if (s.sign() <= 0) {
        return Real(0);
    }
    if (one_minus_s.sign() <= 0) {
        return Real(1);
    }
    // f(s)/(f(s)+f(1-s)) = 1/(1 + exp(1/s - 1/(1-s)))
    return Real(1) / (Real(1) + exp(Real(1) / s - Real(1) / one_minus_s));
}

// Moments of the bump: m_n = 2 [ (1/2)^(n+1)/(n+1) + (1/2) int_0^1 psi(s) (1 - s/2)^n ds ],
// odd n zero. Tanh-sinh on [0, 1] with both endpoint distances computed
// without cancellation.
std::vector<Real> bump_moments(std::size_t count)
{
    const Real pi = Real::pi();
    const Real half_pi = pi / Real(2);
    const long prec = static_cast<long>(working_precision());
    std::vector<Real> prev;
    for (int level = 4; level <= 12; ++level) {
        const Real h = ldexp(Real(1), -level);
        std::vector<Real> acc(count, Real(0));
        for (long j = 0;; ++j) {
            bool any = false;
            for (int side : {1, -1}) {
                if (j == 0 && side == -1) {
                    continue;
                }
                Real tau = Real(side) * Real(j) * h;
                Real u = half_pi * (exp(tau) - exp(-tau)) / Real(2);
                Real cosh_tau = (exp(tau) + exp(-tau)) / Real(2);
                Real s = Real(1) / (Real(1) + exp(Real(-2) * u));
                Real one_minus_s = Real(1) / (Real(1) + exp(Real(2) * u));
                Real wgt = h * pi * cosh_tau * s * one_minus_s;
                if (wgt.is_zero() || log(wgt) < Real(-prec - 40) * log(Real(2))) {
                    continue;
                }
                any = true;
                Real g = psi(s, one_minus_s) * wgt;
                Real base = Real(1) - s / Real(2);
                Real pw(1);
                for (std::size_t n = 0; n < count; ++n) {
                    if (n % 2 == 0) {
                        acc[n] += g * pw;
                    }
                    pw *= base;
                }
            }
            if (!any && j > 0) {
                break;
            }
        }
        std::vector<Real> m(count, Real(0));
        for (std::size_t n = 0; n < count; n += 2) {
            Real head = ldexp(Real(1), -static_cast<long>(n + 1)) / Real(static_cast<unsigned long>(n + 1));
            m[n] = Real(2) * (head + acc[n] / Real(2));
        }
        if (!prev.empty()) {
            bool stable = true;
            for (std::size_t n = 0; n < count && stable; n += 2) {
                if (abs(m[n] - prev[n]) > ldexp(abs(m[n]), -(prec - 24))) {
                    stable = false;
                }
            }
            if (stable) {
                return m;
            }
        }
        prev = std::move(m);
    }
    throw PrecisionError("bump moment quadrature did not converge", 0, 0);
}

} // namespace

Real standard_bump(const Real &x)
{
    Real ax = abs(x);
    if (ax >= Real(1)) {
        return Real(0);
    }
    if (ax <= Real(0.5)) {
        return Real(1);
    }
    Real s = Real(2) * (Real(1) - ax);
    return psi(s, Real(1) - s);
}

MollifierSpec MollifierSpec::standard(const GenNum &b, std::size_t n_moments)
{
    return from_moments(bump_moments(n_moments), b,
                        "beta(x) = 1 on |x| <= 1/2, psi(2(1-|x|)) on 1/2 < |x| < 1, 0 outside; "
                        "psi(t) = f(t)/(f(t)+f(1-t)), f(t) = exp(-1/t)");
}

MollifierSpec MollifierSpec::from_moments(std::vector<Real> moments, const GenNum &b, std::string profile)
{
    MollifierSpec m;
    m.moments = std::move(moments);
    m.b = b;
    m.profile = std::move(profile);
    m.validate();
    return m;
}

void MollifierSpec::validate() const
{
    if (moments.empty()) {
        throw InvalidMollifier("no moments");
    }
    if (!(moments[0].sign() > 0 && moments[0] <= Real(2))) {
        throw InvalidMollifier("m_0 must lie in (0, 2]");
    }
    const Real tol = ldexp(Real(1), -static_cast<long>(working_precision()) / 2);
    for (std::size_t n = 0; n < moments.size(); ++n) {
        if (abs(moments[n]) > Real(2)) {
            throw InvalidMollifier("|m_" + std::to_string(n) + "| > 2");
        }
        if (n % 2 == 1 && abs(moments[n]) > tol) {
            throw InvalidMollifier("odd moment m_" + std::to_string(n) + " is nonzero");
        }
    }
}

Real MollifierSpec::mu_derivative_at_zero(std::size_t n) const
{
    if (n % 2 == 1) {
        return Real(0);
    }
    if (n >= moments.size()) {
        throw CoefficientRange(n, moments.size() - 1);
    }
    Real v = moments[n] / (Real(2) * Real::pi());
    return (n / 2) % 2 == 0 ? v : -v;
}

void write_moments_csv(const MollifierSpec &m, std::ostream &os)
{
    os << "n,moment\n";
    for (std::size_t n = 0; n < m.moments.size(); ++n) {
        os << n << ',' << m.moments[n].str() << '\n';
    }
}

std::vector<Real> read_moments_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("n,moment", 0) != 0) {
        throw ConfigError("moment CSV: missing header 'n,moment'");
    }
    std::vector<Real> out;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos || std::stoul(line.substr(0, comma)) != out.size()) {
            throw ConfigError("moment CSV: rows must be consecutive from n = 0");
        }
        out.push_back(Real::parse(line.substr(comma + 1)));
    }
    return out;
}

HpsCoefficients delta_coeffs(const MollifierSpec &m, ContextPtr ctx)
{
    if (m.b.size() != ctx->size()) {
        throw ConfigError("mollifier scale b does not match the grid");
    }
    // mu^(n)(0)/n! shared by every eps.
    std::vector<Real> base;
    for (std::size_t n = 0; n < m.moments.size(); ++n) {
        base.push_back(m.mu_derivative_at_zero(n) / Real::factorial(n));
    }
    GenNum b = m.b;
    HpsCoefficients a = HpsCoefficients::from_function(
        ctx,
        [base, b](std::size_t n, std::size_t i) {
            if (n % 2 == 1) {
                return Real(0);
            }
            return base[n] * pow(b[i], static_cast<long>(n + 1));
        },
        "delta", m.moments.size() - 1, [](std::size_t n) { return n % 2 == 1; });
    attach_witness(a);
    return a;
}

GenNum delta_eval(const MollifierSpec &m, const GenNum &x, const NetContext &ctx, const DeltaOptions &opt)
{
    GenNum out;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        const Real y = m.b[i] * x[i];
        if (abs(y) > Real(opt.y_max)) {
            if (i >= ctx.grid.tail_start) {
                throw OutOfCheckableRange("|b x| = " + abs(y).str(8) + " exceeds " + std::to_string(opt.y_max)
                                          + " at eps#" + std::to_string(i));
            }
            out.values.push_back(Real::nan());
            continue;
        }
        // mu(y) = sum_n mu^(n)(0) y^n / n!; |mu^(n)(0)| <= 1/pi bounds the tail.
        Real sum(0), term(1); // term = y^n / n!
        bool done = false;
        for (std::size_t n = 0; n < m.moments.size(); ++n) {
            if (n > 0) {
                term = term * y / Real(static_cast<unsigned long>(n));
            }
            if (n % 2 == 0) {
                sum += m.mu_derivative_at_zero(n) * term;
            }
            // Remaining terms are below |term| (|y|/(n+1))^k / pi, geometric once n+1 > |y|.
            Real ratio = abs(y) / Real(static_cast<unsigned long>(n + 1));
            if (ratio < Real(0.5)) {
                Real bound = abs(term) * ratio / (Real(1) - ratio);
                if (bound <= ldexp(max(abs(sum), Real(1)), -static_cast<long>(working_precision()) - 2)) {
                    done = true;
                    break;
                }
            }
        }
        if (!done) {
            if (i >= ctx.grid.tail_start) {
                throw OutOfCheckableRange("moment series at |b x| = " + abs(y).str(8) + " needs more than "
                                          + std::to_string(m.moments.size()) + " moments");
            }
            out.values.push_back(Real::nan());
            continue;
        }
        out.values.push_back(m.b[i] * sum);
    }
    return out;
}

Verdict delta_crosscheck(const MollifierSpec &m, ContextPtr ctx, const GenNum &x, const HyperNat &N, long q)
{
    HpsCoefficients a = delta_coeffs(m, ctx);
    HpsSeries s(a, GenNum::constant(Real(0), ctx->size()), "delta");
    GenNum sums = hyperfinite_sum(s, x, N);
    GenNum ref = delta_eval(m, x, *ctx);
    json rows = json::array();
    for (std::size_t i : ctx->grid.tail()) {
        Real diff = abs(sums[i] - ref[i]);
        Real tol = exp(Real(q) * ctx->rho.log_values()[i]);
        rows.push_back({{"eps", real_json(ctx->grid.points[i])},
                        {"N", real_json(N.values[i])},
                        {"diff", real_json(diff)}});
        if (N.values[i] < Real(8)) {
            return Verdict::inconclusive("N_eps < 8 at eps#" + std::to_string(i), {{"cells", rows}});
        }
        if (diff > tol) {
            Counterexample cx;
            cx.grid_index = i;
            cx.eps = ctx->grid.points[i];
            cx.detail = "partial sum differs from b mu(b x) by more than rho^" + std::to_string(q);
            cx.values = {{"diff", real_json(diff)}};
            return Verdict::fail(cx, "", {{"cells", rows}});
        }
    }
    return Verdict::pass({{"q", q}, {"cells", rows}});
}

Real flat_function(const Real &x)
{
    if (x.sign() <= 0) {
        return Real(0);
    }
    return exp(Real(-1) / x);
}

Verdict flat_point_check(ContextPtr ctx, long q_max)
{
    json w;
    Status st = Status::Pass;
    std::optional<Counterexample> cx;
    std::string notes;

    json neg = json::array();
    for (double r : {0.5, 1.0, 2.0}) {
        GenNum x = GenNum::gauge_power(*ctx, Real(r));
        GenNum fx;
        for (const auto &v : x.values) {
            fx.values.push_back(flat_function(v));
        }
        Verdict v = is_negligible(fx, ctx->rho, ctx->grid, q_max);
        neg.push_back({{"r", r}, {"status", to_string(v.status)}, {"negligible", v.witness}});
        st = combine(st, v.status);
        if (v.failed() && !cx) {
            cx = v.counterexample;
        }
    }
    w["negligible_at_rho_powers"] = neg;

    const Real f1 = flat_function(Real(1));
    w["f(1)"] = real_json(f1);

    // Taylor series at c = 1: exp(-1/x) = exp(y) o (-1/(1+t)) with the outer
    // series centered at y = -1.
    const std::size_t depth = 120;
    const Real inv_e = exp(Real(-1));
    HpsCoefficients outer = HpsCoefficients::from_sequence(
        ctx, [inv_e](std::size_t k) { return inv_e / Real::factorial(k); }, "exp(-1)/k!");
    HpsCoefficients inner = HpsCoefficients::from_sequence(
        ctx, [](std::size_t n) { return Real(n % 2 == 0 ? -1 : 1); }, "-1/(1+t)");
    HpsCoefficients taylor = compose(outer, inner, depth);

    const Real x = Real(11) / Real(10);
    const Real want = flat_function(x);
    auto eval_at = [&](const HpsCoefficients &a, const Real &center, std::size_t n_max) {
        Real sum(0), pw(1);
        for (std::size_t n = 0; n <= n_max; ++n) {
            sum += a(n, 0) * pw;
            pw *= x - center;
        }
        return sum;
    };
    const Real tol(1e-10);
    Real direct = eval_at(taylor, Real(1), 40);
    w["taylor_at_1.1"] = {{"value", real_json(direct)}, {"expected", real_json(want)},
                          {"error", real_json(abs(direct - want))}};
    RecenterOptions ropt;
    ropt.check_convergence = false;
    ropt.m_max = depth;
    ropt.q_tol = 4;
    HpsCoefficients moved = recenter(taylor, GenNum::constant(Real(1), ctx->size()),
                                     GenNum::constant(Real(21) / Real(20), ctx->size()), 30, ropt);
    Real recentered = eval_at(moved, Real(21) / Real(20), 30);
    w["recentered_at_1.1"] = {{"center", "1.05"}, {"value", real_json(recentered)},
                              {"error", real_json(abs(recentered - want))}};
    if (abs(direct - want) > tol || abs(recentered - want) > tol) {
        Counterexample c;
        c.grid_index = 0;
        c.eps = ctx->grid.points[0];
        c.detail = "Taylor series at c = 1 does not reproduce exp(-1/x) at x = 1.1";
        c.values = w["taylor_at_1.1"];
        return Verdict::fail(c, "", w);
    }
    if (st == Status::Pass) {
        return Verdict::pass(w);
    }
    if (st == Status::Fail) {
        return Verdict::fail(*cx, "f(rho^r) is not negligible", w);
    }
    return Verdict::inconclusive("negligibility undecided at some rho^r", w);
}

Verdict nowhere_analytic_reject(ContextPtr ctx, std::size_t n_max)
{
    HpsCoefficients lower = HpsCoefficients::from_expr(ctx, "exp(-2*n)*(4*n^2)^n/factorial(n)");
    HpsCoefficients fact = HpsCoefficients::from_expr(ctx, "factorial(n)");
    HpsCoefficients control = HpsCoefficients::from_expr(ctx, "1/factorial(n)");
    Verdict vl = check_weak_moderate(lower, n_max, 16, 64);
    Verdict vf = check_weak_moderate(fact, n_max, 16, 64);
    Verdict vc = check_weak_moderate(control, n_max, 16, 64);
    json w = {{"lower_bound_family", vl.to_json()}, {"factorial", vf.to_json()}, {"control", vc.to_json()}};
    if (vl.failed() && vf.failed() && vc.passed()) {
        return Verdict::pass(w);
    }
    if (vl.passed() || vf.passed() || vc.failed()) {
        Counterexample cx;
        cx.grid_index = ctx->grid.tail_start;
        cx.eps = ctx->grid.points[cx.grid_index];
        cx.detail = "weak-moderateness check did not separate the families";
        return Verdict::fail(cx, "", w);
    }
    return Verdict::inconclusive("rejection undecided on the grid", w);
}

} // namespace hps
