#include <hps/suite.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace hps
{

namespace
{

GenNum zero_net(const NetContext &ctx)
{
    return GenNum::constant(Real(0), ctx.size());
}

json net_json(const GenNum &x)
{
    return reals_json(x.values);
}

// |x - y| <= rho^q at every tail point (differences within rounding noise
// count as zero).
Verdict within_power(const GenNum &x, const GenNum &y, const NetContext &ctx, long q)
{
    json errs = json::array();
    std::optional<std::size_t> bad;
    for (std::size_t i : ctx.grid.tail()) {
        Real d = clean_difference(x[i], y[i]);
        errs.push_back(real_json(d));
        if (!d.is_zero() && log(d) > Real(q) * ctx.rho.log_values()[i] && !bad) {
            bad = i;
        }
    }
    json w = {{"q", q}, {"abs_errors", errs}};
    if (bad) {
        Counterexample cx{*bad, ctx.grid.points[*bad], "|x - y| > rho^" + std::to_string(q),
                          {{"x", real_json(x[*bad])}, {"y", real_json(y[*bad])}}};
        return Verdict::fail(cx, {}, w);
    }
    return Verdict::pass(w);
}

// |x - y| <= tol |y| at every tail point.
Verdict within_relative(const GenNum &x, const GenNum &y, const NetContext &ctx, const Real &tol)
{
    json errs = json::array();
    std::optional<std::size_t> bad;
    for (std::size_t i : ctx.grid.tail()) {
        Real rel = clean_difference(x[i], y[i]);
        if (!y[i].is_zero()) {
            rel /= abs(y[i]);
        }
        errs.push_back(real_json(rel));
        if (!(rel <= tol) && !bad) {
            bad = i;
        }
    }
    json w = {{"tolerance", tol.to_double()}, {"rel_errors", errs}};
    if (bad) {
        Counterexample cx{*bad, ctx.grid.points[*bad], "relative error above tolerance",
                          {{"x", real_json(x[*bad])}, {"y", real_json(y[*bad])}}};
        return Verdict::fail(cx, {}, w);
    }
    return Verdict::pass(w);
}

Status all_of(std::initializer_list<Status> parts)
{
    Status s = Status::Pass;
    for (Status p : parts) {
        s = combine(s, p);
    }
    return s;
}

Status status_of(bool ok)
{
    return ok ? Status::Pass : Status::Fail;
}

HpsCoefficients coeffs(const ContextPtr &ctx, const std::string &text)
{
    return HpsCoefficients::from_expr(ctx, text);
}

// ---------------------------------------------------------------------------

CheckResult geometric_identity(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    HpsSeries s(coeffs(ctx, "1"), zero_net(*ctx), "geometric");
    GenNum x = GenNum::gauge_power(*ctx, Real(1));
    HyperNat N = sigma_power(*ctx, 1);
    GenNum S = hyperfinite_sum(s, x, N);
    GenNum expected = GenNum::from_expr("1/(1-rho)", *ctx);
    Verdict eq = ext_eq(S, expected, ctx->rho, ctx->grid, 6);
    bool q_ok = eq.passed() && eq.witness.value("q", 0L) >= 6;
    GenNum L = series_limit(s, GenNum::from_expr("1/2", *ctx), cfg.checks.q_target);
    Verdict lim = within_power(L, GenNum::constant(Real(2), ctx->size()), *ctx, 4);
    return {"geometric_identity", "sum",
            all_of({status_of(q_ok), lim.status}),
            {{"sum_at_drho_vs_1/(1-drho)", eq.to_json()}, {"limit_at_1/2_vs_2", lim.to_json()}}};
}

CheckResult exponential_membership(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    HpsSeries s(coeffs(ctx, "1/factorial(n)"), zero_net(*ctx), "exp");
    ConvergeOptions opt;
    opt.n_lo = static_cast<std::size_t>(cfg.checks.n_lo);
    opt.n_hi = static_cast<std::size_t>(cfg.checks.n_hi);
    opt.margin_m = cfg.checks.margin_m;
    opt.k_max = static_cast<int>(cfg.checks.k_max);
    ConvergenceReport in = converges_at(s, GenNum::from_expr("-log(rho)", *ctx), opt);
    Verdict rel = Verdict::inconclusive("no limit");
    if (in.limit) {
        rel = within_relative(*in.limit, GenNum::from_expr("rho^(-1)", *ctx), *ctx, Real(1e-20));
    }
    ConvergenceReport out = converges_at(s, GenNum::from_expr("rho^(-1)", *ctx), opt);
    bool split = out.overall.failed() && out.cond_limit.failed();
    return {"exponential_membership", "converge",
            all_of({in.overall.status, rel.status, status_of(split)}),
            {{"at_-log_rho", in.to_json()}, {"limit_vs_rho^-1", rel.to_json()}, {"at_rho^-1", out.to_json()}}};
}

CheckResult radius_values(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    const auto n_lo = static_cast<std::size_t>(cfg.checks.n_lo);
    const auto n_hi = static_cast<std::size_t>(cfg.checks.n_hi);
    auto exact = [&](const std::string &text, const Real &want) {
        RadiusEstimate r = radius(coeffs(ctx, text), n_lo, n_hi);
        bool ok = true;
        for (const auto &v : r.r.values) {
            ok = ok && v == want;
        }
        return std::pair{ok, json{{"coeffs", text}, {"expected", real_json(want)}, {"radius", r.to_json()}}};
    };
    auto [ones_ok, ones] = exact("1", Real(1));
    auto [two_ok, two] = exact("2^n", Real(1) / Real(2));

    RadiusClassification cls = classify_radius(radius(coeffs(ctx, "1/factorial(n)"), n_lo, n_hi), *ctx,
                                               cfg.checks.P_max);
    bool beyond = true;
    for (std::size_t i : ctx->grid.tail()) {
        beyond = beyond && cls.classes[i] != RadiusClass::Moderate;
    }

    RadiusEstimate fast = radius(coeffs(ctx, "rho^((n+1)/eps)"), n_lo, 256);
    GenNum inv_r{fast.inv_r.values, std::nullopt};
    Verdict rel = within_relative(inv_r, GenNum::from_expr("rho^(1/eps)", *ctx), *ctx, Real(1e-30));
    return {"radius_values", "radius",
            all_of({status_of(ones_ok), status_of(two_ok), status_of(beyond), rel.status}),
            {{"ones", ones},
             {"powers_of_two", two},
             {"inverse_factorial", cls.to_json()},
             {"rho^((n+1)/eps)", {{"inv_r_vs_rho^(1/eps)", rel.to_json()}, {"radius", fast.to_json()}}}}};
}

CheckResult radius_well_defined(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    const auto n_lo = static_cast<std::size_t>(cfg.checks.n_lo);
    const auto n_hi = static_cast<std::size_t>(cfg.checks.n_hi);
    HpsCoefficients pert = coeffs(ctx, "rho^((n+1)/eps)");
    Status st = Status::Pass;
    json cases = json::array();
    for (const auto &f : corpus()) {
        HpsSeries s = corpus_series(f, ctx);
        HpsCoefficients a = s.coeffs;
        HpsCoefficients b = HpsCoefficients::from_function(
            ctx, [a, pert](std::size_t n, std::size_t i) { return a(n, i) + pert(n, i); }, f.name + " + perturbation");
        RadiusEstimate ra = radius(a, n_lo, n_hi);
        RadiusEstimate rb = radius(b, n_lo, n_hi);
        json per_q = json::array();
        for (long q = 1; q <= 4; ++q) {
            bool ok = true;
            for (std::size_t i : ctx->grid.tail()) {
                const Real &x = ra.inv_r.values[i];
                const Real &y = rb.inv_r.values[i];
                if (x.is_inf() || y.is_inf()) {
                    ok = ok && x == y;
                    continue;
                }
                Real d = clean_difference(x, y);
                ok = ok && (d.is_zero() || log(d) <= Real(q) * ctx->rho.log_values()[i]);
            }
            per_q.push_back({{"q", q}, {"status", ok ? "pass" : "fail"}});
            st = combine(st, status_of(ok));
        }
        cases.push_back({{"family", f.name},
                         {"inv_r", reals_json(ra.inv_r.values)},
                         {"inv_r_perturbed", reals_json(rb.inv_r.values)},
                         {"checks", per_q}});
    }
    return {"radius_well_defined", "radius", st, {{"perturbation", "rho^((n+1)/eps)"}, {"cases", cases}}};
}

// Coefficients of c (a computed convolution) replaced by those of a wherever
// the two agree to within the rounding noise of the convolution, whose scale
// is sum_k |d_k| |b_{n-k}|.
HpsCoefficients clamp_convolution_noise(const HpsCoefficients &c, const HpsCoefficients &a,
                                        const HpsCoefficients &d, const HpsCoefficients &b, std::size_t n_max)
{
    const NetContext &ctx = c.context();
    HpsCoefficients::Table rows(n_max + 1, std::vector<Real>(ctx.size()));
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            Real scale = abs(a(n, i));
            for (std::size_t k = 0; k <= n; ++k) {
                scale += abs(d(k, i)) * abs(b(n - k, i));
            }
            Real cv = c(n, i);
            rows[n][i] = abs(cv - a(n, i)) <= noise_floor(scale) ? a(n, i) : cv;
        }
    }
    return HpsCoefficients::from_table(c.context_ptr(), std::move(rows), "noise-clamped product");
}

CheckResult division(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    const auto n_max = static_cast<std::size_t>(cfg.checks.n_max);
    HpsCoefficients one = coeffs(ctx, "max(1-n,0)");
    HpsCoefficients b0 = coeffs(ctx, "max(1-n,0)-max(1-abs(n-1),0)");
    HpsCoefficients ones = reciprocal_div(one, b0, n_max);
    bool all_ones = true;
    for (std::size_t n = 0; n <= 64; ++n) {
        for (std::size_t i = 0; i < ctx->size(); ++i) {
            all_ones = all_ones && ones(n, i) == Real(1);
        }
    }
    std::mt19937_64 rng(cfg.checks.seed);
    Status st = status_of(all_ones);
    json pairs = json::array();
    for (long k = 0; k < cfg.checks.random_cases; ++k) {
        std::string ta = random_family_expr(rng);
        // b_0 is kept away from zero by adding a unit constant term.
        std::string tb = "max(1-n,0)*" + std::to_string(1 + rng() % 3) + "+" + random_family_expr(rng);
        HpsCoefficients a = coeffs(ctx, ta);
        HpsCoefficients b = coeffs(ctx, tb);
        json entry = {{"a", ta}, {"b", tb}};
        try {
            HpsCoefficients d = reciprocal_div(a, b, n_max);
            HpsCoefficients c = cauchy_product(d, b, n_max).materialize(n_max);
            HpsCoefficients clamped = clamp_convolution_noise(c, a, d, b, n_max);
            Verdict v = check_strong_eq(clamped, a.materialize(n_max), n_max, 4, 4);
            entry["strong_eq"] = v.to_json();
            st = combine(st, v.status);
        } catch (const Error &e) {
            entry["error"] = {{"kind", e.kind()}, {"message", e.what()}};
            st = combine(st, Status::Fail);
        }
        pairs.push_back(entry);
    }
    return {"division", "algebra div", st, {{"reciprocal_of_1-x_all_ones_to_64", all_ones}, {"pairs", pairs}}};
}

CheckResult cauchy(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    const auto n_max = static_cast<std::size_t>(cfg.checks.n_max);
    HpsCoefficients one = coeffs(ctx, "1");
    HpsCoefficients sq = cauchy_product(one, one, n_max);
    bool exact = true;
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t i = 0; i < ctx->size(); ++i) {
            exact = exact && sq(n, i) == Real(static_cast<long>(n + 1));
        }
    }
    GenNum L = series_limit(HpsSeries(sq, zero_net(*ctx)), GenNum::from_expr("1/2", *ctx), cfg.checks.q_target);
    Verdict lim = within_power(L, GenNum::constant(Real(4), ctx->size()), *ctx, 4);
    return {"cauchy_product", "algebra mul", all_of({status_of(exact), lim.status}),
            {{"coefficients_equal_n+1", exact}, {"limit_at_1/2_vs_4", lim.to_json()}}};
}

CheckResult composition(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    HpsCoefficients e = coeffs(ctx, "1/factorial(n)");
    HpsCoefficients inner = coeffs(ctx, "max(1-abs(n-1),0)+max(1-abs(n-2),0)");
    HpsCoefficients c = compose(e, inner, 20);
    Status st = Status::Pass;
    json points = json::array();
    for (const char *xs : {"0.05", "0.1"}) {
        Real x = Real::parse(xs);
        Real direct = exp(x + x * x);
        Real worst(0);
        for (std::size_t i = 0; i < ctx->size(); ++i) {
            Real s(0), p(1);
            for (std::size_t n = 0; n <= 20; ++n) {
                s += c(n, i) * p;
                p *= x;
            }
            worst = max(worst, abs(s - direct));
        }
        bool ok = worst <= Real(1e-12);
        st = combine(st, status_of(ok));
        points.push_back({{"x", xs}, {"max_abs_error", real_json(worst)}, {"status", ok ? "pass" : "fail"}});
    }
    json rev = json::array();
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"x+x^2", "max(1-abs(n-1),0)+max(1-abs(n-2),0)"},
        {"x-x^2 (Catalan)", "max(1-abs(n-1),0)-max(1-abs(n-2),0)"},
        {"exp(x)-1", "min(n,1)/factorial(n)"},
        {"x/(1-x)", "min(n,1)"},
    };
    for (const auto &[label, text] : cases) {
        HpsCoefficients a = coeffs(ctx, text);
        HpsCoefficients g = reverse(a, 16);
        HpsCoefficients id = compose(a, g, 16);
        Real worst(0);
        for (std::size_t n = 0; n <= 16; ++n) {
            for (std::size_t i = 0; i < ctx->size(); ++i) {
                worst = max(worst, abs(id(n, i) - Real(n == 1 ? 1 : 0)));
            }
        }
        bool ok = worst <= Real(1e-40);
        st = combine(st, status_of(ok));
        json head = json::array();
        for (std::size_t n = 0; n <= 8; ++n) {
            head.push_back(g(n, 0).str(12));
        }
        rev.push_back({{"family", label},
                       {"reverse_head_eps0", head},
                       {"round_trip_max_error", real_json(worst)},
                       {"status", ok ? "pass" : "fail"}});
    }
    return {"composition", "algebra compose", st, {{"exp_of_x+x^2", points}, {"reversion", rev}}};
}

CheckResult derived_radius(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    const auto n_lo = static_cast<std::size_t>(cfg.checks.n_lo);
    const auto n_hi = static_cast<std::size_t>(cfg.checks.n_hi);
    std::vector<std::string> families = {"1", "1/factorial(n)"};
    std::mt19937_64 rng(cfg.checks.seed + 8);
    for (long k = 0; k < cfg.checks.random_cases; ++k) {
        families.push_back(random_family_expr(rng));
    }
    Status st = Status::Pass;
    json cases = json::array();
    for (const auto &f : families) {
        HpsCoefficients a = coeffs(ctx, f);
        RadiusEstimate r1 = radius(a, n_lo, n_hi);
        RadiusEstimate r2 = radius(derive(a), n_lo, n_hi);
        bool ok = true;
        Real worst(0);
        for (std::size_t i : ctx->grid.tail()) {
            const Real &x = r1.r.values[i];
            const Real &y = r2.r.values[i];
            if (x.is_inf() || y.is_inf()) {
                ok = ok && x == y;
                continue;
            }
            Real rel = abs(x - y) / abs(x);
            worst = max(worst, rel);
        }
        ok = ok && worst <= Real(1e-6);
        st = combine(st, status_of(ok));
        cases.push_back({{"coeffs", f},
                         {"r", reals_json(r1.r.values)},
                         {"r_derived", reals_json(r2.r.values)},
                         {"max_rel_diff", real_json(worst)},
                         {"status", ok ? "pass" : "fail"}});
    }
    return {"derived_radius", "algebra derive", st, {{"cases", cases}}};
}

CheckResult dirac_delta(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    GenNum b = GenNum::gauge_power(*ctx, Real(-1));
    MollifierSpec m = MollifierSpec::standard(b);
    HpsCoefficients a = delta_coeffs(m, ctx);
    bool odd_zero = true;
    for (std::size_t n = 1; n <= static_cast<std::size_t>(cfg.checks.n_max); n += 2) {
        for (std::size_t i = 0; i < ctx->size(); ++i) {
            odd_zero = odd_zero && a(n, i).is_zero();
        }
    }
    Verdict weak = check_weak_moderate(a, static_cast<std::size_t>(cfg.checks.n_max), cfg.checks.Q_max,
                                       cfg.checks.R_max);
    auto w = witness_from(weak);
    bool witness_ok = w && w->Q == 1 && w->R == 1;
    RadiusClassification cls = classify_radius(
        radius(a, static_cast<std::size_t>(cfg.checks.n_lo), static_cast<std::size_t>(cfg.checks.n_hi)), *ctx,
        cfg.checks.P_max);
    bool infinite = true;
    for (std::size_t i : ctx->grid.tail()) {
        infinite = infinite && cls.classes[i] == RadiusClass::Infinite;
    }
    HyperNat N = sigma_power(*ctx, 1);
    bool n_ok = true;
    for (std::size_t i : ctx->grid.tail()) {
        n_ok = n_ok && N.values[i] >= Real(8);
    }
    Verdict cross = delta_crosscheck(m, ctx, GenNum::gauge_power(*ctx, Real(1)), N, 4);
    return {"dirac_delta", "example delta",
            all_of({status_of(odd_zero), status_of(witness_ok), status_of(infinite), status_of(n_ok), cross.status}),
            {{"mollifier", {{"profile", m.profile}, {"m0", real_json(m.moments[0])}, {"m2", real_json(m.moments[2])}}},
             {"odd_coefficients_zero", odd_zero},
             {"weak_moderate", weak.to_json()},
             {"radius_class", cls.to_json()},
             {"partial_sums_vs_b_mu(b_x)", cross.to_json()}}};
}

CheckResult graf_characterization(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    GenNum zero = zero_net(*ctx);
    GenNum unit = GenNum::constant(Real(1), ctx->size());
    std::vector<GenNum> xs{zero, GenNum::from_expr("1/2", *ctx), GenNum::from_expr("-1/2", *ctx), unit};
    GrowthWitness ex = graf_check(GsfNet::from_expr(ctx, "exp(x)"), zero, unit, 16, xs);

    MollifierSpec m = MollifierSpec::standard(GenNum::gauge_power(*ctx, Real(-1)));
    GsfNet delta = GsfNet::from_series(HpsSeries(delta_coeffs(m, ctx), zero));
    std::vector<GenNum> dxs{GenNum::from_expr("rho/2", *ctx), GenNum::from_expr("-rho/2", *ctx),
                            GenNum::from_expr("3*rho/4", *ctx)};
    GrowthWitness de = graf_check(delta, zero, GenNum::gauge_power(*ctx, Real(1)), 16, dxs);
    bool de_ok = de.verdict.passed() && de.inv_R_exponent && std::abs(*de.inv_R_exponent - 1.0) <= 0.1;

    // Lower-bound family of the nowhere-analytic example: |f^(n)| >= e^-2n (2n)^2n.
    GrowthWitness nw = graf_check(GsfNet::from_expr(ctx, "exp(-2*n)*(4*n^2)^n"), zero, unit, 16, xs);
    // Taylor coefficients n!, i.e. f^(n)(0) = n!^2.
    GrowthWitness nf = graf_check(GsfNet::from_expr(ctx, "factorial(n)^2"), zero, unit, 16, xs);
    return {"graf_characterization", "graf",
            all_of({ex.verdict.status, status_of(de_ok), status_of(nw.verdict.failed()),
                    status_of(nf.verdict.failed())}),
            {{"exp", ex.to_json()}, {"delta", de.to_json()}, {"nowhere_analytic", nw.to_json()},
             {"factorial_coefficients", nf.to_json()}}};
}

CheckResult representative_independence(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    std::mt19937_64 rng(cfg.checks.seed + 11);
    const auto &fams = corpus();
    // The exponent 3 + log10(1/eps) grows without bound, so these are
    // strongly negligible, yet they stay above the rounding noise on most of
    // the desk grid. rho^((n+1)/eps) vanishes at working precision beyond
    // eps = 10^-1 and is kept as a control.
    const std::vector<std::string> perturbations = {"rho^((n+1)*(3-log(eps)/log(10)))",
                                                    "-(n+1)*rho^((n+2)*(3-log(eps)/log(10)))",
                                                    "rho^((n+1)/eps)"};
    HyperNat N = sigma_power(*ctx, 1);
    Status st = Status::Pass;
    json cases = json::array();
    for (long k = 0; k < cfg.checks.random_cases; ++k) {
        const CorpusFamily &f = fams[rng() % fams.size()];
        const std::string &pt = perturbations[rng() % perturbations.size()];
        HpsSeries s = corpus_series(f, ctx);
        const long Q = s.coeffs.witness ? s.coeffs.witness->Q : 0;
        // Points inside the ball where the summands are bounded.
        const long e = std::max<long>(1 + Q, 1) + static_cast<long>(rng() % 2);
        GenNum x = s.center + GenNum::from_expr("rho^" + std::to_string(e) + "*" + std::to_string(1 + rng() % 3) + "/4",
                                                *ctx);
        HpsCoefficients a = s.coeffs;
        HpsCoefficients p = coeffs(ctx, pt);
        HpsCoefficients b = HpsCoefficients::from_function(
            ctx, [a, p](std::size_t n, std::size_t i) { return a(n, i) + p(n, i); }, f.name + " + " + pt);
        HpsSeries s2(b, s.center);
        GenNum S1 = hyperfinite_sum(s, x, N);
        GenNum S2 = hyperfinite_sum(s2, x, N);
        std::vector<Real> logs(ctx->size(), Real::infinity(-1));
        for (std::size_t i = 0; i < ctx->size(); ++i) {
            Real d = clean_difference(S1[i], S2[i]);
            if (!d.is_zero()) {
                logs[i] = log(d);
            }
        }
        Verdict v = is_negligible_valuation(valuation_from_logs(logs, ctx->rho, ctx->grid), ctx->grid, cfg.checks.q_max);
        bool ok = v.passed() && v.witness.value("q", 0L) >= 4;
        st = combine(st, status_of(ok));
        cases.push_back({{"family", f.name}, {"perturbation", pt}, {"x", net_json(x)}, {"negligible", v.to_json()}});
    }
    return {"representative_independence", "sum", st, {{"cases", cases}}};
}

CheckResult convergence_ball(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    ConvergeOptions opt;
    opt.n_lo = static_cast<std::size_t>(cfg.checks.n_lo);
    opt.n_hi = static_cast<std::size_t>(cfg.checks.n_hi);
    opt.margin_m = cfg.checks.margin_m;
    opt.k_max = static_cast<int>(cfg.checks.k_max);
    Status st = Status::Pass;
    json cases = json::array();
    for (const auto &f : corpus()) {
        HpsSeries s = corpus_series(f, ctx);
        if (!s.coeffs.witness) {
            cases.push_back({{"family", f.name}, {"error", "no weak-moderateness witness"}});
            st = combine(st, Status::Fail);
            continue;
        }
        const long e = std::max<long>(1 + s.coeffs.witness->Q, 1);
        GenNum x = s.center + GenNum::gauge_power(*ctx, Real(e));
        ConvergenceReport r = converges_at(s, x, opt);
        st = combine(st, r.overall.status);
        cases.push_back({{"family", f.name},
                         {"Q", s.coeffs.witness->Q},
                         {"x", "c + rho^" + std::to_string(e)},
                         {"report", r.to_json()}});
    }
    return {"convergence_ball", "converge", st, {{"cases", cases}}};
}

CheckResult flat_point(const RunConfig &cfg)
{
    auto ctx = cfg.context();
    Verdict v = flat_point_check(ctx, cfg.checks.q_max);
    return {"flat_point", "example flat", v.status, v.to_json()};
}

CheckResult determinism(const RunConfig &cfg)
{
    SuiteOptions a;
    a.only = {1, 3, 6};
    a.threads = 1;
    SuiteOptions b = a;
    b.threads = 3;
    const std::string d1 = run_suite(cfg, a).dump();
    const std::string d2 = run_suite(cfg, a).dump();
    const std::string d3 = run_suite(cfg, b).dump();
    bool same = d1 == d2 && d1 == d3;
    return {"determinism", "suite", status_of(same),
            {{"subset", a.only},
             {"report_hash_run1", fnv1a64_hex(d1)},
             {"report_hash_run2", fnv1a64_hex(d2)},
             {"report_hash_threads3", fnv1a64_hex(d3)}}};
}

} // namespace

const std::vector<CorpusFamily> &corpus()
{
    static const std::vector<CorpusFamily> c = {
        {"geometric", "1", "0"},
        {"powers_of_two", "2^n", "0"},
        {"exp", "1/factorial(n)", "0"},
        {"inverse_gauge_geometric", "rho^(-n)", "0"},
        {"linear", "n+1", "1/2"},
        {"alternating_harmonic", "(-1)^n/(n+1)", "0"},
        {"delta", "", "0"},
    };
    return c;
}

HpsSeries corpus_series(const CorpusFamily &f, const ContextPtr &ctx)
{
    GenNum c = GenNum::from_expr(f.center, *ctx);
    if (f.coeffs.empty()) {
        MollifierSpec m = MollifierSpec::standard(GenNum::gauge_power(*ctx, Real(-1)));
        return HpsSeries(delta_coeffs(m, ctx), c, f.name);
    }
    HpsCoefficients a = HpsCoefficients::from_expr(ctx, f.coeffs);
    attach_witness(a);
    return HpsSeries(a, c, f.name);
}

std::string random_family_expr(std::mt19937_64 &rng)
{
    const unsigned long p = 1 + rng() % 8, q = 1 + rng() % 4;
    const unsigned long b1 = 1 + rng() % 6, b2 = 1 + rng() % 6;
    const unsigned long k = rng() % 2, gamma = rng() % 3;
    const bool alternating = rng() % 2;
    std::string base = (alternating ? "-" : "") + std::to_string(b1) + "/" + std::to_string(b2);
    if (k) {
        base += "*rho^(-1)";
    }
    std::string text = std::to_string(p) + "/" + std::to_string(q) + "*(" + base + ")^n";
    if (gamma) {
        text += "*(n+1)^" + std::to_string(gamma);
    }
    return text;
}

const std::vector<SuiteCase> &suite_cases()
{
    static const std::vector<SuiteCase> cases = {
        {1, "geometric_identity", geometric_identity},
        {2, "exponential_membership", exponential_membership},
        {3, "radius_values", radius_values},
        {4, "radius_well_defined", radius_well_defined},
        {5, "division", division},
        {6, "cauchy_product", cauchy},
        {7, "composition", composition},
        {8, "derived_radius", derived_radius},
        {9, "dirac_delta", dirac_delta},
        {10, "graf_characterization", graf_characterization},
        {11, "representative_independence", representative_independence},
        {12, "convergence_ball", convergence_ball},
        {13, "flat_point", flat_point},
        {14, "determinism", determinism},
    };
    return cases;
}

CheckResult run_case(const SuiteCase &c, const RunConfig &cfg)
{
    PrecisionScope scope(cfg.precision);
    try {
        CheckResult r = c.run(cfg);
        r.name = std::to_string(c.id) + "." + c.name;
        return r;
    } catch (const Error &e) {
        return {std::to_string(c.id) + "." + c.name, "suite", Status::Fail,
                {{"error", {{"kind", e.kind()}, {"message", e.what()}}}}};
    }
}

Report run_suite(const RunConfig &cfg, const SuiteOptions &opt)
{
    for (int id : opt.only) {
        const auto &all = suite_cases();
        if (std::none_of(all.begin(), all.end(), [id](const SuiteCase &c) { return c.id == id; })) {
            throw ConfigError("no suite case with id " + std::to_string(id));
        }
    }
    std::vector<const SuiteCase *> todo;
    for (const auto &c : suite_cases()) {
        if (opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), c.id) != opt.only.end()) {
            todo.push_back(&c);
        }
    }
    std::vector<CheckResult> results(todo.size());
    std::vector<double> seconds(todo.size(), 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < todo.size(); k = next++) {
            auto t0 = std::chrono::steady_clock::now();
            results[k] = run_case(*todo[k], cfg);
            seconds[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(todo.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    Report r;
    r.command = "suite";
    r.config_hash = cfg.hash();
    r.precision = cfg.precision;
    r.results = std::move(results);
    if (opt.timing) {
        r.timing = seconds;
    }
    return r;
}

} // namespace hps
