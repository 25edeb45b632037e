#include <hps/commands.hpp>

#include <algorithm>

namespace hps
{

namespace
{

bool is_usage_error(const Error &e)
{
    const std::string &k = e.kind();
    return k == "config" || k == "parse" || k == "invalid-gauge" || k == "domain" || k == "unresolved-name"
           || k == "precision-overflow" || k == "unknown-command";
}

void require(const std::string &value, const std::string &flag, const std::string &command)
{
    if (value.empty()) {
        throw ConfigError("'" + command + "' needs " + flag);
    }
}

template <class T>
T find_case(const std::vector<T> &v, int id)
{
    for (const auto &c : v) {
        if (c.id == id) {
            return c;
        }
    }
    throw ConfigError("no suite case " + std::to_string(id));
}

std::vector<std::string> radius_row(const RadiusEstimate &r, const NetContext &ctx, std::size_t i)
{
    return {std::to_string(i), ctx.grid.points[i].str(), r.r.values[i].str(), r.inv_r.values[i].str(), r.method[i],
            r.growth[i].str()};
}

Curve radius_curve(const std::string &file, const RadiusEstimate &r, const NetContext &ctx)
{
    Curve c{file, {"eps_index", "eps", "r", "inv_r", "method", "growth_E"}, {}};
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        c.rows.push_back(radius_row(r, ctx, i));
    }
    return c;
}

Curve running_max_curve(const std::string &file, const RadiusEstimate &r)
{
    Curve c{file, {"n", "eps_index", "running_max_root"}, {}};
    if (r.running_max.empty()) {
        return c;
    }
    for (std::size_t k = 0; k < r.running_max.front().size(); ++k) {
        for (std::size_t i = 0; i < r.running_max.size(); ++i) {
            if (k < r.running_max[i].size()) {
                c.rows.push_back({std::to_string(r.window.first + k), std::to_string(i), r.running_max[i][k].str()});
            }
        }
    }
    return c;
}

Curve table_curve(const std::string &file, const HpsCoefficients &a, std::size_t n_max)
{
    Curve c{file, {"n", "eps_index", "value"}, {}};
    for (std::size_t n = 0; n <= n_max; ++n) {
        for (std::size_t i = 0; i < a.context().size(); ++i) {
            c.rows.push_back({std::to_string(n), std::to_string(i), a(n, i).str()});
        }
    }
    return c;
}

ConvergeOptions converge_options(const RunConfig &cfg)
{
    ConvergeOptions o;
    o.n_lo = static_cast<std::size_t>(cfg.checks.n_lo);
    o.n_hi = static_cast<std::size_t>(cfg.checks.n_hi);
    o.margin_m = cfg.checks.margin_m;
    o.k_max = static_cast<int>(cfg.checks.k_max);
    o.N_max = cfg.checks.N_max > 0 ? std::max<long>(cfg.checks.N_max, 64) : 64;
    o.q_target = cfg.checks.q_target;
    return o;
}

json head_json(const HpsCoefficients &a, std::size_t count, std::size_t i)
{
    json h = json::array();
    for (std::size_t n = 0; n < count; ++n) {
        h.push_back(real_json(a(n, i)));
    }
    return h;
}

class Runner
{
public:
    Runner(const RunConfig &cfg, const CommandArgs &args)
        : cfg_(cfg), args_(args), ctx_(cfg.context()), n_max_(static_cast<std::size_t>(cfg.checks.n_max))
    {
        report_.command = args.sub.empty() ? args.command : args.command + " " + args.sub;
        report_.config_hash = cfg.hash();
        report_.precision = cfg.precision;
    }

    Report run()
    {
        const std::string &c = args_.command;
        if (c == "moderate" || c == "negligible") {
            net_predicate();
        } else if (c == "weak-moderate") {
            HpsSeries s = series(args_.series, "--series");
            add(s.name, check_weak_moderate(s.coeffs, n_max_, cfg_.checks.Q_max, cfg_.checks.R_max));
        } else if (c == "strong-eq") {
            HpsSeries a = series(args_.series, "--series");
            HpsSeries b = series(args_.series_b, "--series-b");
            add(a.name + " ~ " + b.name,
                check_strong_eq(a.coeffs, b.coeffs, n_max_, cfg_.checks.q_max, cfg_.checks.q_max));
        } else if (c == "radius" || c == "classify") {
            radius_command(c == "classify");
        } else if (c == "sum" || c == "limit") {
            sum_command(c == "limit");
        } else if (c == "converge") {
            converge_command();
        } else if (c == "bounded") {
            HpsSeries s = series(args_.series, "--series");
            EventualBoundReport r = eventually_bounded(s, point(), n_max_, std::max<long>(cfg_.checks.N_max, 64));
            report_.results.push_back({s.name, "bounded", r.verdict.status, r.to_json()});
        } else if (c == "algebra") {
            algebra_command();
        } else if (c == "graf") {
            graf_command();
        } else if (c == "example") {
            example_command();
        } else if (c == "suite") {
            Report r = run_suite(cfg_, args_.suite);
            r.curves = std::move(report_.curves);
            return r;
        } else {
            throw UnknownCommand("unknown command '" + c + "'");
        }
        return std::move(report_);
    }

private:
    HpsSeries series(const std::string &name, const std::string &flag)
    {
        require(name, flag, args_.command);
        return cfg_.make_series(name, ctx_);
    }

    GenNum point()
    {
        require(args_.x, "--x", args_.command);
        return cfg_.point(args_.x, *ctx_);
    }

    void add(const std::string &name, const Verdict &v)
    {
        report_.results.push_back({name, report_.command, v.status, v.to_json()});
    }

    void net_predicate()
    {
        require(args_.net, "--net", args_.command);
        GenNum x = cfg_.point(args_.net, *ctx_);
        std::vector<Real> v = valuation(x, ctx_->rho, ctx_->grid);
        Verdict verdict = args_.command == "moderate" ? is_moderate(x, ctx_->rho, ctx_->grid, cfg_.checks.N_max)
                                                      : is_negligible(x, ctx_->rho, ctx_->grid, cfg_.checks.q_max);
        json d = verdict.to_json();
        d["valuation"] = reals_json(v);
        report_.results.push_back({args_.net, args_.command, verdict.status, d});
        if (args_.curves) {
            report_.curves.push_back(valuation_curve(args_.command + "_valuation.csv", *ctx_, v));
        }
    }

    void radius_command(bool classify)
    {
        HpsSeries s = series(args_.series, "--series");
        RadiusEstimate r = radius(s.coeffs, static_cast<std::size_t>(cfg_.checks.n_lo),
                                  static_cast<std::size_t>(cfg_.checks.n_hi), args_.curves);
        if (args_.curves) {
            report_.curves.push_back(radius_curve(s.name + "_radius.csv", r, *ctx_));
            report_.curves.push_back(running_max_curve(s.name + "_running_max.csv", r));
        }
        if (!classify) {
            // A radius estimate is a measurement; it passes unless the family
            // needed a warning on the tail.
            Status st = r.warnings.empty() ? Status::Pass : Status::Inconclusive;
            report_.results.push_back({s.name, "radius", st, r.to_json()});
            return;
        }
        RadiusClassification cls = classify_radius(r, *ctx_, cfg_.checks.P_max);
        json d = cls.to_json();
        d["radius"] = r.to_json();
        report_.results.push_back({s.name, "classify", Status::Pass, d});
    }

    void sum_command(bool limit)
    {
        HpsSeries s = series(args_.series, "--series");
        GenNum x = point();
        GenNum value;
        json d;
        if (limit) {
            value = series_limit(s, x, cfg_.checks.q_target);
        } else {
            const std::string text = args_.N.empty() ? "1/sigma" : args_.N;
            HyperNat N = hypernat_from_expr(NetExpr::parse(text, ExprContext::Net), ctx_->sigma, ctx_->grid,
                                            std::max<long>(cfg_.checks.N_max, 1), &ctx_->rho);
            d["N"] = {{"expr", text}, {"values", reals_json(N.values)}, {"sigma_witness", N.sigma_witness}};
            SumInfo info;
            value = hyperfinite_sum(s, x, N, 1000000, &info);
            json terms = json::array();
            for (std::size_t t : info.terms) {
                terms.push_back(t);
            }
            d["terms_summed"] = terms;
        }
        d["value"] = reals_json(value.values);
        Verdict v = args_.expect.empty()
                        ? is_moderate(value, ctx_->rho, ctx_->grid, std::max<long>(cfg_.checks.N_max, 64))
                        : ext_eq(value, cfg_.point(args_.expect, *ctx_), ctx_->rho, ctx_->grid, cfg_.checks.q_max);
        d[args_.expect.empty() ? "moderate" : "equals_expected"] = v.to_json();
        report_.results.push_back({s.name, args_.command, v.status, d});
    }

    void converge_command()
    {
        HpsSeries s = series(args_.series, "--series");
        GenNum x = point();
        if (!args_.x_bar.empty()) {
            ShortcutResult r = converge_shortcut(s, x, cfg_.point(args_.x_bar, *ctx_), converge_options(cfg_));
            report_.results.push_back({s.name, "converge", r.verdict.status, r.to_json()});
            return;
        }
        ConvergenceReport r = converges_at(s, x, converge_options(cfg_));
        report_.results.push_back({s.name, "converge", r.overall.status, r.to_json()});
    }

    void algebra_command()
    {
        const std::string &op = args_.sub;
        if (std::find(algebra_ops().begin(), algebra_ops().end(), op) == algebra_ops().end()) {
            throw UnknownCommand("unknown algebra operation '" + op + "'");
        }
        HpsSeries a = series(args_.series, "--series");
        auto second = [&] { return series(args_.series_b, "--series-b"); };
        std::optional<HpsCoefficients> out;
        std::string label = op + "(" + a.name;
        if (op == "add") {
            HpsSeries b = second();
            out = hps::add(a.coeffs, b.coeffs);
            label += ", " + b.name;
        } else if (op == "mul") {
            HpsSeries b = second();
            out = cauchy_product(a.coeffs, b.coeffs, n_max_);
            label += ", " + b.name;
        } else if (op == "div") {
            HpsSeries b = second();
            out = reciprocal_div(a.coeffs, b.coeffs, n_max_);
            label += ", " + b.name;
        } else if (op == "compose") {
            HpsSeries b = second();
            out = compose(a.coeffs, b.coeffs, n_max_);
            label += ", " + b.name;
        } else if (op == "derive") {
            out = derive(a.coeffs);
        } else if (op == "integrate") {
            out = integrate(a.coeffs);
        } else if (op == "recenter") {
            require(args_.x_bar, "--x-bar", "algebra recenter");
            out = recenter(a.coeffs, a.center, cfg_.point(args_.x_bar, *ctx_), n_max_);
            label += ", " + args_.x_bar;
        } else {
            out = reverse(a.coeffs, n_max_);
        }
        label += ")";
        HpsCoefficients result = out->materialize(n_max_);
        Verdict weak = check_weak_moderate(result, n_max_, cfg_.checks.Q_max, cfg_.checks.R_max);
        json d = {{"operation", op},
                  {"head_at_last_eps", head_json(result, std::min<std::size_t>(n_max_ + 1, 12), ctx_->size() - 1)},
                  {"weak_moderate", weak.to_json()}};
        // A result without a weak-moderateness witness is not an HPS
        // coefficient family on this grid.
        report_.results.push_back({label, report_.command, weak.passed() ? Status::Pass : weak.status, d});
        if (args_.curves) {
            report_.curves.push_back(table_curve("algebra_" + op + ".csv", result, n_max_));
        }
    }

    void graf_command()
    {
        std::optional<GsfNet> f;
        GenNum c = GenNum::constant(Real(0), ctx_->size());
        std::string name;
        if (!args_.function.empty()) {
            f = GsfNet::from_expr(ctx_, args_.function);
            name = args_.function;
        } else {
            HpsSeries s = series(args_.series, "--series or --function");
            c = s.center;
            f = GsfNet::from_series(s, cfg_.checks.q_target);
            name = s.name;
        }
        if (!args_.x.empty()) {
            c = cfg_.point(args_.x, *ctx_);
        }
        std::vector<GenNum> xs;
        for (const auto &p : args_.samples) {
            xs.push_back(cfg_.point(p, *ctx_));
        }
        if (xs.empty()) {
            xs.push_back(c);
        }
        GrowthWitness w = graf_check(*f, c, cfg_.point(args_.s_expr, *ctx_), 16, xs);
        report_.results.push_back({name, "graf", w.verdict.status, w.to_json()});
    }

    void example_command()
    {
        const std::string &e = args_.sub;
        if (e == "geometric") {
            report_.results.push_back(run_case(find_case(suite_cases(), 1), cfg_));
        } else if (e == "exp") {
            report_.results.push_back(run_case(find_case(suite_cases(), 2), cfg_));
        } else if (e == "delta") {
            report_.results.push_back(run_case(find_case(suite_cases(), 9), cfg_));
        } else if (e == "flat") {
            report_.results.push_back(run_case(find_case(suite_cases(), 13), cfg_));
        } else if (e == "nowhere") {
            add("nowhere_analytic", nowhere_analytic_reject(ctx_, n_max_));
        } else {
            throw UnknownCommand("unknown example '" + e + "'");
        }
    }

    const RunConfig &cfg_;
    const CommandArgs &args_;
    ContextPtr ctx_;
    std::size_t n_max_;
    Report report_;
};

} // namespace

const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> v = {"moderate", "negligible", "weak-moderate", "strong-eq", "radius",
                                               "classify", "sum",        "limit",         "converge",  "bounded",
                                               "algebra",  "graf",       "example",       "suite"};
    return v;
}

const std::vector<std::string> &algebra_ops()
{
    static const std::vector<std::string> v = {"add", "mul", "div", "compose", "derive", "integrate", "recenter",
                                               "reverse"};
    return v;
}

const std::vector<std::string> &example_names()
{
    static const std::vector<std::string> v = {"geometric", "exp", "delta", "flat", "nowhere"};
    return v;
}

Report run_command(const RunConfig &cfg, const CommandArgs &args)
{
    if (std::find(command_names().begin(), command_names().end(), args.command) == command_names().end()) {
        throw UnknownCommand("unknown command '" + args.command + "'");
    }
    PrecisionScope scope(cfg.precision);
    try {
        return Runner(cfg, args).run();
    } catch (const Error &e) {
        if (is_usage_error(e)) {
            throw;
        }
        Report r;
        r.command = args.sub.empty() ? args.command : args.command + " " + args.sub;
        r.config_hash = cfg.hash();
        r.precision = cfg.precision;
        r.results.push_back(
            {args.command, r.command, Status::Fail, {{"error", {{"kind", e.kind()}, {"message", e.what()}}}}});
        return r;
    }
}

} // namespace hps
