// hpsc: run hyper-power series checks from the shell and write JSON reports.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <hps/commands.hpp>

namespace
{

struct Flags {
    std::string config;
    std::optional<unsigned> precision;
    std::string out;
    std::string csv;
    std::optional<std::size_t> tail_start;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    bool timing = false;
};

void add_series_opts(CLI::App *sub, hps::CommandArgs &a, bool two)
{
    sub->add_option("--series", a.series, "Series name from the config");
    if (two) {
        sub->add_option("--series-b", a.series_b, "Second series name");
    }
}

int fail_usage(const std::string &kind, const std::string &msg)
{
    std::cerr << "hpsc: error[" << kind << "]: " << msg << "\n";
    return hps::exit_usage;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hpsc - hyper-power series checks over generalized numbers"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    hps::CommandArgs a;

    app.add_option("--config", f.config, "Run configuration (JSON); built-in defaults when omitted");
    app.add_option("--precision", f.precision, "Mantissa precision in bits (>= 64)");
    app.add_option("--out", f.out, "Write the report here instead of stdout");
    app.add_option("--csv", f.csv, "Directory for CSV curve files");
    app.add_option("--tail-start", f.tail_start, "First grid index of the asymptotic tail");
    app.add_option("--seed", f.seed, "Seed for randomized property subsets");
    app.add_option("--threads", f.threads, "Worker threads for suite")->check(CLI::Range(1u, 256u));
    app.add_flag("--timing", f.timing, "Include wall-clock timing in suite reports");

    for (const char *name : {"moderate", "negligible"}) {
        auto *sub = app.add_subcommand(name, std::string("Test a net for being ") + name);
        sub->add_option("--net", a.net, "Net expression or named point")->required();
    }
    add_series_opts(app.add_subcommand("weak-moderate", "Search a weak-moderateness witness (Q, R)"), a, false);
    add_series_opts(app.add_subcommand("strong-eq", "Strong equivalence of two coefficient families"), a, true);
    add_series_opts(app.add_subcommand("radius", "Radius of convergence per eps"), a, false);
    add_series_opts(app.add_subcommand("classify", "Classify the radius against gauge powers"), a, false);
    {
        auto *sub = app.add_subcommand("sum", "Hyperfinite partial sum");
        add_series_opts(sub, a, false);
        sub->add_option("--x", a.x, "Point")->required();
        sub->add_option("--N", a.N, "Hypernatural bound expression (default 1/sigma)");
        sub->add_option("--expect", a.expect, "Compare against this net");
    }
    {
        auto *sub = app.add_subcommand("limit", "eps-wise limit of the series");
        add_series_opts(sub, a, false);
        sub->add_option("--x", a.x, "Point")->required();
        sub->add_option("--expect", a.expect, "Compare against this net");
    }
    {
        auto *sub = app.add_subcommand("converge", "Membership in the set of convergence");
        add_series_opts(sub, a, false);
        sub->add_option("--x", a.x, "Point")->required();
        sub->add_option("--x-bar", a.x_bar, "Farther point for the convergence shortcut");
    }
    {
        auto *sub = app.add_subcommand("bounded", "Eventual boundedness of the summands");
        add_series_opts(sub, a, false);
        sub->add_option("--x", a.x, "Point")->required();
    }
    {
        auto *sub = app.add_subcommand("algebra", "Closure operations on coefficient families");
        sub->add_option("op", a.sub, "add|mul|div|compose|derive|integrate|recenter|reverse")
            ->required();
        add_series_opts(sub, a, true);
        sub->add_option("--x-bar", a.x_bar, "New center (recenter)");
    }
    {
        auto *sub = app.add_subcommand("graf", "Factorial growth test on derivatives");
        add_series_opts(sub, a, false);
        sub->add_option("--function", a.function, "Derivative net expression in n, x, eps, rho, sigma");
        sub->add_option("--x", a.x, "Center (default: series center or 0)");
        sub->add_option("--sample", a.samples, "Sample point (repeatable)");
        sub->add_option("--s", a.s_expr, "Sample radius net");
    }
    {
        auto *sub = app.add_subcommand("example", "Run one of the canonical examples");
        sub->add_option("name", a.sub, "geometric|exp|delta|flat|nowhere")
            ->required();
    }
    {
        auto *sub = app.add_subcommand("suite", "Run every acceptance check");
        sub->add_option("--only", a.suite.only, "Run only these case ids");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        if (app.get_subcommands().empty() && !app.remaining().empty()) {
            return fail_usage("unknown-command", "unknown command '" + app.remaining().front() + "'");
        }
        app.exit(e);
        return hps::exit_usage;
    }
    a.command = app.get_subcommands().front()->get_name();
    a.curves = !f.csv.empty();
    a.suite.threads = f.threads;
    a.suite.timing = f.timing;

    hps::Report report;
    try {
        hps::RunConfig cfg = f.config.empty() ? hps::RunConfig::defaults() : hps::RunConfig::load(f.config);
        if (f.precision) {
            cfg.precision = *f.precision;
        }
        if (f.tail_start) {
            cfg.tail_start = *f.tail_start;
        }
        if (f.seed) {
            cfg.checks.seed = *f.seed;
        }
        cfg.validate();
        report = hps::run_command(cfg, a);
    } catch (const hps::Error &e) {
        return fail_usage(e.kind(), e.what());
    }

    const std::string text = report.dump();
    if (f.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(f.out, std::ios::binary);
        if (!os || !(os << text)) {
            return fail_usage("io", "cannot write report to '" + f.out + "'");
        }
    }
    if (!f.csv.empty()) {
        try {
            hps::write_curves(report, f.csv);
        } catch (const std::exception &e) {
            return fail_usage("io", e.what());
        }
    }
    return hps::exit_code(report.overall());
}
