#include <hps/config.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace hps
{

namespace
{

void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where)
{
    if (!obj.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
        }
    }
}

std::string get_string(const json &j, const std::string &where)
{
    if (!j.is_string()) {
        throw ConfigError(where + " must be a string");
    }
    return j.get<std::string>();
}

long get_long(const json &j, const std::string &where)
{
    if (!j.is_number_integer()) {
        throw ConfigError(where + " must be an integer");
    }
    return j.get<long>();
}

// Expressions in the config may be given as numbers too.
std::string get_expr(const json &j, const std::string &where)
{
    if (j.is_number_integer()) {
        return std::to_string(j.get<long>());
    }
    if (j.is_number()) {
        throw ConfigError(where + ": write non-integer numbers as strings to keep them exact");
    }
    return get_string(j, where);
}

void check_expr(const std::string &text, ExprContext ctx, const std::string &where)
{
    try {
        NetExpr::parse(text, ctx);
    } catch (const ParseError &e) {
        throw ConfigError(where + ": " + e.what());
    }
}

} // namespace

RunConfig RunConfig::defaults()
{
    RunConfig c;
    c.series = {
        {"geometric", "1", {}, {}, "0"},
        {"exp", "1/factorial(n)", {}, {}, "0"},
    };
    c.named_points = {{"half", "1/2"}, {"drho", "rho"}};
    return c;
}

RunConfig RunConfig::from_json(const json &j, std::string base_dir)
{
    reject_unknown(j, {"version", "precision", "grid", "gauges", "series", "points", "checks"}, "config");
    RunConfig c;
    c.base_dir = std::move(base_dir);
    if (j.contains("version")) {
        c.version = static_cast<int>(get_long(j["version"], "version"));
        if (c.version != 1) {
            throw ConfigError("unsupported config version " + std::to_string(c.version));
        }
    }
    if (j.contains("precision")) {
        long p = get_long(j["precision"], "precision");
        if (p < static_cast<long>(min_precision_bits)) {
            throw ConfigError("precision " + std::to_string(p) + " below " + std::to_string(min_precision_bits)
                              + " bits");
        }
        if (p > static_cast<long>(max_precision_bits)) {
            throw PrecisionOverflow("precision overflow: " + std::to_string(p) + " bits exceeds "
                              + std::to_string(max_precision_bits));
        }
        c.precision = static_cast<unsigned>(p);
    }
    if (j.contains("grid")) {
        const json &g = j["grid"];
        reject_unknown(g, {"decades", "points", "tail_start"}, "grid");
        if (g.contains("decades") && g.contains("points")) {
            throw ConfigError("grid: give either decades or points");
        }
        if (g.contains("decades")) {
            const json &d = g["decades"];
            if (!d.is_array() || d.size() != 2) {
                throw ConfigError("grid.decades must be [k_lo, k_hi]");
            }
            c.decades = {static_cast<int>(get_long(d[0], "grid.decades[0]")),
                         static_cast<int>(get_long(d[1], "grid.decades[1]"))};
        }
        if (g.contains("points")) {
            if (!g["points"].is_array()) {
                throw ConfigError("grid.points must be an array");
            }
            for (const auto &p : g["points"]) {
                c.points.push_back(get_expr(p, "grid.points"));
            }
        }
        if (g.contains("tail_start")) {
            long t = get_long(g["tail_start"], "grid.tail_start");
            if (t < 0) {
                throw ConfigError("grid.tail_start must be non-negative");
            }
            c.tail_start = static_cast<std::size_t>(t);
        }
    }
    if (j.contains("gauges")) {
        const json &g = j["gauges"];
        reject_unknown(g, {"rho", "sigma"}, "gauges");
        if (g.contains("rho")) {
            c.rho = get_expr(g["rho"], "gauges.rho");
        }
        if (g.contains("sigma")) {
            c.sigma = get_expr(g["sigma"], "gauges.sigma");
        }
    }
    if (j.contains("series")) {
        const json &s = j["series"];
        if (!s.is_object()) {
            throw ConfigError("series must be an object of named definitions");
        }
        for (auto it = s.begin(); it != s.end(); ++it) {
            const std::string where = "series." + it.key();
            reject_unknown(it.value(), {"coeffs", "table", "delta_b", "center"}, where);
            SeriesDef d;
            d.name = it.key();
            if (it->contains("coeffs")) {
                d.coeffs = get_expr((*it)["coeffs"], where + ".coeffs");
            }
            if (it->contains("table")) {
                d.table = get_string((*it)["table"], where + ".table");
            }
            if (it->contains("delta_b")) {
                d.delta_b = get_expr((*it)["delta_b"], where + ".delta_b");
            }
            if (it->contains("center")) {
                d.center = get_expr((*it)["center"], where + ".center");
            }
            c.series.push_back(std::move(d));
        }
    }
    if (j.contains("points")) {
        const json &p = j["points"];
        if (!p.is_object()) {
            throw ConfigError("points must be an object of named net expressions");
        }
        for (auto it = p.begin(); it != p.end(); ++it) {
            c.named_points.emplace_back(it.key(), get_expr(it.value(), "points." + it.key()));
        }
    }
    if (j.contains("checks")) {
        const json &k = j["checks"];
        reject_unknown(k,
                       {"n_max", "q_max", "Q_max", "R_max", "N_max", "P_max", "n_lo", "n_hi", "k_max", "margin_m",
                        "q_target", "random_cases", "seed"},
                       "checks");
        auto field = [&](const char *key, long &dst) {
            if (k.contains(key)) {
                dst = get_long(k[key], std::string("checks.") + key);
            }
        };
        CheckParams &p = c.checks;
        field("n_max", p.n_max);
        field("q_max", p.q_max);
        field("Q_max", p.Q_max);
        field("R_max", p.R_max);
        field("N_max", p.N_max);
        field("P_max", p.P_max);
        field("n_lo", p.n_lo);
        field("n_hi", p.n_hi);
        field("k_max", p.k_max);
        field("margin_m", p.margin_m);
        field("q_target", p.q_target);
        field("random_cases", p.random_cases);
        if (k.contains("seed")) {
            if (!k["seed"].is_number_unsigned()) {
                throw ConfigError("checks.seed must be a non-negative integer");
            }
            p.seed = k["seed"].get<std::uint64_t>();
        }
    }
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    std::string dir = std::filesystem::path(path).parent_path().string();
    return from_json(j, dir.empty() ? "." : dir);
}

void RunConfig::validate() const
{
    if (precision < min_precision_bits) {
        throw ConfigError("precision below " + std::to_string(min_precision_bits) + " bits");
    }
    if (precision > max_precision_bits) {
        throw PrecisionOverflow("precision overflow: " + std::to_string(precision) + " bits exceeds "
                          + std::to_string(max_precision_bits));
    }
    std::size_t n_points = points.empty() ? 0 : points.size();
    if (points.empty()) {
        if (decades.first < 0 || decades.second < decades.first) {
            throw ConfigError("grid.decades must satisfy 0 <= k_lo <= k_hi");
        }
        n_points = static_cast<std::size_t>(decades.second - decades.first + 1);
    }
    if (tail_start >= n_points) {
        throw ConfigError("grid.tail_start " + std::to_string(tail_start) + " outside grid of size "
                          + std::to_string(n_points));
    }
    for (const auto &p : points) {
        check_expr(p, ExprContext::Net, "grid.points");
    }
    check_expr(rho, ExprContext::Net, "gauges.rho");
    check_expr(sigma, ExprContext::Net, "gauges.sigma");
    std::set<std::string> names;
    for (const auto &s : series) {
        if (!names.insert(s.name).second) {
            throw ConfigError("series '" + s.name + "' defined twice");
        }
        int kinds = s.coeffs.has_value() + s.table.has_value() + s.delta_b.has_value();
        if (kinds != 1) {
            throw ConfigError("series '" + s.name + "' needs exactly one of coeffs, table, delta_b");
        }
        if (s.coeffs) {
            check_expr(*s.coeffs, ExprContext::Coefficient, "series." + s.name + ".coeffs");
        }
        if (s.delta_b) {
            check_expr(*s.delta_b, ExprContext::Net, "series." + s.name + ".delta_b");
        }
        check_expr(s.center, ExprContext::Net, "series." + s.name + ".center");
    }
    std::set<std::string> pnames;
    for (const auto &[name, text] : named_points) {
        if (!pnames.insert(name).second) {
            throw ConfigError("point '" + name + "' defined twice");
        }
        check_expr(text, ExprContext::Net, "points." + name);
    }
    const CheckParams &k = checks;
    if (k.n_max < 1 || k.q_max < 1 || k.Q_max < 0 || k.R_max < 0 || k.N_max < 0 || k.P_max < 0 || k.k_max < 0
        || k.margin_m < 0 || k.q_target < 1 || k.random_cases < 0) {
        throw ConfigError("checks: parameters out of range");
    }
    if (k.n_lo < 1 || k.n_hi <= k.n_lo) {
        throw ConfigError("checks: need 1 <= n_lo < n_hi");
    }
}

json RunConfig::to_json() const
{
    json j;
    j["version"] = version;
    j["precision"] = precision;
    json g;
    if (points.empty()) {
        g["decades"] = {decades.first, decades.second};
    } else {
        g["points"] = points;
    }
    g["tail_start"] = tail_start;
    j["grid"] = g;
    j["gauges"] = {{"rho", rho}, {"sigma", sigma}};
    json s = json::object();
    for (const auto &d : series) {
        json e;
        if (d.coeffs) {
            e["coeffs"] = *d.coeffs;
        }
        if (d.table) {
            e["table"] = *d.table;
        }
        if (d.delta_b) {
            e["delta_b"] = *d.delta_b;
        }
        e["center"] = d.center;
        s[d.name] = e;
    }
    j["series"] = s;
    json p = json::object();
    for (const auto &[name, text] : named_points) {
        p[name] = text;
    }
    j["points"] = p;
    const CheckParams &k = checks;
    j["checks"] = {{"n_max", k.n_max},   {"q_max", k.q_max},       {"Q_max", k.Q_max},
                   {"R_max", k.R_max},   {"N_max", k.N_max},       {"P_max", k.P_max},
                   {"n_lo", k.n_lo},     {"n_hi", k.n_hi},         {"k_max", k.k_max},
                   {"margin_m", k.margin_m}, {"q_target", k.q_target}, {"random_cases", k.random_cases},
                   {"seed", k.seed}};
    return j;
}

std::string fnv1a64_hex(const std::string &bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunConfig::hash() const
{
    return fnv1a64_hex(to_json().dump());
}

EpsGrid RunConfig::grid() const
{
    if (points.empty()) {
        return EpsGrid::decades(decades.first, decades.second, tail_start);
    }
    EpsGrid g;
    for (const auto &p : points) {
        Env env{Real(1), Real(1), Real(0), std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
        NetExpr e = NetExpr::parse(p, ExprContext::Net);
        if (e.uses(NetExpr::Var::Eps) || e.uses(NetExpr::Var::Rho) || e.uses(NetExpr::Var::Sigma)) {
            throw ConfigError("grid point '" + p + "' must be a constant");
        }
        g.points.push_back(eval(e, env));
    }
    g.tail_start = tail_start;
    g.validate();
    return g;
}

ContextPtr RunConfig::context() const
{
    return make_context(grid(), rho, sigma);
}

const SeriesDef &RunConfig::series_def(const std::string &name) const
{
    for (const auto &s : series) {
        if (s.name == name) {
            return s;
        }
    }
    throw UnresolvedName("unresolved series name '" + name + "'");
}

HpsSeries RunConfig::make_series(const std::string &name, const ContextPtr &ctx) const
{
    const SeriesDef &d = series_def(name);
    GenNum c = GenNum::from_expr(d.center, *ctx);
    if (d.coeffs) {
        return HpsSeries(HpsCoefficients::from_expr(ctx, *d.coeffs), c, name);
    }
    if (d.table) {
        std::filesystem::path p(*d.table);
        if (p.is_relative()) {
            p = std::filesystem::path(base_dir) / p;
        }
        std::ifstream in(p);
        if (!in) {
            throw ConfigError("series '" + name + "': cannot open table '" + p.string() + "'");
        }
        return HpsSeries(read_table_csv(ctx, in, p.filename().string()), c, name);
    }
    MollifierSpec m = MollifierSpec::standard(GenNum::from_expr(*d.delta_b, *ctx));
    return HpsSeries(delta_coeffs(m, ctx), c, name);
}

GenNum RunConfig::point(const std::string &name_or_expr, const NetContext &ctx) const
{
    for (const auto &[name, text] : named_points) {
        if (name == name_or_expr) {
            return GenNum::from_expr(text, ctx);
        }
    }
    try {
        return GenNum::from_expr(name_or_expr, ctx);
    } catch (const ParseError &e) {
        throw ConfigError("'" + name_or_expr + "' is neither a named point nor a net expression: " + e.what());
    }
}

} // namespace hps
