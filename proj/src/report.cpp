#include <hps/report.hpp>

#include <filesystem>
#include <fstream>

namespace hps
{

json CheckResult::to_json() const
{
    return {{"name", name}, {"command", command}, {"status", to_string(status)}, {"details", details}};
}

Status Report::overall() const
{
    if (results.empty()) {
        return Status::Inconclusive;
    }
    Status s = Status::Pass;
    for (const auto &r : results) {
        s = combine(s, r.status);
    }
    return s;
}

json Report::to_json() const
{
    json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["schema"] = report_schema_version;
    j["config_hash"] = config_hash;
    j["precision"] = precision;
    j["command"] = command;
    json rs = json::array();
    for (const auto &r : results) {
        rs.push_back(r.to_json());
    }
    j["results"] = rs;
    j["overall"] = to_string(overall());
    if (timing) {
        json t = json::object();
        double total = 0;
        for (std::size_t i = 0; i < results.size() && i < timing->size(); ++i) {
            t[results[i].name] = (*timing)[i];
            total += (*timing)[i];
        }
        t["total"] = total;
        j["timing"] = t;
    }
    return j;
}

std::string Report::dump() const
{
    return to_json().dump(2) + "\n";
}

int exit_code(Status s)
{
    switch (s) {
        case Status::Pass:
            return 0;
        case Status::Fail:
            return 2;
        case Status::Inconclusive:
            return 3;
    }
    return 3;
}

namespace
{

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

void write_row(std::ostream &os, const std::vector<std::string> &row)
{
    for (std::size_t k = 0; k < row.size(); ++k) {
        os << (k ? "," : "") << csv_field(row[k]);
    }
    os << '\n';
}

} // namespace

void write_curves(const Report &r, const std::string &dir)
{
    std::filesystem::create_directories(dir);
    for (const auto &c : r.curves) {
        const auto path = std::filesystem::path(dir) / c.file;
        std::ofstream os(path);
        if (!os) {
            throw ConfigError("cannot write curve file '" + path.string() + "'");
        }
        write_row(os, c.header);
        for (const auto &row : c.rows) {
            write_row(os, row);
        }
    }
}

Curve valuation_curve(const std::string &file, const NetContext &ctx, const std::vector<Real> &v)
{
    Curve c{file, {"eps_index", "eps", "valuation"}, {}};
    for (std::size_t i = 0; i < v.size(); ++i) {
        c.rows.push_back({std::to_string(i), ctx.grid.points[i].str(), v[i].str()});
    }
    return c;
}

} // namespace hps
