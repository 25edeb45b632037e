// Machine-readable reports and CSV curve files.

#ifndef HPS_REPORT_HPP
#define HPS_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include <hps/nets.hpp>

namespace hps
{

inline constexpr const char *tool_name = "hpsc";
inline constexpr const char *tool_version = "1.0.0";
inline constexpr int report_schema_version = 1;

struct CheckResult {
    std::string name;
    std::string command;
    Status status = Status::Inconclusive;
    json details = json::object();

    json to_json() const;
};

/// A CSV file to be written next to the report: a header row and decimal
/// strings at full precision.
struct Curve {
    std::string file; // base name, no directory
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    std::string command;
    std::string config_hash;
    unsigned precision = 0;
    std::vector<CheckResult> results;
    std::vector<Curve> curves;
    /// Wall-clock seconds per result; serialized only on request so that the
    /// default output stays byte-identical across runs.
    std::optional<std::vector<double>> timing;

    /// Fail dominates Inconclusive dominates Pass; an empty report is
    /// Inconclusive.
    Status overall() const;
    json to_json() const;
    std::string dump() const;
};

/// 0 on Pass, 2 on Fail, 3 on Inconclusive.
int exit_code(Status s);
inline constexpr int exit_usage = 1;

/// Writes every curve into `dir` (created if missing).
void write_curves(const Report &r, const std::string &dir);

/// Per-eps valuation curve of a net.
Curve valuation_curve(const std::string &file, const NetContext &ctx, const std::vector<Real> &v);

} // namespace hps

#endif
