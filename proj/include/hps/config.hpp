// Run configuration: grid, gauges, named series and points, check parameters.
// The file is JSON; unknown keys are rejected so that typos surface early.

#ifndef HPS_CONFIG_HPP
#define HPS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <hps/graf.hpp>

namespace hps
{

struct SeriesDef {
    std::string name;
    /// Exactly one of coeffs (expression in n, eps, rho, sigma), table (CSV
    /// path) or mollifier scale (the delta family b_eps mu^(n)(0) b^n / n!).
    std::optional<std::string> coeffs;
    std::optional<std::string> table;
    std::optional<std::string> delta_b;
    std::string center = "0";
};

struct CheckParams {
    long n_max = 64;
    long q_max = 8;
    long Q_max = 16;
    long R_max = 64;
    long N_max = 16;
    long P_max = 8;
    long n_lo = 16;
    long n_hi = 256;
    long k_max = 3;
    long margin_m = 6;
    long q_target = 64;
    long random_cases = 10;
    std::uint64_t seed = 1;
};

inline constexpr unsigned max_precision_bits = 1u << 16;

struct RunConfig {
    int version = 1;
    unsigned precision = default_precision_bits;
    /// Either a decade range or explicit points (decimal strings).
    std::pair<int, int> decades{1, 8};
    std::vector<std::string> points;
    std::size_t tail_start = 1;
    std::string rho = "eps";
    std::string sigma = "rho";
    std::vector<SeriesDef> series;
    std::vector<std::pair<std::string, std::string>> named_points;
    CheckParams checks;
    /// Directory relative paths (tables) are resolved against.
    std::string base_dir = ".";

    static RunConfig defaults();
    /// Throws ConfigError on malformed input or unresolved references.
    static RunConfig from_json(const json &j, std::string base_dir = ".");
    static RunConfig load(const std::string &path);

    /// Canonical form (defaults filled in), the input to hash().
    json to_json() const;
    /// FNV-1a 64 of the canonical dump, as 16 hex digits.
    std::string hash() const;
    void validate() const;

    EpsGrid grid() const;
    /// Builds the grid and gauges. Call inside a PrecisionScope of `precision`.
    ContextPtr context() const;

    const SeriesDef &series_def(const std::string &name) const;
    HpsSeries make_series(const std::string &name, const ContextPtr &ctx) const;
    /// A named point, or else the text parsed as a net expression.
    GenNum point(const std::string &name_or_expr, const NetContext &ctx) const;
};

std::string fnv1a64_hex(const std::string &bytes);

} // namespace hps

#endif
