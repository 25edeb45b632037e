// The acceptance suite: one check per acceptance criterion, run on a pool of
// worker threads and assembled in declaration order.

#ifndef HPS_SUITE_HPP
#define HPS_SUITE_HPP

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <hps/config.hpp>
#include <hps/report.hpp>

namespace hps
{

struct SuiteCase {
    int id;
    std::string name;
    std::function<CheckResult(const RunConfig &)> run;
};

const std::vector<SuiteCase> &suite_cases();

struct SuiteOptions {
    unsigned threads = 1;
    /// Case ids to run; empty means all.
    std::vector<int> only;
    bool timing = false;
};

/// Runs one case under the config's precision. Library errors become a Fail
/// with the error kind in the details.
CheckResult run_case(const SuiteCase &c, const RunConfig &cfg);

Report run_suite(const RunConfig &cfg, const SuiteOptions &opt = {});

/// A corpus family used by the perturbation, representative and ball checks.
struct CorpusFamily {
    std::string name;
    std::string coeffs; // empty for the delta family
    std::string center;
};

const std::vector<CorpusFamily> &corpus();
HpsSeries corpus_series(const CorpusFamily &f, const ContextPtr &ctx);

/// Deterministic random weakly moderate family (geometric rate times a
/// polynomial factor), as an expression in n and rho.
std::string random_family_expr(std::mt19937_64 &rng);

} // namespace hps

#endif
