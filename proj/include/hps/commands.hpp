// Command dispatch behind the hpsc tool: one function per subcommand, each
// producing a Report.

#ifndef HPS_COMMANDS_HPP
#define HPS_COMMANDS_HPP

#include <optional>
#include <string>
#include <vector>

#include <hps/suite.hpp>

namespace hps
{

struct CommandArgs {
    std::string command;
    /// algebra operation or example name.
    std::string sub;
    std::string series;   // --series: a named series from the config
    std::string series_b; // --series-b
    std::string net;      // --net: a net expression (moderate, negligible)
    std::string x;        // --x: point name or net expression
    std::string x_bar;    // --x-bar (shortcut) / new center (recenter)
    std::string N;        // --N: hypernatural expression (sum); default 1/sigma
    std::string expect;   // --expect: compare a sum or limit against this net
    std::string function; // --function: derivative-net expression for graf
    std::vector<std::string> samples; // --sample: graf sample points
    std::string s_expr = "1";         // --s: graf sample radius
    bool curves = false;
    SuiteOptions suite;
};

/// Throws ConfigError on usage errors (unknown command, missing or unresolved
/// names). Library errors raised while checking end up in the report.
Report run_command(const RunConfig &cfg, const CommandArgs &args);

const std::vector<std::string> &command_names();
const std::vector<std::string> &algebra_ops();
const std::vector<std::string> &example_names();

} // namespace hps

#endif
