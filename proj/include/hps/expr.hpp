// A small, total expression language for nets x_eps, coefficient families
// a_{n,eps} and derivative families f^(n)(x).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Variables: eps, rho, sigma; n (coefficient and function context); x
// (function context). Functions: log exp sqrt abs factorial floor min max.

#ifndef HPS_EXPR_HPP
#define HPS_EXPR_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <hps/errors.hpp>
#include <hps/real.hpp>

namespace hps
{

enum class ExprContext {
    Net,         ///< eps, rho, sigma
    Coefficient, ///< + n
    Function,    ///< + n, x
};

class ParseError : public Error
{
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string &msg);
    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string> &expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Evaluation environment. Gauge values are passed together with their
/// logarithms so that log-scale evaluation stays exact when a gauge value
/// underflows (e.g. sigma = exp(-exp(1/rho))).
struct Env {
    Real eps;
    Real rho;
    Real log_rho;
    std::optional<Real> sigma;
    std::optional<Real> log_sigma;
    std::optional<Real> n;
    std::optional<Real> x;
    /// log n, for indices too large to hold as a value (log-scale evaluation only).
    std::optional<Real> log_n;
};

/// log|v| together with the sign of v (sign 0 means v == 0, log_abs = -inf).
struct LogAbs {
    Real log_abs;
    int sign = 0;

    Real value() const;
};

class NetExpr
{
public:
    enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
    enum class Var { Eps, N, Rho, Sigma, X };
    enum class Func { Log, Exp, Sqrt, Abs, Factorial, Floor, Min, Max };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    struct Node {
        Kind kind;
        std::string literal;         // Number
        std::optional<long> integer; // Number, when the literal is an integer that fits
        Var var = Var::Eps;          // Variable
        Func func = Func::Log;       // Call
        std::vector<NodePtr> args;   // operands / call arguments
    };

    static NetExpr parse(std::string_view text, ExprContext ctx = ExprContext::Coefficient);

    static NetExpr number(const std::string &literal);
    static NetExpr variable(Var v);
    static NetExpr negate(const NetExpr &e);
    static NetExpr binary(Kind op, const NetExpr &a, const NetExpr &b);
    static NetExpr call(Func f, const std::vector<NetExpr> &args);

    /// Canonical text: minimal parentheses, fixed spacing.
    std::string str() const;
    bool uses(Var v) const;
    const Node &root() const { return *root_; }
    const NodePtr &root_ptr() const { return root_; }

    friend bool operator==(const NetExpr &a, const NetExpr &b);

private:
    explicit NetExpr(NodePtr root) : root_(std::move(root)) {}
    NodePtr root_;
};

std::string to_string(NetExpr::Func f);
std::string to_string(NetExpr::Var v);

/// Evaluates at the working precision. Throws EvalError on domain errors.
Real eval(const NetExpr &e, const Env &env);

/// Log-scale evaluation; survives magnitudes outside the MPFR exponent range
/// of intermediate values (exp of large arguments, huge n).
LogAbs eval_log(const NetExpr &e, const Env &env);

} // namespace hps

#endif
