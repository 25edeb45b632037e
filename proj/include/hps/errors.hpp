#ifndef HPS_ERRORS_HPP
#define HPS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace hps
{

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used in reports and CLI diagnostics.
class Error : public std::runtime_error
{
public:
    Error(std::string kind, const std::string &msg) : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string &kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class ConfigError : public Error
{
public:
    explicit ConfigError(const std::string &msg) : Error("config", msg) {}

protected:
    ConfigError(std::string kind, const std::string &msg) : Error(std::move(kind), msg) {}
};

/// A series or point name used on the command line is not defined.
class UnresolvedName : public ConfigError
{
public:
    explicit UnresolvedName(const std::string &msg) : ConfigError("unresolved-name", msg) {}
};

class PrecisionOverflow : public ConfigError
{
public:
    explicit PrecisionOverflow(const std::string &msg) : ConfigError("precision-overflow", msg) {}
};

class UnknownCommand : public ConfigError
{
public:
    explicit UnknownCommand(const std::string &msg) : ConfigError("unknown-command", msg) {}
};

class InvalidGauge : public Error
{
public:
    explicit InvalidGauge(const std::string &msg) : Error("invalid-gauge", msg) {}
};

class EvalError : public Error
{
public:
    EvalError(const std::string &msg, std::string subexpr)
        : Error("domain", msg + " in '" + subexpr + "'"), subexpr_(std::move(subexpr))
    {
    }
    const std::string &subexpression() const noexcept { return subexpr_; }

private:
    std::string subexpr_;
};

class NotHypernatural : public Error
{
public:
    explicit NotHypernatural(const std::string &msg) : Error("not-hypernatural", msg) {}
};

/// A computation exceeded its term/precision budget at cell (n, grid index).
class PrecisionError : public Error
{
public:
    PrecisionError(const std::string &msg, std::size_t n, std::size_t grid_index)
        : Error("precision", msg + " at (n=" + std::to_string(n) + ", eps#" + std::to_string(grid_index) + ")"),
          n_(n), index_(grid_index)
    {
    }
    std::size_t n() const noexcept { return n_; }
    std::size_t grid_index() const noexcept { return index_; }

private:
    std::size_t n_;
    std::size_t index_;
};

class DivergentSeries : public Error
{
public:
    DivergentSeries(const std::string &msg, std::size_t grid_index)
        : Error("divergent-series", msg + " (eps#" + std::to_string(grid_index) + ")"), index_(grid_index)
    {
    }
    std::size_t grid_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Table-backed coefficients queried beyond their depth.
class CoefficientRange : public Error
{
public:
    CoefficientRange(std::size_t n, std::size_t n_max)
        : Error("coefficient-range",
                "coefficient n=" + std::to_string(n) + " beyond table depth " + std::to_string(n_max)),
          n_(n)
    {
    }
    std::size_t n() const noexcept { return n_; }

private:
    std::size_t n_;
};

class NotInvertible : public Error
{
public:
    explicit NotInvertible(const std::string &msg) : Error("not-invertible", msg) {}
};

class InsufficientTruncation : public Error
{
public:
    explicit InsufficientTruncation(const std::string &msg) : Error("insufficient-m-max", msg) {}
};

class MissingWitness : public Error
{
public:
    explicit MissingWitness(const std::string &msg) : Error("missing-witness", msg) {}
};

class InvalidMollifier : public Error
{
public:
    explicit InvalidMollifier(const std::string &msg) : Error("invalid-mollifier", msg) {}
};

class OutOfCheckableRange : public Error
{
public:
    explicit OutOfCheckableRange(const std::string &msg) : Error("out-of-checkable-range", msg) {}
};

enum class Precondition { ConvergenceAtBound, EventualBound, StrictInequality, GaugeOrder };

class PreconditionError : public Error
{
public:
    PreconditionError(Precondition which, const std::string &msg) : Error(tag(which), msg), which_(which) {}
    Precondition which() const noexcept { return which_; }

private:
    static std::string tag(Precondition p)
    {
        switch (p) {
            case Precondition::ConvergenceAtBound:
                return "precondition-convergence";
            case Precondition::EventualBound:
                return "precondition-eventual-bound";
            case Precondition::StrictInequality:
                return "precondition-strict-inequality";
            case Precondition::GaugeOrder:
                return "precondition-gauge-order";
        }
        return "precondition";
    }
    Precondition which_;
};

} // namespace hps

#endif
