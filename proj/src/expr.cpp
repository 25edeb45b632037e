#include <hps/expr.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>
#include <utility>

namespace hps
{

namespace
{

using Node = NetExpr::Node;
using NodePtr = NetExpr::NodePtr;
using Kind = NetExpr::Kind;
using Var = NetExpr::Var;
using Func = NetExpr::Func;

std::string join(const std::vector<std::string> &v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            out += ", ";
        }
        out += v[i];
    }
    return out;
}

struct FuncInfo {
    const char *name;
    Func func;
    std::size_t arity;
};

constexpr FuncInfo func_table[] = {
    {"log", Func::Log, 1},   {"exp", Func::Exp, 1},        {"sqrt", Func::Sqrt, 1},
    {"abs", Func::Abs, 1},   {"factorial", Func::Factorial, 1}, {"floor", Func::Floor, 1},
    {"min", Func::Min, 2},   {"max", Func::Max, 2},
};

struct VarInfo {
    const char *name;
    Var var;
};

constexpr VarInfo var_table[] = {
    {"eps", Var::Eps}, {"n", Var::N}, {"rho", Var::Rho}, {"sigma", Var::Sigma}, {"x", Var::X},
};

bool allowed(Var v, ExprContext ctx)
{
    switch (v) {
        case Var::Eps:
        case Var::Rho:
        case Var::Sigma:
            return true;
        case Var::N:
            return ctx != ExprContext::Net;
        case Var::X:
            return ctx == ExprContext::Function;
    }
    return false;
}

std::vector<std::string> allowed_names(ExprContext ctx)
{
    std::vector<std::string> out;
    for (const auto &v : var_table) {
        if (allowed(v.var, ctx)) {
            out.emplace_back(v.name);
        }
    }
    for (const auto &f : func_table) {
        out.emplace_back(std::string(f.name) + "(...)");
    }
    return out;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t offset;
};

class Parser
{
public:
    Parser(std::string_view src, ExprContext ctx) : src_(src), ctx_(ctx) { advance(); }

    NodePtr parse()
    {
        NodePtr e = expression(1);
        if (tok_.kind != Tok::End) {
            fail({"operator", "end of input"}, "unexpected '" + std::string(tok_.text) + "'");
        }
        return e;
    }

private:
    static int binary_precedence(Tok t)
    {
        switch (t) {
            case Tok::Plus:
            case Tok::Minus:
                return 1;
            case Tok::Star:
            case Tok::Slash:
                return 2;
            default:
                return 0;
        }
    }

    static Kind binary_kind(Tok t)
    {
        switch (t) {
            case Tok::Plus:
                return Kind::Add;
            case Tok::Minus:
                return Kind::Sub;
            case Tok::Star:
                return Kind::Mul;
            default:
                return Kind::Div;
        }
    }

    // Precedence climbing over the left-associative levels.
    NodePtr expression(int min_prec)
    {
        NodePtr lhs = unary();
        for (;;) {
            int prec = binary_precedence(tok_.kind);
            if (prec == 0 || prec < min_prec) {
                return lhs;
            }
            Kind op = binary_kind(tok_.kind);
            advance();
            NodePtr rhs = expression(prec + 1);
            auto n = std::make_shared<Node>();
            n->kind = op;
            n->args = {lhs, rhs};
            lhs = n;
        }
    }

    NodePtr unary()
    {
        if (tok_.kind == Tok::Minus) {
            advance();
            auto n = std::make_shared<Node>();
            n->kind = Kind::Negate;
            n->args = {unary()};
            return n;
        }
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (tok_.kind == Tok::Caret) {
            advance();
            auto n = std::make_shared<Node>();
            n->kind = Kind::Pow;
            n->args = {base, unary()};
            return n;
        }
        return base;
    }

    NodePtr primary()
    {
        const Token t = tok_;
        switch (t.kind) {
            case Tok::Number: {
                advance();
                auto n = std::make_shared<Node>();
                n->kind = Kind::Number;
                n->literal = std::string(t.text);
                long v = 0;
                auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (ec == std::errc() && ptr == t.text.data() + t.text.size()) {
                    n->integer = v;
                }
                return n;
            }
            case Tok::LParen: {
                advance();
                NodePtr inner = expression(1);
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident:
                return identifier();
            default:
                fail({"number", "name", "'('", "'-'"},
                     t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + std::string(t.text) + "'");
        }
    }

    NodePtr identifier()
    {
        const Token t = tok_;
        advance();
        if (tok_.kind == Tok::LParen) {
            const FuncInfo *info = nullptr;
            for (const auto &f : func_table) {
                if (t.text == f.name) {
                    info = &f;
                }
            }
            if (!info) {
                fail_at(t.offset, allowed_names(ctx_), "unknown function '" + std::string(t.text) + "'");
            }
            advance();
            auto n = std::make_shared<Node>();
            n->kind = Kind::Call;
            n->func = info->func;
            n->args.push_back(expression(1));
            while (tok_.kind == Tok::Comma) {
                advance();
                n->args.push_back(expression(1));
            }
            expect(Tok::RParen, "')'");
            if (n->args.size() != info->arity) {
                fail_at(t.offset, {std::to_string(info->arity) + " argument(s)"},
                        std::string(info->name) + " takes " + std::to_string(info->arity) + " argument(s), got "
                            + std::to_string(n->args.size()));
            }
            return n;
        }
        for (const auto &v : var_table) {
            if (t.text == v.name) {
                if (!allowed(v.var, ctx_)) {
                    fail_at(t.offset, allowed_names(ctx_),
                            "variable '" + std::string(t.text) + "' is not available in this context");
                }
                auto n = std::make_shared<Node>();
                n->kind = Kind::Variable;
                n->var = v.var;
                return n;
            }
        }
        fail_at(t.offset, allowed_names(ctx_), "unknown name '" + std::string(t.text) + "'");
    }

    void expect(Tok k, const char *what)
    {
        if (tok_.kind != k) {
            fail({what}, tok_.kind == Tok::End ? "unexpected end of input"
                                               : "unexpected '" + std::string(tok_.text) + "'");
        }
        advance();
    }

    [[noreturn]] void fail(std::vector<std::string> expected, const std::string &msg)
    {
        fail_at(tok_.offset, std::move(expected), msg);
    }

    [[noreturn]] void fail_at(std::size_t offset, std::vector<std::string> expected, const std::string &msg)
    {
        throw ParseError(offset, std::move(expected), msg);
    }

    void advance()
    {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n'
                                      || src_[pos_] == '\r')) {
            ++pos_;
        }
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::End, {}, src_.size()};
            return;
        }
        const char c = src_[pos_];
        auto single = [&](Tok k) {
            ++pos_;
            tok_ = {k, src_.substr(start, 1), start};
        };
        switch (c) {
            case '+':
                return single(Tok::Plus);
            case '-':
                return single(Tok::Minus);
            case '*':
                return single(Tok::Star);
            case '/':
                return single(Tok::Slash);
            case '^':
                return single(Tok::Caret);
            case '(':
                return single(Tok::LParen);
            case ')':
                return single(Tok::RParen);
            case ',':
                return single(Tok::Comma);
            default:
                break;
        }
        auto is_digit = [](char ch) { return ch >= '0' && ch <= '9'; };
        if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
            while (pos_ < src_.size() && is_digit(src_[pos_])) {
                ++pos_;
            }
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                while (pos_ < src_.size() && is_digit(src_[pos_])) {
                    ++pos_;
                }
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t save = pos_;
                ++pos_;
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
                    ++pos_;
                }
                if (pos_ < src_.size() && is_digit(src_[pos_])) {
                    while (pos_ < src_.size() && is_digit(src_[pos_])) {
                        ++pos_;
                    }
                } else {
                    pos_ = save;
                }
            }
            tok_ = {Tok::Number, src_.substr(start, pos_ - start), start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size()
                   && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            tok_ = {Tok::Ident, src_.substr(start, pos_ - start), start};
            return;
        }
        throw ParseError(start, {"number", "name", "operator"},
                         "unexpected character (byte 0x" + [&] {
                             const char *hex = "0123456789abcdef";
                             auto b = static_cast<unsigned char>(c);
                             return std::string{hex[b >> 4], hex[b & 15]};
                         }() + ")");
    }

    std::string_view src_;
    ExprContext ctx_;
    std::size_t pos_ = 0;
    Token tok_{Tok::End, {}, 0};
};

// Canonical printer precedences.
int node_precedence(const Node &n)
{
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub:
            return 1;
        case Kind::Mul:
        case Kind::Div:
            return 2;
        case Kind::Negate:
            return 3;
        case Kind::Pow:
            return 4;
        default:
            return 5;
    }
}

void print(const Node &n, std::string &out);

void print_wrapped(const Node &n, bool wrap, std::string &out)
{
    if (wrap) {
        out += '(';
    }
    print(n, out);
    if (wrap) {
        out += ')';
    }
}

void print(const Node &n, std::string &out)
{
    switch (n.kind) {
        case Kind::Number:
            out += n.literal;
            return;
        case Kind::Variable:
            out += to_string(n.var);
            return;
        case Kind::Negate:
            out += '-';
            print_wrapped(*n.args[0], node_precedence(*n.args[0]) < 3, out);
            return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            const int p = node_precedence(n);
            print_wrapped(*n.args[0], node_precedence(*n.args[0]) < p, out);
            out += n.kind == Kind::Add ? " + " : n.kind == Kind::Sub ? " - " : n.kind == Kind::Mul ? "*" : "/";
            print_wrapped(*n.args[1], node_precedence(*n.args[1]) <= p, out);
            return;
        }
        case Kind::Pow:
            print_wrapped(*n.args[0], node_precedence(*n.args[0]) <= 4, out);
            out += '^';
            print_wrapped(*n.args[1], node_precedence(*n.args[1]) < 3, out);
            return;
        case Kind::Call:
            out += to_string(n.func);
            out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) {
                    out += ", ";
                }
                print(*n.args[i], out);
            }
            out += ')';
            return;
    }
}

bool equal_nodes(const Node &a, const Node &b)
{
    if (a.kind != b.kind || a.args.size() != b.args.size()) {
        return false;
    }
    switch (a.kind) {
        case Kind::Number:
            if (a.literal != b.literal) {
                return false;
            }
            break;
        case Kind::Variable:
            if (a.var != b.var) {
                return false;
            }
            break;
        case Kind::Call:
            if (a.func != b.func) {
                return false;
            }
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!equal_nodes(*a.args[i], *b.args[i])) {
            return false;
        }
    }
    return true;
}

bool uses_var(const Node &n, Var v)
{
    if (n.kind == Kind::Variable && n.var == v) {
        return true;
    }
    return std::any_of(n.args.begin(), n.args.end(), [v](const NodePtr &c) { return uses_var(*c, v); });
}

std::string node_text(const Node &n)
{
    std::string s;
    print(n, s);
    return s;
}

// Factorials at the working precision; entries are exact while they fit the
// mantissa and correctly rounded products afterwards.
const Real &cached_factorial(unsigned long k)
{
    struct Cache {
        unsigned prec = 0;
        std::vector<Real> values;
    };
    thread_local Cache cache;
    const unsigned prec = working_precision();
    if (cache.prec != prec) {
        cache.prec = prec;
        cache.values.clear();
    }
    if (cache.values.empty()) {
        cache.values.emplace_back(1);
    }
    constexpr unsigned long exact_limit = 1024;
    while (cache.values.size() <= k) {
        const unsigned long j = cache.values.size();
        if (j <= exact_limit) {
            cache.values.push_back(Real::factorial(j));
        } else {
            cache.values.push_back(cache.values.back() * Real(j));
        }
    }
    return cache.values[k];
}

constexpr unsigned long factorial_cache_limit = 1ul << 14;

Real factorial_value(const Real &k, const Node &where)
{
    if (!k.is_finite() || !k.is_integer() || k.sign() < 0) {
        throw EvalError("factorial of a non-integer or negative value " + k.str(20), node_text(where));
    }
    if (k > Real(static_cast<unsigned long>(factorial_cache_limit))) {
        return exp(lgamma(k + Real(1)));
    }
    return cached_factorial(static_cast<unsigned long>(k.to_long()));
}

const Real &variable_value(const Node &n, const Env &env)
{
    switch (n.var) {
        case Var::Eps:
            return env.eps;
        case Var::Rho:
            return env.rho;
        case Var::Sigma:
            if (!env.sigma) {
                throw EvalError("unbound variable sigma", "sigma");
            }
            return *env.sigma;
        case Var::N:
            if (!env.n) {
                throw EvalError("unbound variable n", "n");
            }
            return *env.n;
        case Var::X:
            if (!env.x) {
                throw EvalError("unbound variable x", "x");
            }
            return *env.x;
    }
    return env.eps;
}

Real number_value(const Node &n)
{
    if (n.integer) {
        return Real(*n.integer);
    }
    return Real::parse(n.literal);
}

Real eval_node(const Node &n, const Env &env)
{
    switch (n.kind) {
        case Kind::Number:
            return number_value(n);
        case Kind::Variable:
            return variable_value(n, env);
        case Kind::Negate:
            return -eval_node(*n.args[0], env);
        case Kind::Add:
            return eval_node(*n.args[0], env) + eval_node(*n.args[1], env);
        case Kind::Sub:
            return eval_node(*n.args[0], env) - eval_node(*n.args[1], env);
        case Kind::Mul:
            return eval_node(*n.args[0], env) * eval_node(*n.args[1], env);
        case Kind::Div: {
            Real a = eval_node(*n.args[0], env);
            Real b = eval_node(*n.args[1], env);
            if (b.is_zero()) {
                throw EvalError("division by zero", node_text(n));
            }
            return a / b;
        }
        case Kind::Pow: {
            Real a = eval_node(*n.args[0], env);
            Real b = eval_node(*n.args[1], env);
            if (a.is_zero() && b.sign() < 0) {
                throw EvalError("division by zero", node_text(n));
            }
            if (a.sign() < 0 && !b.is_integer()) {
                throw EvalError("negative base with non-integer exponent", node_text(n));
            }
            return pow(a, b);
        }
        case Kind::Call:
            break;
    }
    switch (n.func) {
        case Func::Log: {
            Real a = eval_node(*n.args[0], env);
            if (a.sign() <= 0) {
                throw EvalError("log of non-positive value", node_text(n));
            }
            return log(a);
        }
        case Func::Exp:
            return exp(eval_node(*n.args[0], env));
        case Func::Sqrt: {
            Real a = eval_node(*n.args[0], env);
            if (a.sign() < 0) {
                throw EvalError("sqrt of negative value", node_text(n));
            }
            return sqrt(a);
        }
        case Func::Abs:
            return abs(eval_node(*n.args[0], env));
        case Func::Factorial:
            return factorial_value(eval_node(*n.args[0], env), n);
        case Func::Floor:
            return floor(eval_node(*n.args[0], env));
        case Func::Min:
            return min(eval_node(*n.args[0], env), eval_node(*n.args[1], env));
        case Func::Max:
            return max(eval_node(*n.args[0], env), eval_node(*n.args[1], env));
    }
    return Real();
}

LogAbs log_of(const Real &v)
{
    if (v.is_zero()) {
        return {Real::infinity(-1), 0};
    }
    return {log(abs(v)), v.sign()};
}

// Ordering of signed log-magnitudes: returns <0, 0, >0.
int compare(const LogAbs &a, const LogAbs &b)
{
    if (a.sign != b.sign) {
        return a.sign < b.sign ? -1 : 1;
    }
    if (a.sign == 0 || a.log_abs == b.log_abs) {
        return 0;
    }
    const bool less = a.log_abs < b.log_abs;
    return (a.sign > 0) == less ? -1 : 1;
}

LogAbs add_logs(const LogAbs &a, LogAbs b, bool subtract)
{
    if (subtract) {
        b.sign = -b.sign;
    }
    if (a.sign == 0) {
        return b;
    }
    if (b.sign == 0) {
        return a;
    }
    const Real top = max(a.log_abs, b.log_abs);
    Real s = Real(a.sign) * exp(a.log_abs - top) + Real(b.sign) * exp(b.log_abs - top);
    if (s.is_zero()) {
        return {Real::infinity(-1), 0};
    }
    return {top + log(abs(s)), s.sign()};
}

LogAbs eval_log_node(const Node &n, const Env &env)
{
    switch (n.kind) {
        case Kind::Number:
            return log_of(number_value(n));
        case Kind::Variable:
            if (n.var == Var::Rho) {
                return {env.log_rho, 1};
            }
            if (n.var == Var::Sigma && env.log_sigma) {
                return {*env.log_sigma, 1};
            }
            if (n.var == Var::N && env.log_n) {
                return {*env.log_n, env.log_n->is_inf() && env.log_n->sign() < 0 ? 0 : 1};
            }
            return log_of(variable_value(n, env));
        case Kind::Negate: {
            LogAbs a = eval_log_node(*n.args[0], env);
            a.sign = -a.sign;
            return a;
        }
        case Kind::Add:
        case Kind::Sub:
            return add_logs(eval_log_node(*n.args[0], env), eval_log_node(*n.args[1], env), n.kind == Kind::Sub);
        case Kind::Mul: {
            LogAbs a = eval_log_node(*n.args[0], env);
            LogAbs b = eval_log_node(*n.args[1], env);
            if (a.sign == 0 || b.sign == 0) {
                return {Real::infinity(-1), 0};
            }
            return {a.log_abs + b.log_abs, a.sign * b.sign};
        }
        case Kind::Div: {
            LogAbs a = eval_log_node(*n.args[0], env);
            LogAbs b = eval_log_node(*n.args[1], env);
            if (b.sign == 0) {
                throw EvalError("division by zero", node_text(n));
            }
            if (a.sign == 0) {
                return a;
            }
            return {a.log_abs - b.log_abs, a.sign * b.sign};
        }
        case Kind::Pow: {
            LogAbs a = eval_log_node(*n.args[0], env);
            Real e = eval_log_node(*n.args[1], env).value();
            if (a.sign == 0) {
                if (e.sign() < 0) {
                    throw EvalError("division by zero", node_text(n));
                }
                if (e.is_zero()) {
                    return {Real(0), 1};
                }
                return a;
            }
            int sign = 1;
            if (a.sign < 0) {
                if (!e.is_integer()) {
                    throw EvalError("negative base with non-integer exponent", node_text(n));
                }
                sign = (e / Real(2)).is_integer() ? 1 : -1;
            }
            if (e.is_zero()) {
                return {Real(0), 1};
            }
            return {e * a.log_abs, sign};
        }
        case Kind::Call:
            break;
    }
    switch (n.func) {
        case Func::Log: {
            LogAbs a = eval_log_node(*n.args[0], env);
            if (a.sign <= 0) {
                throw EvalError("log of non-positive value", node_text(n));
            }
            return log_of(a.log_abs);
        }
        case Func::Exp:
            return {eval_log_node(*n.args[0], env).value(), 1};
        case Func::Sqrt: {
            LogAbs a = eval_log_node(*n.args[0], env);
            if (a.sign < 0) {
                throw EvalError("sqrt of negative value", node_text(n));
            }
            if (a.sign == 0) {
                return a;
            }
            return {a.log_abs / Real(2), 1};
        }
        case Func::Abs: {
            LogAbs a = eval_log_node(*n.args[0], env);
            a.sign = a.sign == 0 ? 0 : 1;
            return a;
        }
        case Func::Factorial: {
            Real k = eval_log_node(*n.args[0], env).value();
            if (!k.is_finite() || !k.is_integer() || k.sign() < 0) {
                throw EvalError("factorial of a non-integer or negative value", node_text(n));
            }
            return {lgamma(k + Real(1)), 1};
        }
        case Func::Floor: {
            LogAbs a = eval_log_node(*n.args[0], env);
            // Beyond 2^prec every representable value is already an integer.
            const Real big = Real(static_cast<long>(working_precision() + 2)) * log(Real(2));
            if (a.sign == 0 || a.log_abs > big) {
                return a;
            }
            return log_of(floor(a.value()));
        }
        case Func::Min:
        case Func::Max: {
            LogAbs a = eval_log_node(*n.args[0], env);
            LogAbs b = eval_log_node(*n.args[1], env);
            const bool a_less = compare(a, b) < 0;
            return (n.func == Func::Min) == a_less ? a : b;
        }
    }
    return {};
}

} // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string &msg)
    : Error("parse", "parse error at offset " + std::to_string(offset) + ": " + msg
                         + (expected.empty() ? std::string() : " (expected " + join(expected) + ")")),
      offset_(offset), expected_(std::move(expected))
{
}

Real LogAbs::value() const
{
    if (sign == 0) {
        return Real(0);
    }
    Real v = exp(log_abs);
    return sign < 0 ? -v : v;
}

std::string to_string(NetExpr::Func f)
{
    for (const auto &info : func_table) {
        if (info.func == f) {
            return info.name;
        }
    }
    return "?";
}

std::string to_string(NetExpr::Var v)
{
    for (const auto &info : var_table) {
        if (info.var == v) {
            return info.name;
        }
    }
    return "?";
}

NetExpr NetExpr::parse(std::string_view text, ExprContext ctx)
{
    Parser p(text, ctx);
    return NetExpr(p.parse());
}

NetExpr NetExpr::number(const std::string &literal)
{
    NetExpr parsed = parse(literal, ExprContext::Net);
    if (parsed.root().kind != Kind::Number) {
        throw std::invalid_argument("not a numeric literal: " + literal);
    }
    return parsed;
}

NetExpr NetExpr::variable(Var v)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->var = v;
    return NetExpr(n);
}

NetExpr NetExpr::negate(const NetExpr &e)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Negate;
    n->args = {e.root_};
    return NetExpr(n);
}

NetExpr NetExpr::binary(Kind op, const NetExpr &a, const NetExpr &b)
{
    if (op == Kind::Number || op == Kind::Variable || op == Kind::Negate || op == Kind::Call) {
        throw std::invalid_argument("not a binary operator");
    }
    auto n = std::make_shared<Node>();
    n->kind = op;
    n->args = {a.root_, b.root_};
    return NetExpr(n);
}

NetExpr NetExpr::call(Func f, const std::vector<NetExpr> &args)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->func = f;
    for (const auto &a : args) {
        n->args.push_back(a.root_);
    }
    const std::size_t arity = (f == Func::Min || f == Func::Max) ? 2 : 1;
    if (args.size() != arity) {
        throw std::invalid_argument("wrong arity for " + to_string(f));
    }
    return NetExpr(n);
}

std::string NetExpr::str() const
{
    return node_text(*root_);
}

bool NetExpr::uses(Var v) const
{
    return uses_var(*root_, v);
}

bool operator==(const NetExpr &a, const NetExpr &b)
{
    return equal_nodes(*a.root_, *b.root_);
}

Real eval(const NetExpr &e, const Env &env)
{
    return eval_node(e.root(), env);
}

LogAbs eval_log(const NetExpr &e, const Env &env)
{
    return eval_log_node(e.root(), env);
}

} // namespace hps
