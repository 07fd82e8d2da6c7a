////////////////////////////////////////////////////////////////////////////////
// expr.hpp
//
// A small expression language for chart coordinate functions of (u, v).
// Grammar (usual precedence, ^ binds tightest, then unary minus, * /, + -):
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | power
//   power   := atom ('^' integer)?
//   atom    := number | identifier | identifier '(' expr ')' | '(' expr ')'
//
// Identifiers are the variables u, v (and s for glue-curve parameters), the
// builtin constant pi, the functions sqrt, sin, cos, or named parameters
// resolved from a table at evaluation time.
////////////////////////////////////////////////////////////////////////////////
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gm4/jet.hpp"

namespace gm4 {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& what, int line_, int col_)
        : std::runtime_error(what + " at line " + std::to_string(line_) + ", column " +
                             std::to_string(col_)),
          line(line_), column(col_) {}
};
struct UnknownIdentifier : std::runtime_error {
    explicit UnknownIdentifier(const std::string& name)
        : std::runtime_error("unknown identifier '" + name + "'") {}
};

using ParamTable = std::map<std::string, double>;

class Expr {
public:
    enum class Kind { Number, VarU, VarV, Param, Neg, Add, Sub, Mul, Div, Pow, Sqrt, Sin, Cos };

    Kind kind = Kind::Number;
    double number = 0.0;
    std::string name;     // Param
    int exponent = 0;     // Pow
    std::shared_ptr<const Expr> a, b;

    double eval(double u, double v, const ParamTable& params) const;
    Jet2 eval_jet(double u0, double v0, int order, const ParamTable& params) const;

    // Canonical fully parenthesized form; parse(print(e)) reproduces e.
    std::string print() const;

    bool structurally_equal(const Expr& other) const;

    // Names of all parameters referenced by the expression.
    void collect_params(std::vector<std::string>& out) const;
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr parse_expr(const std::string& src, int line_offset = 1);

}  // namespace gm4
