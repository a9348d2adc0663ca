#pragma once

// Small arithmetic language for Hamilton-Volterra functions, form components
// and sections:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          right associative
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
//
// Functions: sin cos exp log sqrt (one argument each).

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace multisym::cli {

/// Syntax, unknown identifier and arity errors; `offset` is the byte offset into the source text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// log of a nonpositive value, sqrt of a negative value, division by zero and similar.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Op { number, variable, negate, add, subtract, multiply, divide, power, call };
enum class Function { sin, cos, exp, log, sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::number;
    double value = 0.0;       ///< number
    std::string name;         ///< variable
    Function fn = Function::sin;
    NodePtr lhs;              ///< unary operand, call argument, or left operand
    NodePtr rhs;
};

bool operator==(const Node& a, const Node& b);

class Expression {
public:
    Expression() = default;
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    const NodePtr& root() const { return root_; }
    bool empty() const { return !root_; }

    /// Names of the variables that occur, sorted and unique.
    std::vector<std::string> variables() const;

    friend bool operator==(const Expression& a, const Expression& b);

private:
    NodePtr root_;
};

/// Parses `text`; when `allowed` is non-empty every variable must be one of its names.
Expression parse_expression(const std::string& text, std::span<const std::string> allowed = {});

/// Minimal-parenthesis text form; parse(print(e)) == e.
std::string print(const Expression& e);

/// Exact derivative with respect to a variable, with constant folding.
Expression differentiate(const Expression& e, const std::string& variable);

Expression constant(double value);
Expression variable(const std::string& name);
Expression unary(Op op, const Expression& operand);
Expression binary(Op op, const Expression& lhs, const Expression& rhs);
Expression call(Function fn, const Expression& argument);

const char* function_name(Function fn);

/// An expression with its variables resolved to slots of an input vector.
class CompiledExpression {
public:
    CompiledExpression() = default;
    /// Throws ParseError (offset 0) if a variable is not in `slots`.
    CompiledExpression(const Expression& e, std::span<const std::string> slots);

    /// Throws DomainError when the value is not finite or an operation leaves its domain.
    double operator()(std::span<const double> values) const;

    const Expression& expression() const { return expr_; }

private:
    struct Instr {
        Op op;
        Function fn;
        double value;
        int slot;
    };
    static void emit(const Node& n, std::span<const std::string> slots, std::vector<Instr>& out);

    Expression expr_;
    std::vector<Instr> code_;  ///< postfix program
};

}  // namespace multisym::cli
