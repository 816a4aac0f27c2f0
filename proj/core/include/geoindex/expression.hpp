#pragma once

#include <memory>
#include <string>

#include "geoindex/errors.hpp"

namespace geoindex::expr {

namespace detail {
struct Node;
}

// A compiled scalar expression in up to two variables.  Grammar:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-')* power
//   power  := atom ('^' unary)?            -- right-associative
//   atom   := number | 'x' | 'y' | 'pi'
//           | ('sin' | 'cos' | 'exp' | 'sqrt') '(' expr ')'
//           | '(' expr ')'
//
// '-x^2' parses as '-(x^2)'.  Evaluation follows IEEE semantics: division by
// zero and sqrt of a negative produce inf/NaN, which downstream consumers
// treat as degeneracy of whatever object the expression defines.
class Expression {
public:
    Expression() = default;

    double operator()(double x, double y = 0.0) const;
    bool uses_x() const;
    bool uses_y() const;
    const std::string& source() const { return source_; }
    explicit operator bool() const { return static_cast<bool>(root_); }

private:
    friend Expression compile(const std::string&);
    std::shared_ptr<const detail::Node> root_;
    std::string source_;
};

// Parse and compile; throws ConfigError with position information on any
// syntax problem.
Expression compile(const std::string& source);

// Compile and evaluate an expression that must not mention x or y.
double evaluate_constant(const std::string& source);

// Lengths accept the shorthand '<number>pi' (e.g. '2.5pi', 'pi') in addition
// to any constant expression.  The result must be finite and positive.
double parse_length(const std::string& source);

}  // namespace geoindex::expr
