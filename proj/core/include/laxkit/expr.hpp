#pragma once

#include "laxkit/tensor.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace laxkit::expr {

/// Abstract syntax tree over decimal literals, identifiers, the constants
/// pi / e / i, unary minus, binary + - * / ^ (right-associative ^), and the
/// call set sin cos tan sinh cosh tanh sech exp log sqrt atan abs.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Tag { Number, Ident, Constant, Unary, Binary, Call };
    Tag tag;
    double number = 0.0;       // Number
    std::string name;          // Ident / Constant / Call / Binary-op / Unary-op
    std::vector<ExprPtr> args; // operands

    bool equals(const Expr& other) const;
};

struct ParseError : std::runtime_error {
    size_t offset;
    std::string expected;
    ParseError(size_t off, const std::string& what, const std::string& exp);
};

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/// Recursive-descent Pratt parser.  Precedence: ^ > unary minus > * / > + -.
ExprPtr parse(const std::string& text);

/// Canonical fully-parenthesized form; print(parse(s)) reparses to an AST
/// structurally identical to parse(s).
std::string print(const ExprPtr& e);

/// IEEE double-complex evaluation with principal branches; free identifiers
/// must be bound (typically x for fields, j for lattice sites).
cplx eval(const ExprPtr& e, const std::map<std::string, cplx>& bindings);

}  // namespace laxkit::expr
