#pragma once

#include <memory>
#include <string>
#include <vector>

#include "psalg/phase_expr.hpp"

namespace psalg {

// Expression syntax tree. Precedence ^ > unary minus > * / > + -, all
// left-associative; ^ exponents must be non-negative integer literals.
struct Ast {
    enum class Kind { Number, Constant, Variable, Neg, Binary };

    Kind kind = Kind::Number;
    Rational number;          // Kind::Number
    char constant = 0;        // Kind::Constant: 'i', 'h' (hbar), 's', 'u'
    Var variable = Var::x(1); // Kind::Variable
    char op = 0;              // Kind::Binary: + - * / ^
    std::vector<Ast> children;
    int line = 1;
    int column = 1;
};

// Grammar only; identifier indices are checked against a context when the
// tree is lowered.
Ast parseAst(const std::string& text);

// Lowers a tree into the ring: u expands through its definition, division
// goes through exact fraction division.
PhaseExpr lowerAst(const Ast& ast, const Context& ctx);

inline PhaseExpr parse(const std::string& text, const Context& ctx) {
    return lowerAst(parseAst(text), ctx);
}

} // namespace psalg
