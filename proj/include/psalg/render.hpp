#pragma once

#include <string>

#include "psalg/phase_expr.hpp"

namespace psalg {

// Canonical text form: terms in the fixed monomial order, exact rationals as
// a/b, imaginary unit as i. parse(renderText(f)) == f whenever f has no
// momentum-dependent denominator (and even then the text is exact).
std::string renderText(const PhaseExpr& f);

// Structured form {"numer": [[re, im, xExp, pExp, hbarExp, sExp], ...],
// "denom": [...]} with coefficients as exact strings; round-trips
// bit-exactly through phaseExprFromJson.
std::string renderJson(const PhaseExpr& f);

PhaseExpr phaseExprFromJson(const std::string& jsonText);

} // namespace psalg
