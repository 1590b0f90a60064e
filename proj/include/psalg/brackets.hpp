#pragma once

#include <span>
#include <vector>

#include "psalg/phase_expr.hpp"

namespace psalg {

enum class BracketKind { PB, STAR, MB, CNB, QNB, DB, TRACE };

// Which bracket to evaluate, with its argument list. DB takes exactly two
// principal arguments plus an even number of constraints.
struct BracketSpec {
    BracketKind kind;
    std::vector<PhaseExpr> args;
    std::vector<PhaseExpr> constraints;
};

// Classical Poisson bracket sum_a (d_x f d_p g - d_p f d_x g).
PhaseExpr poisson(const PhaseExpr& f, const PhaseExpr& g);

// Moyal star product; requires both denominators free of momentum variables
// so the bidifferential series terminates at order deg_p f + deg_p g.
PhaseExpr star(const PhaseExpr& f, const PhaseExpr& g);

// (f*g - g*f) / (i hbar); exact, real for real inputs.
PhaseExpr moyal(const PhaseExpr& f, const PhaseExpr& g);

// Classical Nambu bracket. At maximal arity 2N this is the Jacobian
// determinant d(args)/d(x1,p1,...,xN,pN); below maximal arity it is defined
// through symplectic traces with 1/(N-k)! normalization.
PhaseExpr cnb(std::span<const PhaseExpr> args);
PhaseExpr cnb(std::initializer_list<PhaseExpr> args);

// Inserts m canonical pairs, sums over their indices, normalizes by 1/m!.
PhaseExpr symplecticTrace(std::span<const PhaseExpr> args, int tracedPairs);

// Quantum Nambu bracket: signed sum of star-product chains over all
// permutations of the arguments; arity 2..6.
PhaseExpr qnb(std::span<const PhaseExpr> args);
PhaseExpr qnb(std::initializer_list<PhaseExpr> args);

// The pairing resolution of the 4-bracket into star products of
// 2-commutators; equals qnb on four arguments identically.
PhaseExpr qnb4Resolve(const PhaseExpr& a, const PhaseExpr& b, const PhaseExpr& c,
                      const PhaseExpr& d);

// Dirac bracket: cnb(f, g, constraints...) divided by the constraints' own
// bracket. Classical only; the result may carry momentum-dependent
// denominators.
PhaseExpr dirac(const PhaseExpr& f, const PhaseExpr& g, std::span<const PhaseExpr> constraints);
PhaseExpr dirac(const PhaseExpr& f, const PhaseExpr& g, std::initializer_list<PhaseExpr> constraints);

PhaseExpr evalBracket(const BracketSpec& spec);

// Serial reference implementations, kept deliberately independent of the
// optimized paths above: direct operator expansion for the star product,
// fresh star chains per permutation for the QNB, plain Laplace recursion for
// the Jacobian, ordered index sums for traces. Used as test oracles and as
// the benchmark baseline.
namespace ref {

PhaseExpr starDirect(const PhaseExpr& f, const PhaseExpr& g);
PhaseExpr moyalDirect(const PhaseExpr& f, const PhaseExpr& g);
PhaseExpr qnbDirect(std::span<const PhaseExpr> args);
PhaseExpr qnbDirect(std::initializer_list<PhaseExpr> args);
PhaseExpr jacobianDirect(std::span<const PhaseExpr> args);
PhaseExpr symplecticTraceDirect(std::span<const PhaseExpr> args, int tracedPairs);

} // namespace ref

} // namespace psalg
