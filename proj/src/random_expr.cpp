#include "psalg/random_expr.hpp"

namespace psalg {

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) {
    // Plain modulo keeps generation identical everywhere; the tiny bias is
    // irrelevant for test data.
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace

Rational ExprGenerator::smallRational() {
    const int bound = std::max(1, policy_.coeffBound);
    int num = 0;
    while (num == 0) num = draw(rng_, -bound, bound);
    int den = draw(rng_, 1, bound);
    return makeRational(num, den);
}

Poly ExprGenerator::randomTermPoly(int termCount, int maxDegX, int maxDegP, bool allowS) {
    Poly poly(ctx_);
    const int n = ctx_.dim();
    for (int t = 0; t < termCount; ++t) {
        Monomial m;
        int budgetX = draw(rng_, 0, maxDegX);
        for (int a = 0; a < n && budgetX > 0; ++a) {
            int e = draw(rng_, 0, budgetX);
            m.xExp[a] = static_cast<std::int16_t>(e);
            budgetX -= e;
        }
        int budgetP = draw(rng_, 0, maxDegP);
        for (int a = 0; a < n && budgetP > 0; ++a) {
            int e = draw(rng_, 0, budgetP);
            m.pExp[a] = static_cast<std::int16_t>(e);
            budgetP -= e;
        }
        if (allowS) m.sExp = static_cast<std::int16_t>(draw(rng_, 0, 1));
        poly.addTerm(m, GaussianRational(smallRational()));
    }
    if (poly.isZero()) poly.addTerm(Monomial{}, GaussianRational(smallRational()));
    return poly;
}

PhaseExpr ExprGenerator::polynomial() {
    return PhaseExpr::fromPoly(
        randomTermPoly(draw(rng_, 3, 6), policy_.maxDegX, policy_.maxDegP, policy_.allowS));
}

PhaseExpr ExprGenerator::polynomialTotal(int maxTotal) {
    Poly poly(ctx_);
    const int n = ctx_.dim();
    const int termCount = draw(rng_, 3, 6);
    for (int t = 0; t < termCount; ++t) {
        Monomial m;
        int total = draw(rng_, 0, maxTotal);
        int budgetX = draw(rng_, 0, total);
        int budgetP = total - budgetX;
        for (int a = 0; a < n && budgetX > 0; ++a) {
            int e = draw(rng_, 0, budgetX);
            m.xExp[a] = static_cast<std::int16_t>(e);
            budgetX -= e;
        }
        for (int a = 0; a < n && budgetP > 0; ++a) {
            int e = draw(rng_, 0, budgetP);
            m.pExp[a] = static_cast<std::int16_t>(e);
            budgetP -= e;
        }
        if (policy_.allowS) m.sExp = static_cast<std::int16_t>(draw(rng_, 0, 1));
        poly.addTerm(m, GaussianRational(smallRational()));
    }
    if (poly.isZero()) poly.addTerm(Monomial{}, GaussianRational(smallRational()));
    return PhaseExpr::fromPoly(poly);
}

PhaseExpr ExprGenerator::momentumLinear(int maxUPower) {
    const int n = ctx_.dim();
    PhaseExpr acc = PhaseExpr::zero(ctx_);
    // Coefficient functions of x and s over u^k, times 1 and each p_a.
    for (int a = 0; a <= n; ++a) {
        if (draw(rng_, 0, 2) == 0 && a > 0) continue;
        Poly coeff = randomTermPoly(draw(rng_, 1, 3), policy_.maxDegX, 0, true);
        int uPow = draw(rng_, 0, std::max(0, maxUPower));
        PhaseExpr piece = PhaseExpr::fromPoly(coeff);
        if (uPow > 0) piece = divide(piece, PhaseExpr::u(ctx_).intPow(uPow));
        if (a > 0) piece *= PhaseExpr::p(ctx_, a);
        acc += piece;
    }
    if (acc.isZero()) acc = PhaseExpr::one(ctx_);
    return acc;
}

} // namespace psalg
