#pragma once

#include <cstdint>
#include <random>

#include "psalg/phase_expr.hpp"

namespace psalg {

// Deterministic generation of random test functions: sparse polynomials with
// small nonzero rational coefficients. mt19937_64 output is specified by the
// standard, so identical seeds give identical expressions on any platform.
struct RandomExprPolicy {
    std::uint64_t seed = 1729;
    int maxDegX = 3;
    int maxDegP = 2;
    bool allowS = false;
    int coeffBound = 4;
};

class ExprGenerator {
public:
    ExprGenerator(const Context& ctx, const RandomExprPolicy& policy)
        : ctx_(ctx), policy_(policy), rng_(policy.seed) {}

    // A random polynomial with 3..6 terms within the policy degree bounds.
    PhaseExpr polynomial();

    // A random polynomial whose terms have total degree (x plus p) at most
    // maxTotal, for identities stated with a single degree bound.
    PhaseExpr polynomialTotal(int maxTotal);

    // A polynomial of momentum degree <= 1 whose coefficients may carry s
    // and a 1/u^k factor; star-admissible (denominator is momentum-free).
    PhaseExpr momentumLinear(int maxUPower = 1);

    std::uint64_t rawDraw() { return rng_(); }

private:
    Rational smallRational();
    Poly randomTermPoly(int termCount, int maxDegX, int maxDegP, bool allowS);

    Context ctx_;
    RandomExprPolicy policy_;
    std::mt19937_64 rng_;
};

} // namespace psalg
