#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psalg/brackets.hpp"
#include "psalg/random_expr.hpp"

using namespace psalg;

namespace {

PhaseExpr xv(const Context& ctx, int a) { return PhaseExpr::x(ctx, a); }
PhaseExpr pv(const Context& ctx, int a) { return PhaseExpr::p(ctx, a); }

} // namespace

TEST_CASE("s squared rewrites to u") {
    Context ctx(1);
    PhaseExpr s = PhaseExpr::s(ctx);
    PhaseExpr expected = PhaseExpr::one(ctx) - xv(ctx, 1) * xv(ctx, 1);
    CHECK((s * s).equals(expected));
    CHECK((s * s).equals(PhaseExpr::u(ctx)));
}

TEST_CASE("additive inverse and binomial power") {
    Context ctx(2);
    ExprGenerator gen(ctx, {});
    PhaseExpr f = gen.polynomial();
    CHECK((f + (-f)).isZero());

    PhaseExpr sum = xv(ctx, 1) + pv(ctx, 1);
    PhaseExpr expected = xv(ctx, 1) * xv(ctx, 1) +
                         PhaseExpr::fromRational(ctx, Rational(2)) * xv(ctx, 1) * pv(ctx, 1) +
                         pv(ctx, 1) * pv(ctx, 1);
    CHECK(sum.intPow(2).equals(expected));
}

TEST_CASE("division") {
    Context ctx(1);
    PhaseExpr u = PhaseExpr::u(ctx);
    PhaseExpr invU = divide(PhaseExpr::one(ctx), u);
    CHECK(invU.numer().termCount() == 1);
    CHECK((invU * u).equals(PhaseExpr::one(ctx)));

    // 1/s = s/u after rationalization.
    PhaseExpr invS = divide(PhaseExpr::one(ctx), PhaseExpr::s(ctx));
    CHECK(invS.equals(divide(PhaseExpr::s(ctx), u)));
    CHECK(invS.denom().isSFree());

    ExprGenerator gen(ctx, {});
    for (int rep = 0; rep < 5; ++rep) {
        PhaseExpr f = gen.polynomial();
        if (f.isZero()) continue;
        CHECK(divide(f, f).equals(PhaseExpr::one(ctx)));
    }

    CHECK_THROWS_AS(divide(PhaseExpr::one(ctx), PhaseExpr::zero(ctx)), DivisionByZeroError);
}

TEST_CASE("division rationalizes i and mixed s denominators") {
    Context ctx(1);
    PhaseExpr iU = PhaseExpr::imaginaryUnit(ctx);
    PhaseExpr z = divide(PhaseExpr::one(ctx), iU);
    CHECK(z.equals(-iU));
    CHECK(z.denom().isIFree());

    // 1/(1 + s): denominator becomes 1 - u = x^2.
    PhaseExpr w = divide(PhaseExpr::one(ctx), PhaseExpr::one(ctx) + PhaseExpr::s(ctx));
    CHECK(w.denom().isSFree());
    CHECK((w * (PhaseExpr::one(ctx) + PhaseExpr::s(ctx))).equals(PhaseExpr::one(ctx)));
}

TEST_CASE("derivatives") {
    Context ctx(2);
    PhaseExpr s = PhaseExpr::s(ctx);
    PhaseExpr u = PhaseExpr::u(ctx);

    // ds/dx1 = -x1 s / u
    CHECK(s.derive(Var::x(1)).equals(divide(-xv(ctx, 1) * s, u)));
    CHECK(s.derive(Var::p(1)).isZero());

    PhaseExpr lz = xv(ctx, 1) * pv(ctx, 2) - xv(ctx, 2) * pv(ctx, 1);
    CHECK(lz.derive(Var::p(2)).equals(xv(ctx, 1)));

    // d(1/u)/dx1 = 2 x1 / u^2 (quotient rule, du = -2 x1 dx1).
    PhaseExpr invU = divide(PhaseExpr::one(ctx), u);
    PhaseExpr expected = divide(PhaseExpr::fromRational(ctx, Rational(2)) * xv(ctx, 1), u * u);
    CHECK(invU.derive(Var::x(1)).equals(expected));
}

TEST_CASE("derivative is a derivation and commutes") {
    Context ctx(2);
    RandomExprPolicy policy;
    policy.seed = 99;
    policy.allowS = true;
    ExprGenerator gen(ctx, policy);
    PhaseExpr f = gen.momentumLinear();
    PhaseExpr g = gen.polynomial();

    std::vector<Var> vars{Var::x(1), Var::x(2), Var::p(1), Var::p(2)};
    for (Var v : vars) {
        PhaseExpr lhs = (f * g).derive(v);
        PhaseExpr rhs = f.derive(v) * g + f * g.derive(v);
        CHECK(lhs.equals(rhs));
    }
    for (Var v1 : vars)
        for (Var v2 : vars)
            CHECK(f.derive(v1).derive(v2).equals(f.derive(v2).derive(v1)));
}

TEST_CASE("equality is cross-multiplied") {
    Context ctx(1);
    PhaseExpr s = PhaseExpr::s(ctx);
    PhaseExpr u = PhaseExpr::u(ctx);
    CHECK((s * s).equals(u));
    CHECK(divide(u, u * u).equals(divide(PhaseExpr::one(ctx), u)));
    CHECK_FALSE(xv(ctx, 1).equals(pv(ctx, 1)));
}

TEST_CASE("hbar order") {
    Context ctx(1);
    CHECK_FALSE(PhaseExpr::zero(ctx).hbarOrder().has_value());
    PhaseExpr h = PhaseExpr::hbar(ctx);
    PhaseExpr f = h.intPow(2) * xv(ctx, 1) + h.intPow(5) * pv(ctx, 1);
    CHECK(f.hbarOrder() == 2);
}

TEST_CASE("classical limit") {
    Context ctx(1);
    PhaseExpr f = xv(ctx, 1) + PhaseExpr::hbar(ctx) * pv(ctx, 1);
    CHECK(f.classicalLimit().equals(xv(ctx, 1)));

    // hbar -> 0 of the Moyal bracket is the Poisson bracket; the PB goes
    // through plain derivatives, independent of the star machinery.
    Context ctx2(2);
    ExprGenerator gen(ctx2, {});
    for (int rep = 0; rep < 4; ++rep) {
        PhaseExpr a = gen.polynomial();
        PhaseExpr b = gen.polynomial();
        CHECK(moyal(a, b).classicalLimit().equals(poisson(a, b)));
    }
}

TEST_CASE("conjugation") {
    Context ctx(1);
    PhaseExpr ix = PhaseExpr::imaginaryUnit(ctx) * xv(ctx, 1);
    CHECK(ix.conjugate().equals(-ix));

    ExprGenerator gen(ctx, {});
    PhaseExpr real = gen.polynomial();
    CHECK(real.conjugate().equals(real));

    // Anti-homomorphism against the direct-expansion star oracle.
    Context ctx2(2);
    RandomExprPolicy policy;
    policy.seed = 5;
    ExprGenerator gen2(ctx2, policy);
    for (int rep = 0; rep < 3; ++rep) {
        PhaseExpr f = gen2.polynomial() +
                      PhaseExpr::imaginaryUnit(ctx2) * gen2.polynomial();
        PhaseExpr g = gen2.polynomial();
        CHECK(star(f, g).conjugate().equals(ref::starDirect(g.conjugate(), f.conjugate())));
    }
}

TEST_CASE("evaluation") {
    Context ctx(1);
    EvalPoint pt;
    pt.values[Var::x(1)] = makeRational(3, 5);
    CHECK(PhaseExpr::u(ctx).evalExact(pt) == GaussianRational(makeRational(16, 25)));
    CHECK(PhaseExpr::s(ctx).evalExact(pt) == GaussianRational(makeRational(4, 5)));

    // u = 0 on the equator: s evaluates to 0, no error without 1/u.
    Context ctx2(2);
    EvalPoint edge;
    edge.values[Var::x(1)] = Rational(1);
    edge.values[Var::p(2)] = Rational(2);
    PhaseExpr lz = xv(ctx2, 1) * pv(ctx2, 2) - xv(ctx2, 2) * pv(ctx2, 1);
    CHECK(lz.evalExact(edge) == GaussianRational(Rational(2)));
    CHECK(PhaseExpr::s(ctx2).evalExact(edge) == GaussianRational(Rational(0)));

    EvalPoint pole;
    pole.values[Var::x(1)] = Rational(1);
    CHECK_THROWS_AS(divide(PhaseExpr::one(ctx), PhaseExpr::u(ctx)).evalExact(pole),
                    ZeroDenominatorError);

    // u = 1 - 1/2 = 1/2 is not a rational square.
    EvalPoint bad;
    bad.values[Var::x(1)] = makeRational(1, 2);
    PhaseExpr sOnly = PhaseExpr::s(ctx);
    CHECK_THROWS_AS((sOnly * sOnly * sOnly).evalExact(bad), NonSquareUError);
    const double approx = (sOnly * sOnly * sOnly).evalFloat(bad).real();
    CHECK(approx == doctest::Approx(std::pow(0.75, 1.5)));

    EvalPoint outside;
    outside.values[Var::x(1)] = Rational(2);
    CHECK_THROWS_AS(sOnly.evalExact(outside), NegativeUError);
}

TEST_CASE("evaluation is a ring homomorphism") {
    Context ctx(2);
    RandomExprPolicy policy;
    policy.seed = 11;
    policy.allowS = true;
    ExprGenerator gen(ctx, policy);
    EvalPoint pt;
    pt.values[Var::x(1)] = makeRational(3, 5);
    pt.values[Var::x(2)] = makeRational(0);
    pt.values[Var::p(1)] = makeRational(-2, 3);
    pt.values[Var::p(2)] = makeRational(7);
    pt.hbarVal = makeRational(1, 2);
    for (int rep = 0; rep < 4; ++rep) {
        PhaseExpr a = gen.polynomial();
        PhaseExpr b = gen.polynomial();
        CHECK((a * b).evalExact(pt) == a.evalExact(pt) * b.evalExact(pt));
        CHECK((a + b).evalExact(pt) == a.evalExact(pt) + b.evalExact(pt));
    }
}

TEST_CASE("ring is commutative and representations stay clean") {
    Context ctx(2);
    RandomExprPolicy policy;
    policy.seed = 17;
    policy.allowS = true;
    ExprGenerator gen(ctx, policy);
    for (int rep = 0; rep < 5; ++rep) {
        PhaseExpr a = gen.momentumLinear();
        PhaseExpr b = gen.momentumLinear();
        PhaseExpr ab = a * b;
        CHECK(ab.equals(b * a));
        for (const auto& [m, c] : ab.numer().terms()) CHECK(m.sExp <= 1);
        CHECK(ab.denom().isSFree());
        CHECK(ab.denom().isIFree());
        CHECK(ab.denom().isHbarFree());
        PhaseExpr d = a.derive(Var::x(1));
        CHECK(d.denom().isSFree());
        CHECK(d.denom().isIFree());
        CHECK(d.denom().isHbarFree());
    }
}

TEST_CASE("context mismatch is rejected") {
    Context c1(1), c2(2);
    CHECK_THROWS_AS(PhaseExpr::x(c1, 1) + PhaseExpr::x(c2, 1), ContextMismatchError);
    CHECK_THROWS_AS(Context(0), DimensionError);
    CHECK_THROWS_AS(Context(9), DimensionError);
}
