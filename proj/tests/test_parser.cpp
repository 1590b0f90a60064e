#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "psalg/parser.hpp"
#include "psalg/random_expr.hpp"
#include "psalg/render.hpp"

using namespace psalg;

TEST_CASE("parse basics") {
    Context ctx(2);
    PhaseExpr lz = parse("x1*p2 - x2*p1", ctx);
    CHECK(lz.equals(PhaseExpr::x(ctx, 1) * PhaseExpr::p(ctx, 2) -
                    PhaseExpr::x(ctx, 2) * PhaseExpr::p(ctx, 1)));

    CHECK(parse("s*p1", ctx).equals(PhaseExpr::s(ctx) * PhaseExpr::p(ctx, 1)));
    CHECK(parse("u", ctx).equals(PhaseExpr::u(ctx)));
    CHECK(parse("3/4", ctx).equals(PhaseExpr::fromRational(ctx, makeRational(3, 4))));
    CHECK(parse("i^2", ctx).equals(PhaseExpr::fromRational(ctx, Rational(-1))));
    CHECK(parse("hbar^2*x1", ctx).equals(PhaseExpr::hbar(ctx).intPow(2) * PhaseExpr::x(ctx, 1)));
}

TEST_CASE("precedence and associativity") {
    Context ctx(1);
    CHECK(parse("2+3*4", ctx).equals(PhaseExpr::fromRational(ctx, Rational(14))));
    CHECK(parse("-x1^2", ctx).equals(-(PhaseExpr::x(ctx, 1).intPow(2))));
    CHECK(parse("2^3^2", ctx).equals(PhaseExpr::fromRational(ctx, Rational(64))));  // left assoc
    CHECK(parse("1-2-3", ctx).equals(PhaseExpr::fromRational(ctx, Rational(-4))));
    CHECK(parse("8/2/2", ctx).equals(PhaseExpr::fromRational(ctx, Rational(2))));
    CHECK(parse("(x1+1)^2", ctx).equals((PhaseExpr::x(ctx, 1) + PhaseExpr::one(ctx)).intPow(2)));
}

TEST_CASE("parse errors") {
    Context ctx(2);
    CHECK_THROWS_AS(parse("x1^(-1)", ctx), ParseError);
    CHECK_THROWS_AS(parse("x1^p1", ctx), ParseError);
    CHECK_THROWS_AS(parse("y1", ctx), ParseError);
    CHECK_THROWS_AS(parse("x3", ctx), ParseError);
    CHECK_THROWS_AS(parse("x0", ctx), ParseError);
    CHECK_THROWS_AS(parse("1/0", ctx), ParseError);
    CHECK_THROWS_AS(parse("1 +", ctx), ParseError);
    CHECK_THROWS_AS(parse("(1", ctx), ParseError);
    CHECK_THROWS_AS(parse("", ctx), ParseError);
    CHECK_THROWS_AS(parse("x1 $ 2", ctx), ParseError);

    try {
        parse("x1 +\n @", ctx);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 2);
    }
}

TEST_CASE("render examples") {
    Context ctx(2);
    PhaseExpr st = PhaseExpr::x(ctx, 1) * PhaseExpr::p(ctx, 1) +
                   PhaseExpr::imaginaryUnit(ctx) *
                       PhaseExpr::hbar(ctx).scaled(GaussianRational(makeRational(1, 2)));
    CHECK(renderText(st) == "x1*p1 + (1/2)*i*hbar");
    CHECK(renderText(PhaseExpr::zero(ctx)) == "0");
    CHECK(renderText(PhaseExpr::one(ctx)) == "1");
    CHECK(renderText(-PhaseExpr::x(ctx, 1)) == "-x1");
    CHECK(renderText(divide(PhaseExpr::one(ctx), PhaseExpr::u(ctx))) ==
          "(-1) / (x1^2 + x2^2 - 1)");
}

TEST_CASE("round trip through text") {
    Context ctx(2);
    RandomExprPolicy policy;
    policy.seed = 101;
    policy.allowS = true;
    ExprGenerator gen(ctx, policy);
    for (int rep = 0; rep < 10; ++rep) {
        PhaseExpr f = gen.momentumLinear();
        PhaseExpr g = f + PhaseExpr::imaginaryUnit(ctx) * gen.polynomial();
        CHECK(parse(renderText(f), ctx).equals(f));
        CHECK(parse(renderText(g), ctx).equals(g));
    }
}

TEST_CASE("round trip through json is bit-exact") {
    Context ctx(2);
    RandomExprPolicy policy;
    policy.seed = 103;
    policy.allowS = true;
    ExprGenerator gen(ctx, policy);
    for (int rep = 0; rep < 10; ++rep) {
        PhaseExpr f = divide(gen.polynomial() + PhaseExpr::imaginaryUnit(ctx) * gen.polynomial(),
                             PhaseExpr::u(ctx) * gen.polynomial());
        PhaseExpr back = phaseExprFromJson(renderJson(f));
        CHECK(back.numer() == f.numer());
        CHECK(back.denom() == f.denom());
    }
}

TEST_CASE("parser survives arbitrary bytes") {
    std::mt19937_64 rng(7);
    Context ctx(2);
    const std::string alphabet = "xps12ui+-*/^() hbar\t\n~#";
    for (int rep = 0; rep < 500; ++rep) {
        std::string text;
        const int len = static_cast<int>(rng() % 24);
        for (int k = 0; k < len; ++k) text += alphabet[rng() % alphabet.size()];
        try {
            (void)parse(text, ctx);
        } catch (const ParseError&) {
            // Rejection is fine; crashing is not.
        } catch (const Error&) {
        }
    }
    CHECK(true);
}
