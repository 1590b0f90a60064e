#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psalg/brackets.hpp"
#include "psalg/models.hpp"
#include "psalg/random_expr.hpp"

using namespace psalg;

namespace {

PhaseExpr expectedCorrection(int n) {
    Context ctx(n);
    PhaseExpr expected =
        divide(PhaseExpr::one(ctx) -
                   PhaseExpr::fromRational(ctx, Rational(1 + n * (n - 1))) * PhaseExpr::u(ctx),
               PhaseExpr::u(ctx));
    return expected * PhaseExpr::hbar(ctx).intPow(2).scaled(GaussianRational(makeRational(1, 8)));
}

} // namespace

TEST_CASE("sphere model S^2 invariants") {
    auto model = sphereModel(2);
    Context ctx(2);
    PhaseExpr s = PhaseExpr::s(ctx);
    CHECK(model->momenta[0].equals(s * PhaseExpr::p(ctx, 1)));
    CHECK(model->momenta[1].equals(s * PhaseExpr::p(ctx, 2)));
    CHECK(model->angular.size() == 1);
    CHECK(model->angular[0].value.equals(PhaseExpr::x(ctx, 1) * PhaseExpr::p(ctx, 2) -
                                         PhaseExpr::x(ctx, 2) * PhaseExpr::p(ctx, 1)));
    CHECK(model->correction.equals(expectedCorrection(2)));
}

TEST_CASE("S^1 correction against a direct star expansion") {
    Context ctx(1);
    PhaseExpr P = PhaseExpr::s(ctx) * PhaseExpr::p(ctx, 1);
    PhaseExpr viaOracle = (ref::starDirect(P, P) - P * P)
                              .scaled(GaussianRational(makeRational(1, 2)));
    CHECK(viaOracle.equals(expectedCorrection(1)));
    CHECK(sphereModel(1)->correction.equals(viaOracle));
    CHECK(sphereModel(1)->angular.empty());
}

TEST_CASE("quantum corrections for n = 1..4") {
    for (int n = 1; n <= 4; ++n) CHECK(quantumCorrection(n).equals(expectedCorrection(n)));
    CHECK_THROWS_AS(sphereModel(0), DimensionError);
}

TEST_CASE("conservation and closure") {
    for (int n : {2, 3}) {
        auto model = sphereModel(n);
        for (const PhaseExpr& inv : model->invariants()) {
            CHECK(poisson(inv, model->hClassical).isZero());
            CHECK(moyal(inv, model->hQuantum).isZero());
        }
    }
}

TEST_CASE("invariants are undeformed") {
    auto model = sphereModel(2);
    auto invs = model->invariants();
    for (std::size_t i = 0; i < invs.size(); ++i)
        for (std::size_t j = 0; j < invs.size(); ++j)
            CHECK(moyal(invs[i], invs[j]).equals(poisson(invs[i], invs[j])));
}

TEST_CASE("Groenewold-van Hove witness") {
    auto model = sphereModel(2);
    for (const PhaseExpr& P : model->momenta) {
        PhaseExpr witness = moyal(P, model->hClassical);
        CHECK_FALSE(witness.isZero());
        CHECK(witness.hbarOrder() == 2);
    }
    for (const auto& am : model->angular) CHECK(moyal(am.value, model->hClassical).isZero());
}

TEST_CASE("chiral S^3 charges") {
    auto chiral = chiralS3();
    Context ctx(3);
    for (int i = 0; i < 3; ++i)
        CHECK(chiral->axial[i].equals(PhaseExpr::s(ctx) * PhaseExpr::p(ctx, i + 1)));
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) CHECK(poisson(chiral->chargesR[j], chiral->chargesL[k]).isZero());
    // su(2) closure with structure constants -2 eps.
    PhaseExpr lhs = poisson(chiral->chargesR[0], chiral->chargesR[1]);
    CHECK(lhs.equals(chiral->chargesR[2].scaled(GaussianRational(Rational(-2)))));
    // Isospin comes out as eps_{iab} x_b p_a with this frame convention.
    for (int i = 0; i < 3; ++i) {
        int a = (i + 1) % 3, b = (i + 2) % 3;
        PhaseExpr expected = PhaseExpr::p(ctx, a + 1) * PhaseExpr::x(ctx, b + 1) -
                             PhaseExpr::p(ctx, b + 1) * PhaseExpr::x(ctx, a + 1);
        CHECK(chiral->isospin[i].equals(expected));
    }
}

TEST_CASE("chiral quantum hamiltonian") {
    Context ctx(3);
    PhaseExpr hq = chiralQuantumH();
    auto model = sphereModel(3);
    CHECK(hq.equals(model->hQuantum));
    CHECK((hq - model->hClassical).equals(expectedCorrection(3)));
    CHECK(hq.classicalLimit().equals(model->hClassical));
}

TEST_CASE("christoffel contraction") {
    for (int n : {2, 3}) {
        Context ctx(n);
        // Frozen value: Gamma.g.Gamma = det g - 1 = 1/u - 1 in this chart.
        PhaseExpr expected =
            divide(PhaseExpr::one(ctx), PhaseExpr::u(ctx)) - PhaseExpr::one(ctx);
        CHECK(christoffelContraction(n).equals(expected));
    }
}

TEST_CASE("casimir spectrum") {
    Context ctx2(2);
    auto spec2 = casimirSpectrum(2, 3);
    PhaseExpr h2 = PhaseExpr::hbar(ctx2).intPow(2);
    CHECK(spec2[0].second.isZero());
    CHECK(spec2[1].second.equals(h2));
    CHECK(spec2[2].second.equals(h2.scaled(GaussianRational(Rational(3)))));
    CHECK(spec2[3].second.equals(h2.scaled(GaussianRational(Rational(6)))));

    Context ctx3(3);
    auto spec3 = casimirSpectrum(3, 4);
    PhaseExpr h3 = PhaseExpr::hbar(ctx3).intPow(2);
    for (int twoJ = 0; twoJ <= 4; ++twoJ) {
        Rational j = makeRational(twoJ, 2);
        CHECK(spec3[static_cast<std::size_t>(twoJ)].second.equals(
            h3.scaled(GaussianRational(2 * j * (j + 1)))));
    }
}

TEST_CASE("equations of motion") {
    CHECK(eomResidual(2, 1).isZero());
    CHECK(eomResidual(2, 2).isZero());
    CHECK(eomResidual(4, 3).isZero());

    // pdot_a = p_a (x.p) on S^2.
    Context ctx(2);
    auto model = sphereModel(2);
    PhaseExpr xp = PhaseExpr::x(ctx, 1) * PhaseExpr::p(ctx, 1) +
                   PhaseExpr::x(ctx, 2) * PhaseExpr::p(ctx, 2);
    for (int a = 1; a <= 2; ++a)
        CHECK(poisson(PhaseExpr::p(ctx, a), model->hClassical)
                  .equals(PhaseExpr::p(ctx, a) * xp));
}

TEST_CASE("nambu velocity factor") {
    Context ctx3(3);
    auto model3 = sphereModel(3);
    PhaseExpr v3 = nambuVelocityFactor(3);
    CHECK(v3.equals(divide(PhaseExpr::one(ctx3), model3->momenta[1])));
    CHECK(poisson(v3, model3->hClassical).isZero());

    Context ctx2(2);
    CHECK(nambuVelocityFactor(2).equals(PhaseExpr::fromRational(ctx2, Rational(-1))));

    // V times the maximal bracket gives dk/dt = {k, H} at N = 3.
    RandomExprPolicy policy;
    policy.seed = 83;
    policy.maxDegX = 2;
    policy.maxDegP = 1;
    ExprGenerator gen(ctx3, policy);
    PhaseExpr k = gen.polynomial();
    std::vector<PhaseExpr> args{k,
                                model3->momenta[0],
                                PhaseExpr::x(ctx3, 1) * PhaseExpr::p(ctx3, 2) -
                                    PhaseExpr::x(ctx3, 2) * PhaseExpr::p(ctx3, 1),
                                model3->momenta[1],
                                PhaseExpr::x(ctx3, 2) * PhaseExpr::p(ctx3, 3) -
                                    PhaseExpr::x(ctx3, 3) * PhaseExpr::p(ctx3, 2),
                                model3->momenta[2]};
    CHECK((v3 * cnb(args)).equals(poisson(k, model3->hClassical)));
}
