#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "psalg/phase_expr.hpp"

namespace psalg {

// Everything the S^N sigma model provides: metric data, the so(N+1)
// invariants, classical and quantum hamiltonians and their difference.
struct ModelData {
    explicit ModelData(const Context& ctx)
        : n(ctx.dim()), detG(ctx), hClassical(ctx), hQuantum(ctx), correction(ctx) {}

    int n;
    // g_ab = delta_ab + x_a x_b / u, g^ab = delta_ab - x_a x_b; det g = 1/u.
    std::vector<std::vector<PhaseExpr>> gLower;
    std::vector<std::vector<PhaseExpr>> gUpper;
    PhaseExpr detG;
    // De Sitter momenta P_a = s p_a.
    std::vector<PhaseExpr> momenta;
    // Angular momenta L_ab = x_a p_b - x_b p_a for a < b, with their index
    // pair alongside.
    struct AngularMomentum {
        int a, b;
        PhaseExpr value;
    };
    std::vector<AngularMomentum> angular;
    PhaseExpr hClassical;
    PhaseExpr hQuantum;
    PhaseExpr correction;

    // All invariants, momenta first.
    std::vector<PhaseExpr> invariants() const;
};

// Builds the S^n model and proves the construction identities (metric
// inverse, Casimir identity, correction formula) on the way; cached per n.
std::shared_ptr<const ModelData> sphereModel(int n);

// H_qm - H; asserts exact equality with (hbar^2/8)(1/u - 1 - n(n-1)).
PhaseExpr quantumCorrection(int n);

// S^3 in chiral form: left/right invariant Dreibeine and the conserved
// charges they carry.
struct ChiralData {
    // frameUpper[a][i] = eps_{iab} x_b +- s delta_{ai} (contracts with p_a to
    // give the charges); frameLower[a][i] uses g_{ai} instead of delta.
    std::vector<std::vector<PhaseExpr>> frameUpperPlus, frameUpperMinus;
    std::vector<std::vector<PhaseExpr>> frameLowerPlus, frameLowerMinus;
    std::vector<PhaseExpr> chargesR, chargesL;
    std::vector<PhaseExpr> axial, isospin;
};

std::shared_ptr<const ChiralData> chiralS3();

// 1/2 (p_a V^ai) star (V^bi p_b); asserts the geometric form
// 1/2 g^ab p_a p_b + (hbar^2/4) dV dV, agreement between both frame signs,
// and equality with sphereModel(3).hQuantum.
PhaseExpr chiralQuantumH();

// Gamma^b_ac g^cd Gamma^a_bd from the symbolic Christoffel symbols of the
// round metric; a pure function of x with u-power denominators.
PhaseExpr christoffelContraction(int n);

// E_l = hbar^2 l (l + n - 1) / 2 for l = 0..lMax.
std::vector<std::pair<int, PhaseExpr>> casimirSpectrum(int n, int lMax);

// poisson(p_a, H) + (1/2) d_a g^{bc} p_b p_c; identically zero.
PhaseExpr eomResidual(int n, int a);

// V = (-1)^(n-1) / (P_2 P_3 ... P_{n-1}); empty product for n <= 2.
PhaseExpr nambuVelocityFactor(int n);

} // namespace psalg
