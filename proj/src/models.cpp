#include "psalg/models.hpp"

#include <map>
#include <mutex>

#include "psalg/brackets.hpp"

namespace psalg {

namespace {

int levi3(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    // Parity of (i j k) as a permutation of (1 2 3).
    return ((j - i) * (k - i) * (k - j) > 0) ? 1 : -1;
}

void requireEqual(const PhaseExpr& lhs, const PhaseExpr& rhs, const std::string& what) {
    if (!lhs.equals(rhs)) throw VerificationError("model identity failed: " + what);
}

PhaseExpr half(const Context& ctx) { return PhaseExpr::fromRational(ctx, makeRational(1, 2)); }

} // namespace

std::vector<PhaseExpr> ModelData::invariants() const {
    std::vector<PhaseExpr> all = momenta;
    for (const auto& am : angular) all.push_back(am.value);
    return all;
}

std::shared_ptr<const ModelData> sphereModel(int n) {
    static std::mutex cacheMutex;
    static std::map<int, std::shared_ptr<const ModelData>> cache;
    {
        std::lock_guard<std::mutex> lock(cacheMutex);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }

    Context ctx(n);
    auto model = std::make_shared<ModelData>(ctx);

    PhaseExpr uE = PhaseExpr::u(ctx);
    PhaseExpr sE = PhaseExpr::s(ctx);
    PhaseExpr oneE = PhaseExpr::one(ctx);

    model->gLower.assign(n, std::vector<PhaseExpr>(n, PhaseExpr::zero(ctx)));
    model->gUpper.assign(n, std::vector<PhaseExpr>(n, PhaseExpr::zero(ctx)));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            PhaseExpr xa = PhaseExpr::x(ctx, a + 1), xb = PhaseExpr::x(ctx, b + 1);
            PhaseExpr delta = (a == b) ? oneE : PhaseExpr::zero(ctx);
            model->gLower[a][b] = delta + divide(xa * xb, uE);
            model->gUpper[a][b] = delta - xa * xb;
        }
    }
    model->detG = divide(oneE, uE);

    // g_lower . g_upper = identity.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            PhaseExpr acc = PhaseExpr::zero(ctx);
            for (int c = 0; c < n; ++c) acc += model->gLower[a][c] * model->gUpper[c][b];
            requireEqual(acc, (a == b) ? oneE : PhaseExpr::zero(ctx), "metric inverse");
        }
    requireEqual(model->detG * uE, oneE, "det g * u = 1");

    for (int a = 1; a <= n; ++a) model->momenta.push_back(sE * PhaseExpr::p(ctx, a));
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b)
            model->angular.push_back({a, b,
                                      PhaseExpr::x(ctx, a) * PhaseExpr::p(ctx, b) -
                                          PhaseExpr::x(ctx, b) * PhaseExpr::p(ctx, a)});

    PhaseExpr hC = PhaseExpr::zero(ctx);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            hC += model->gUpper[a][b] * PhaseExpr::p(ctx, a + 1) * PhaseExpr::p(ctx, b + 1);
    model->hClassical = half(ctx) * hC;

    // Casimir identity: 1/2 sum P^2 + 1/4 sum_{ab} L^2 = 1/2 g^{ab} p_a p_b
    // (the full L sum counts each a<b pair twice).
    PhaseExpr casimir = PhaseExpr::zero(ctx);
    for (const PhaseExpr& P : model->momenta) casimir += half(ctx) * P * P;
    for (const auto& am : model->angular) casimir += half(ctx) * am.value * am.value;
    requireEqual(casimir, model->hClassical, "Casimir identity");

    PhaseExpr hQ = PhaseExpr::zero(ctx);
    for (const PhaseExpr& P : model->momenta) hQ += half(ctx) * star(P, P);
    for (const auto& am : model->angular) hQ += half(ctx) * star(am.value, am.value);
    model->hQuantum = hQ;
    model->correction = model->hQuantum - model->hClassical;

    std::lock_guard<std::mutex> lock(cacheMutex);
    auto [it, inserted] = cache.emplace(n, std::move(model));
    return it->second;
}

PhaseExpr quantumCorrection(int n) {
    auto model = sphereModel(n);
    Context ctx(n);
    // (hbar^2/8) (1/u - 1 - n(n-1))
    PhaseExpr hbar2 = PhaseExpr::hbar(ctx).intPow(2);
    PhaseExpr expected = hbar2.scaled(GaussianRational(makeRational(1, 8))) *
                         (PhaseExpr::fromPoly(Poly::one(Context(n))) -
                          PhaseExpr::fromRational(ctx, Rational(1 + n * (n - 1))) * PhaseExpr::u(ctx));
    expected = divide(expected, PhaseExpr::u(ctx));
    if (!model->correction.equals(expected))
        throw VerificationError("quantum correction does not match (hbar^2/8)(1/u - 1 - n(n-1))");
    return model->correction;
}

std::shared_ptr<const ChiralData> chiralS3() {
    static std::mutex cacheMutex;
    static std::shared_ptr<const ChiralData> cache;
    {
        std::lock_guard<std::mutex> lock(cacheMutex);
        if (cache) return cache;
    }

    Context ctx(3);
    auto model = sphereModel(3);
    auto data = std::make_shared<ChiralData>();
    PhaseExpr sE = PhaseExpr::s(ctx);
    PhaseExpr zero = PhaseExpr::zero(ctx);

    auto frameUpper = [&](int sign) {
        std::vector<std::vector<PhaseExpr>> V(3, std::vector<PhaseExpr>(3, zero));
        for (int a = 0; a < 3; ++a)
            for (int i = 0; i < 3; ++i) {
                PhaseExpr entry = zero;
                for (int b = 0; b < 3; ++b) {
                    int e = levi3(i + 1, a + 1, b + 1);
                    if (e != 0)
                        entry += PhaseExpr::x(ctx, b + 1)
                                     .scaled(GaussianRational(Rational(e)));
                }
                if (a == i) entry += sign > 0 ? sE : -sE;
                V[a][i] = entry;
            }
        return V;
    };
    auto frameLower = [&](int sign) {
        std::vector<std::vector<PhaseExpr>> V(3, std::vector<PhaseExpr>(3, zero));
        for (int a = 0; a < 3; ++a)
            for (int i = 0; i < 3; ++i) {
                PhaseExpr entry = zero;
                for (int b = 0; b < 3; ++b) {
                    int e = levi3(i + 1, a + 1, b + 1);
                    if (e != 0)
                        entry += PhaseExpr::x(ctx, b + 1)
                                     .scaled(GaussianRational(Rational(e)));
                }
                PhaseExpr metricPart = sE * model->gLower[a][i];
                entry += sign > 0 ? metricPart : -metricPart;
                V[a][i] = entry;
            }
        return V;
    };

    data->frameUpperPlus = frameUpper(+1);
    data->frameUpperMinus = frameUpper(-1);
    data->frameLowerPlus = frameLower(+1);
    data->frameLowerMinus = frameLower(-1);

    // Vielbein completeness for both signs: delta_ij V^i_a V^j_b = g_ab and
    // g^ab V_a^i V_b^j = delta_ij.
    for (const auto* frame : {&data->frameLowerPlus, &data->frameLowerMinus}) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                PhaseExpr acc = zero;
                for (int i = 0; i < 3; ++i) acc += (*frame)[a][i] * (*frame)[b][i];
                requireEqual(acc, model->gLower[a][b], "Vielbein completeness");
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                PhaseExpr acc = zero;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        acc += model->gUpper[a][b] * (*frame)[a][i] * (*frame)[b][j];
                requireEqual(acc, (i == j) ? PhaseExpr::one(ctx) : zero, "Vielbein orthonormality");
            }
    }

    for (int i = 0; i < 3; ++i) {
        PhaseExpr r = zero, l = zero;
        for (int a = 0; a < 3; ++a) {
            r += data->frameUpperPlus[a][i] * PhaseExpr::p(ctx, a + 1);
            l += data->frameUpperMinus[a][i] * PhaseExpr::p(ctx, a + 1);
        }
        data->chargesR.push_back(r);
        data->chargesL.push_back(l);
        data->axial.push_back((r - l) * half(ctx));
        data->isospin.push_back((r + l) * half(ctx));
    }

    // A = s p; H = 1/2 R.R = 1/2 L.L.
    for (int i = 0; i < 3; ++i)
        requireEqual(data->axial[i], sE * PhaseExpr::p(ctx, i + 1), "axial charge");
    PhaseExpr hr = zero, hl = zero;
    for (int i = 0; i < 3; ++i) {
        hr += half(ctx) * data->chargesR[i] * data->chargesR[i];
        hl += half(ctx) * data->chargesL[i] * data->chargesL[i];
    }
    requireEqual(hr, model->hClassical, "H = R.R/2");
    requireEqual(hl, model->hClassical, "H = L.L/2");

    std::lock_guard<std::mutex> lock(cacheMutex);
    if (!cache) cache = std::move(data);
    return cache;
}

PhaseExpr chiralQuantumH() {
    Context ctx(3);
    auto chiral = chiralS3();
    auto model = sphereModel(3);

    auto quantize = [&](const std::vector<PhaseExpr>& charges) {
        PhaseExpr acc = PhaseExpr::zero(ctx);
        for (const PhaseExpr& c : charges) acc += half(ctx) * star(c, c);
        return acc;
    };
    PhaseExpr hPlus = quantize(chiral->chargesR);
    PhaseExpr hMinus = quantize(chiral->chargesL);
    if (!hPlus.equals(hMinus))
        throw VerificationError("chiral H_qm differs between frame signs");

    // Geometric form: (1/2)(g^{ab} p_a p_b + (hbar^2/4) d_a V^{bi} d_b V^{ai}).
    auto geometric = [&](const std::vector<std::vector<PhaseExpr>>& frame) {
        PhaseExpr dd = PhaseExpr::zero(ctx);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int i = 0; i < 3; ++i)
                    dd += frame[b][i].derive(Var::x(a + 1)) * frame[a][i].derive(Var::x(b + 1));
        return model->hClassical +
               PhaseExpr::hbar(ctx).intPow(2).scaled(GaussianRational(makeRational(1, 8))) * dd;
    };
    if (!hPlus.equals(geometric(chiral->frameUpperPlus)))
        throw VerificationError("chiral H_qm does not match its geometric form (+)");
    if (!hMinus.equals(geometric(chiral->frameUpperMinus)))
        throw VerificationError("chiral H_qm does not match its geometric form (-)");

    if (!hPlus.equals(model->hQuantum))
        throw VerificationError("chiral H_qm differs from the Casimir-form H_qm");
    return hPlus;
}

PhaseExpr christoffelContraction(int n) {
    Context ctx(n);
    auto model = sphereModel(n);

    // Gamma^b_{ac} = 1/2 g^{bd} (d_a g_{dc} + d_c g_{da} - d_d g_{ac}).
    std::vector<std::vector<std::vector<PhaseExpr>>> gamma(
        n, std::vector<std::vector<PhaseExpr>>(n, std::vector<PhaseExpr>(n, PhaseExpr::zero(ctx))));
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                PhaseExpr acc = PhaseExpr::zero(ctx);
                for (int d = 0; d < n; ++d) {
                    PhaseExpr inner = model->gLower[d][c].derive(Var::x(a + 1)) +
                                      model->gLower[d][a].derive(Var::x(c + 1)) -
                                      model->gLower[a][c].derive(Var::x(d + 1));
                    acc += model->gUpper[b][d] * inner;
                }
                gamma[b][a][c] = half(ctx) * acc;
            }

    PhaseExpr total = PhaseExpr::zero(ctx);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    total += gamma[b][a][c] * model->gUpper[c][d] * gamma[a][b][d];
    return total;
}

std::vector<std::pair<int, PhaseExpr>> casimirSpectrum(int n, int lMax) {
    if (lMax < 0) throw DimensionError("lMax must be non-negative");
    Context ctx(n);
    std::vector<std::pair<int, PhaseExpr>> out;
    PhaseExpr hbar2 = PhaseExpr::hbar(ctx).intPow(2);
    for (int l = 0; l <= lMax; ++l) {
        Rational e = makeRational(static_cast<long>(l) * (l + n - 1), 2);
        out.emplace_back(l, hbar2.scaled(GaussianRational(e)));
    }
    return out;
}

PhaseExpr eomResidual(int n, int a) {
    Context ctx(n);
    if (a < 1 || a > n) throw DimensionError("index out of range");
    auto model = sphereModel(n);
    PhaseExpr res = poisson(PhaseExpr::p(ctx, a), model->hClassical);
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
            res += half(ctx) * model->gUpper[b][c].derive(Var::x(a)) * PhaseExpr::p(ctx, b + 1) *
                   PhaseExpr::p(ctx, c + 1);
    return res;
}

PhaseExpr nambuVelocityFactor(int n) {
    if (n < 2) throw DimensionError("velocity factor needs n >= 2");
    Context ctx(n);
    PhaseExpr denom = PhaseExpr::one(ctx);
    for (int a = 2; a <= n - 1; ++a) denom *= PhaseExpr::s(ctx) * PhaseExpr::p(ctx, a);
    PhaseExpr sign = PhaseExpr::fromRational(ctx, Rational((n - 1) % 2 == 0 ? 1 : -1));
    return divide(sign, denom);
}

} // namespace psalg
