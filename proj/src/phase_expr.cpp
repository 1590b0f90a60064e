#include "psalg/phase_expr.hpp"

#include <cassert>

namespace psalg {

PhaseExpr::PhaseExpr(Poly numer, Poly denom) : numer_(std::move(numer)), denom_(std::move(denom)) {
    requireSameContext(numer_.context(), denom_.context());
    if (denom_.isZero()) throw DivisionByZeroError();
    if (!denom_.isSFree())
        throw Error("internal: denominator contains s before rationalization");
    if (!denom_.isIFree())
        throw Error("internal: denominator contains i before rationalization");
    if (!denom_.isHbarFree()) throw HbarDenominatorError();
    reduce();
}

bool PhaseExpr::isPolynomial() const {
    return denom_.termCount() == 1 && denom_.leading().first.isUnit();
}

void PhaseExpr::reduce() {
    if (numer_.isZero()) {
        denom_ = Poly::one(context());
        return;
    }
    if (denom_.termCount() == 1 && denom_.leading().first.isUnit()) {
        // Constant denominator: fold it into the numerator.
        const GaussianRational& c = denom_.leading().second;
        if (!(c.re == 1 && c.im == 0)) {
            numer_ = numer_.scaled(GaussianRational(1) / c);
            denom_ = Poly::one(context());
        }
        return;
    }
    // Denominators produced by the quantum pipeline are powers of
    // (x^2 + ... - 1); cancellation then never has to divide the
    // denominator, and no content pass is needed.
    if (auto kOpt = denom_.asNegUPower()) {
        int k = *kOpt;
        const Poly& nu = Poly::negUPower(context(), 1);
        while (k > 0 && numer_.maybeDivisibleByU()) {
            auto qn = numer_.divExact(nu);
            if (!qn) break;
            numer_ = std::move(*qn);
            --k;
        }
        denom_ = Poly::negUPower(context(), k);
        return;
    }
    // Common monomial factor over x/p slots.
    Monomial gn = numer_.monomialGcdXP();
    if (gn.grade() != 0) {
        Monomial gd = denom_.monomialGcdXP();
        Monomial g;
        bool any = false;
        for (int i = 0; i < kMaxDimension; ++i) {
            g.xExp[i] = std::min(gn.xExp[i], gd.xExp[i]);
            g.pExp[i] = std::min(gn.pExp[i], gd.pExp[i]);
            any = any || g.xExp[i] > 0 || g.pExp[i] > 0;
        }
        if (any) {
            numer_ = numer_.divMonomialXP(g);
            denom_ = denom_.divMonomialXP(g);
        }
    }
    // u-power cancellation.
    if (denom_.degX() >= 2) {
        const Poly uPoly = Poly::u(context());
        while (numer_.maybeDivisibleByU() && denom_.maybeDivisibleByU()) {
            auto qd = denom_.divExact(uPoly);
            if (!qd) break;
            auto qn = numer_.divExact(uPoly);
            if (!qn) break;
            denom_ = std::move(*qd);
            numer_ = std::move(*qn);
        }
    }
    // Scale so the denominator is a primitive integer polynomial with a
    // positive leading coefficient.
    Rational c = denom_.content();
    if (denom_.leading().second.re < 0) c = -c;
    if (c != 1) {
        GaussianRational inv(Rational(1) / c);
        denom_ = denom_.scaled(inv);
        numer_ = numer_.scaled(inv);
    }
}

PhaseExpr PhaseExpr::operator-() const {
    PhaseExpr r(context());
    r.numer_ = -numer_;
    r.denom_ = denom_;
    return r;
}

// Combines fractions over the smaller common denominator when one
// denominator divides the other, avoiding a blowup-then-cancel round trip.
void PhaseExpr::combine(const PhaseExpr& o, bool subtract) {
    requireSameContext(context(), o.context());
    if (o.numer_.isZero()) return;
    if (numer_.isZero()) {
        numer_ = subtract ? -o.numer_ : o.numer_;
        denom_ = o.denom_;
        return;
    }
    if (denom_ == o.denom_) {
        if (subtract)
            numer_ -= o.numer_;
        else
            numer_ += o.numer_;
    } else if (auto q = o.denom_.divExact(denom_)) {
        numer_ = numer_ * *q;
        if (subtract)
            numer_ -= o.numer_;
        else
            numer_ += o.numer_;
        denom_ = o.denom_;
    } else if (auto r = denom_.divExact(o.denom_)) {
        Poly scaledOther = o.numer_ * *r;
        if (subtract)
            numer_ -= scaledOther;
        else
            numer_ += scaledOther;
    } else {
        Poly cross = o.numer_ * denom_;
        numer_ = numer_ * o.denom_;
        if (subtract)
            numer_ -= cross;
        else
            numer_ += cross;
        denom_ = denom_ * o.denom_;
    }
    reduce();
}

PhaseExpr& PhaseExpr::operator+=(const PhaseExpr& o) {
    combine(o, false);
    return *this;
}

PhaseExpr& PhaseExpr::operator-=(const PhaseExpr& o) {
    combine(o, true);
    return *this;
}

PhaseExpr& PhaseExpr::operator*=(const PhaseExpr& o) {
    requireSameContext(context(), o.context());
    if (numer_.isZero()) return *this;
    if (o.numer_.isZero()) {
        numer_ = Poly::zero(context());
        denom_ = Poly::one(context());
        return *this;
    }
    numer_ = numer_ * o.numer_;
    denom_ = denom_ * o.denom_;
    reduce();
    return *this;
}

PhaseExpr PhaseExpr::scaled(const GaussianRational& c) const {
    PhaseExpr r(context());
    r.numer_ = numer_.scaled(c);
    r.denom_ = denom_;
    r.reduce();
    return r;
}

PhaseExpr PhaseExpr::intPow(int k) const {
    if (k < 0) throw Error("intPow requires a non-negative exponent");
    PhaseExpr result = one(context());
    PhaseExpr base = *this;
    while (k > 0) {
        if (k & 1) result *= base;
        if ((k >>= 1) > 0) base *= base;
    }
    return result;
}

PhaseExpr PhaseExpr::derive(Var v) const {
    requireVar(context(), v);
    const Context& ctx = context();

    auto [a, b] = numer_.splitS();
    Poly dA = a.deriveFormal(v);
    Poly dB = b.deriveFormal(v);
    Poly sP = Poly::s(ctx);

    if (v.kind == Var::Kind::P) {
        // No s chain rule and momentum-free denominators never differentiate
        // away, but general denominators may carry p.
        if (denom_.isPFree()) return PhaseExpr(dA + dB * sP, denom_);
        Poly dDen = denom_.deriveFormal(v);
        return PhaseExpr((dA + dB * sP) * denom_ - numer_ * dDen, denom_ * denom_);
    }

    // x-derivative. Denominators in the quantum pipeline are (-u)^k, for
    // which everything is closed-form: d/dx_a [n / (-u)^k]
    //   = [ (A' + B' s) (-u)^1 ... ] / (-u)^{k+1} with du = -2 x_a dx_a and
    //     ds = -x_a s / u = x_a s / (-u).
    if (auto k = denom_.asNegUPower()) {
        Poly xa = Poly::variable(ctx, v);
        const Poly& nu = Poly::negUPower(ctx, 1);
        Poly resNum = (dA + dB * sP) * nu + b * xa * sP;
        if (*k > 0) {
            Poly scaledN = numer_.scaled(GaussianRational(Rational(-2 * *k)));
            resNum += scaledN * xa;
        }
        return PhaseExpr(std::move(resNum), Poly::negUPower(ctx, *k + 1));
    }

    Poly dDen = denom_.deriveFormal(v);
    Poly dNum(ctx);
    Poly dNumDen = Poly::one(ctx);
    if (b.isZero()) {
        dNum = dA;
    } else {
        // d(B s)/dx_a = dB s - B x_a s / u.
        Poly uP = Poly::u(ctx);
        Poly xa = Poly::variable(ctx, v);
        dNum = (dA + dB * sP) * uP - b * xa * sP;
        dNumDen = uP;
    }

    // (n/d)' = (n' d - n d') / d^2 with n' = dNum/dNumDen.
    Poly resNum = dNum * denom_ - numer_ * dDen * dNumDen;
    Poly resDen = dNumDen * denom_ * denom_;
    return PhaseExpr(std::move(resNum), std::move(resDen));
}

bool PhaseExpr::equals(const PhaseExpr& o) const {
    requireSameContext(context(), o.context());
    Poly lhs = numer_ * o.denom_;
    Poly rhs = o.numer_ * denom_;
    return (lhs - rhs).isZero();
}

PhaseExpr PhaseExpr::classicalLimit() const {
    PhaseExpr r(context());
    r.numer_ = numer_.classicalPart();
    r.denom_ = denom_;
    r.reduce();
    return r;
}

PhaseExpr PhaseExpr::conjugate() const {
    PhaseExpr r(context());
    r.numer_ = numer_.conjugated();
    r.denom_ = denom_;
    r.reduce();
    return r;
}

PhaseExpr PhaseExpr::divIHbar(int k) const {
    PhaseExpr r(context());
    // 1/i^k = (-i)^k; reduce mod 4.
    static const GaussianRational tbl[4] = {
        GaussianRational(1),
        GaussianRational(Rational(0), Rational(-1)),
        GaussianRational(-1),
        GaussianRational(Rational(0), Rational(1)),
    };
    r.numer_ = numer_.divHbar(k).scaled(tbl[k % 4]);
    r.denom_ = denom_;
    r.reduce();
    return r;
}

PhaseExpr divide(const PhaseExpr& a, const PhaseExpr& b) {
    requireSameContext(a.context(), b.context());
    if (b.isZero()) throw DivisionByZeroError();
    const Context& ctx = a.context();

    Poly num = a.numer() * b.denom();
    Poly den = a.denom() * b.numer();

    // Rationalize s: 1/(A + B s) = (A - B s) / (A^2 - B^2 u).
    if (!den.isSFree()) {
        auto [dA, dB] = den.splitS();
        Poly sP = Poly::s(ctx);
        Poly conjugateS = dA - dB * sP;
        num = num * conjugateS;
        den = dA * dA - dB * dB * Poly::u(ctx);
        assert(den.isSFree());
    }
    // Rationalize i: multiply by the complex conjugate.
    if (!den.isIFree()) {
        Poly denConj = den.conjugated();
        num = num * denConj;
        den = den * denConj;
        assert(den.isIFree());
    }
    if (den.isZero()) throw DivisionByZeroError();
    if (!den.isHbarFree()) throw HbarDenominatorError();
    return PhaseExpr(std::move(num), std::move(den));
}

GaussianRational PhaseExpr::evalExact(const EvalPoint& point) const {
    const Context& ctx = context();
    std::vector<Rational> xs(ctx.dim(), Rational(0)), ps(ctx.dim(), Rational(0));
    for (const auto& [v, val] : point.values) {
        requireVar(ctx, v);
        (v.kind == Var::Kind::X ? xs : ps)[v.index - 1] = val;
    }
    Rational uVal(1);
    for (const auto& q : xs) uVal -= q * q;

    Rational sVal(0);
    if (!numer_.isSFree()) {
        if (uVal < 0) throw NegativeUError();
        // Exact square root: numerator and denominator must both be squares.
        Int num = uVal.get_num(), den = uVal.get_den();
        if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0)
            throw NonSquareUError();
        Int rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        sVal = makeRational(rn, rd);
    }

    GaussianRational denVal = denom_.evalExact(xs, ps, point.hbarVal, sVal);
    if (denVal.isZero()) throw ZeroDenominatorError();
    return numer_.evalExact(xs, ps, point.hbarVal, sVal) / denVal;
}

std::complex<double> PhaseExpr::evalFloat(const EvalPoint& point) const {
    const Context& ctx = context();
    std::vector<double> xs(ctx.dim(), 0.0), ps(ctx.dim(), 0.0);
    for (const auto& [v, val] : point.values) {
        requireVar(ctx, v);
        (v.kind == Var::Kind::X ? xs : ps)[v.index - 1] = val.get_d();
    }
    double uVal = 1.0;
    for (double q : xs) uVal -= q * q;
    double sVal = 0.0;
    if (!numer_.isSFree()) {
        if (uVal < 0) throw NegativeUError();
        sVal = std::sqrt(uVal);
    }
    double dr, di;
    denom_.evalFloat(xs, ps, point.hbarVal.get_d(), sVal, dr, di);
    std::complex<double> denVal(dr, di);
    if (denVal == std::complex<double>(0.0, 0.0)) throw ZeroDenominatorError();
    double nr, ni;
    numer_.evalFloat(xs, ps, point.hbarVal.get_d(), sVal, nr, ni);
    return std::complex<double>(nr, ni) / denVal;
}

} // namespace psalg
