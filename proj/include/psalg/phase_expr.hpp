#pragma once

#include <complex>
#include <map>
#include <optional>

#include "psalg/poly.hpp"

namespace psalg {

// A point for evaluation; variables not listed default to 0.
struct EvalPoint {
    std::map<Var, Rational> values;
    Rational hbarVal = Rational(1);
};

// Exact phase-space expression: a fraction numer/denom over the differential
// ring, with denom free of s, i and hbar and its leading coefficient
// positive. Equality is by cross-multiplication, not by unique form.
class PhaseExpr {
public:
    explicit PhaseExpr(const Context& ctx) : numer_(Poly::zero(ctx)), denom_(Poly::one(ctx)) {}
    PhaseExpr(Poly numer, Poly denom);

    static PhaseExpr zero(const Context& ctx) { return PhaseExpr(ctx); }
    static PhaseExpr one(const Context& ctx) { return fromPoly(Poly::one(ctx)); }
    static PhaseExpr constant(const Context& ctx, const GaussianRational& c) {
        return fromPoly(Poly::constant(ctx, c));
    }
    static PhaseExpr fromRational(const Context& ctx, const Rational& q) {
        return constant(ctx, GaussianRational(q));
    }
    static PhaseExpr fromPoly(Poly p) {
        Poly one = Poly::one(p.context());
        return PhaseExpr(std::move(p), std::move(one));
    }
    static PhaseExpr variable(const Context& ctx, Var v) { return fromPoly(Poly::variable(ctx, v)); }
    static PhaseExpr x(const Context& ctx, int a) { return variable(ctx, Var::x(a)); }
    static PhaseExpr p(const Context& ctx, int a) { return variable(ctx, Var::p(a)); }
    static PhaseExpr hbar(const Context& ctx) { return fromPoly(Poly::hbar(ctx)); }
    static PhaseExpr imaginaryUnit(const Context& ctx) {
        return constant(ctx, GaussianRational::imaginaryUnit());
    }
    static PhaseExpr s(const Context& ctx) { return fromPoly(Poly::s(ctx)); }
    static PhaseExpr u(const Context& ctx) { return fromPoly(Poly::u(ctx)); }

    const Poly& numer() const { return numer_; }
    const Poly& denom() const { return denom_; }
    const Context& context() const { return numer_.context(); }

    bool isZero() const { return numer_.isZero(); }
    bool isPolynomial() const;

    PhaseExpr operator-() const;
    PhaseExpr& operator+=(const PhaseExpr& o);
    PhaseExpr& operator-=(const PhaseExpr& o);
    PhaseExpr& operator*=(const PhaseExpr& o);
    friend PhaseExpr operator+(PhaseExpr a, const PhaseExpr& b) { return a += b; }
    friend PhaseExpr operator-(PhaseExpr a, const PhaseExpr& b) { return a -= b; }
    friend PhaseExpr operator*(PhaseExpr a, const PhaseExpr& b) { return a *= b; }

    PhaseExpr scaled(const GaussianRational& c) const;
    PhaseExpr intPow(int k) const;

    // Exact partial derivative with ds/dx_a = -x_a s / u, ds/dp_a = 0.
    PhaseExpr derive(Var v) const;

    // Cross-multiplied exact equality.
    bool equals(const PhaseExpr& o) const;

    // Minimum hbar exponent of the numerator; nullopt means the expression
    // is identically zero (order "infinite").
    std::optional<int> hbarOrder() const { return numer_.hbarOrder(); }

    PhaseExpr classicalLimit() const;
    PhaseExpr conjugate() const;

    GaussianRational evalExact(const EvalPoint& point) const;
    std::complex<double> evalFloat(const EvalPoint& point) const;

    // Exact division by (i*hbar)^k on the numerator; every numerator term
    // must carry hbar^k (used by the Moyal bracket, where it always does).
    PhaseExpr divIHbar(int k = 1) const;

private:
    void reduce();
    void combine(const PhaseExpr& o, bool subtract);

    Poly numer_;
    Poly denom_;
};

// a/b with s and i rationalized out of the denominator.
PhaseExpr divide(const PhaseExpr& a, const PhaseExpr& b);

inline PhaseExpr inverse(const PhaseExpr& a) { return divide(PhaseExpr::one(a.context()), a); }

} // namespace psalg
