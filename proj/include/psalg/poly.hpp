#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "psalg/context.hpp"
#include "psalg/monomial.hpp"
#include "psalg/rational.hpp"

namespace psalg {

// Element of Q(i)[hbar][x1..xN, p1..pN][s] / (s^2 - u), u = 1 - sum x_a^2.
// Terms live in a flat vector sorted leading-first with no zero
// coefficients; arithmetic is merge-based. sExp <= 1 always: s^2 is
// rewritten to u eagerly during multiplication.
class Poly {
public:
    using Term = std::pair<Monomial, GaussianRational>;
    using Terms = std::vector<Term>;

    explicit Poly(const Context& ctx) : ctx_(ctx) {}

    static Poly zero(const Context& ctx) { return Poly(ctx); }
    static Poly constant(const Context& ctx, const GaussianRational& c);
    static Poly one(const Context& ctx) { return constant(ctx, GaussianRational(1)); }
    static Poly variable(const Context& ctx, Var v);
    static Poly hbar(const Context& ctx);
    static Poly s(const Context& ctx);
    // u = 1 - x1^2 - ... - xN^2
    static Poly u(const Context& ctx);
    // (-u)^k = (x1^2 + ... + xN^2 - 1)^k, the positive-leading form every
    // u-power denominator takes; cached per (n, k).
    static const Poly& negUPower(const Context& ctx, int k);
    // k such that *this == (-u)^k, if any.
    std::optional<int> asNegUPower() const;

    const Context& context() const { return ctx_; }
    const Terms& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    std::size_t termCount() const { return terms_.size(); }

    // Leading term under the graded-lex order; poly must be nonzero.
    const Term& leading() const { return terms_.front(); }

    // Insertion-based; fine for construction, not for bulk arithmetic.
    void addTerm(const Monomial& m, const GaussianRational& c);

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);

    Poly scaled(const GaussianRational& c) const;
    Poly mulMonomial(const Monomial& m, const GaussianRational& c) const;
    Poly pow(int k) const;

    // d/dv treating s as an inert generator (the chain-rule contribution of
    // ds/dx comes in at the PhaseExpr level).
    Poly deriveFormal(Var v) const;

    // Splits into (A, B) with *this = A + B*s and both parts s-free.
    std::pair<Poly, Poly> splitS() const;

    // Exact multivariate division; nullopt when the divisor does not divide.
    std::optional<Poly> divExact(const Poly& divisor) const;

    // Fast necessary test for divisibility by u (equivalently -u): evaluates
    // both s-components at a fixed point of the u = 0 locus. False means
    // definitely not divisible; true means run the division.
    bool maybeDivisibleByU() const;

    // Positive rational c such that (*this)/c has coprime integer
    // coefficient entries; 1 for the zero poly.
    Rational content() const;

    // Componentwise-min exponent vector over all terms (x and p slots only;
    // hbar and s are never cancelled against denominators).
    Monomial monomialGcdXP() const;
    Poly divMonomialXP(const Monomial& m) const;

    int degP() const;
    int degX() const;
    // Minimum hbar exponent over terms; nullopt for the zero poly.
    std::optional<int> hbarOrder() const;

    bool isSFree() const;
    bool isIFree() const;
    bool isHbarFree() const;
    bool isPFree() const;

    Poly conjugated() const;
    // Substitute hbar = 0.
    Poly classicalPart() const;
    // Exact division by hbar^k; requires every term to carry hbar^k.
    Poly divHbar(int k) const;

    GaussianRational evalExact(const std::vector<Rational>& xVals,
                               const std::vector<Rational>& pVals,
                               const Rational& hbarVal, const Rational& sVal) const;
    void evalFloat(const std::vector<double>& xVals, const std::vector<double>& pVals,
                   double hbarVal, double sVal, double& outRe, double& outIm) const;

    bool operator==(const Poly& o) const { return ctx_ == o.ctx_ && terms_ == o.terms_; }

private:
    // Merges src into *this with the given sign; both sides sorted.
    void mergeInPlace(const Terms& src, bool negate);

    Context ctx_;
    Terms terms_;
};

} // namespace psalg
