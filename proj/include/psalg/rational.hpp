#pragma once

#include <gmpxx.h>

#include <string>

#include "psalg/error.hpp"

namespace psalg {

// Arbitrary-precision exact arithmetic. mpq_class keeps gcd(|num|, den) = 1
// and den > 0 as class invariants.
using Int = mpz_class;
using Rational = mpq_class;

inline Rational makeRational(long num, long den = 1) {
    if (den == 0) throw DivisionByZeroError();
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational makeRational(const Int& num, const Int& den) {
    if (den == 0) throw DivisionByZeroError();
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "a", "-a", "a/b".
inline Rational rationalFromString(const std::string& text) {
    Rational q;
    if (q.set_str(text, 10) != 0) throw Error("invalid rational literal: " + text);
    q.canonicalize();
    if (q.get_den() == 0) throw DivisionByZeroError();
    return q;
}

inline std::string toString(const Rational& q) {
    return q.get_str();
}

// Element of Q(i): re + i*im with exact rational parts, i^2 = -1.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(const Rational& realPart) : re(realPart), im(0) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(Rational realPart, Rational imagPart) : re(std::move(realPart)), im(std::move(imagPart)) {}
    GaussianRational(long realPart) : re(realPart), im(0) {}  // NOLINT(google-explicit-constructor)

    static GaussianRational imaginaryUnit() { return {Rational(0), Rational(1)}; }

    bool isZero() const { return re == 0 && im == 0; }
    bool isReal() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    // |z|^2 as a rational; positive unless z = 0.
    Rational normSquared() const { return re * re + im * im; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        if (mpq_sgn(o.im.get_mpq_t()) != 0) im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        if (mpq_sgn(o.im.get_mpq_t()) != 0) im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        // Real coefficients dominate in practice; keep that path allocation-light.
        if (mpq_sgn(im.get_mpq_t()) == 0) {
            if (mpq_sgn(o.im.get_mpq_t()) == 0) {
                re *= o.re;
                return *this;
            }
            im = re * o.im;
            re *= o.re;
            return *this;
        }
        if (mpq_sgn(o.im.get_mpq_t()) == 0) {
            re *= o.re;
            im *= o.re;
            return *this;
        }
        Rational newRe = re * o.re - im * o.im;
        Rational newIm = re * o.im + im * o.re;
        re = std::move(newRe);
        im = std::move(newIm);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }

    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        if (b.isZero()) throw DivisionByZeroError();
        Rational n = b.normSquared();
        GaussianRational numer = a * b.conj();
        return {numer.re / n, numer.im / n};
    }

    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }
};

} // namespace psalg
