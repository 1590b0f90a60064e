#pragma once

#include <array>
#include <cstdint>

#include "psalg/context.hpp"

namespace psalg {

// Power product x^a p^b hbar^h s^e with e in {0,1}; s^2 is rewritten to
// u = 1 - sum x_a^2 eagerly, so e never reaches 2 in stored terms.
struct Monomial {
    std::array<std::int16_t, kMaxDimension> xExp{};
    std::array<std::int16_t, kMaxDimension> pExp{};
    std::int16_t hbarExp = 0;
    std::int16_t sExp = 0;

    int grade() const {
        int g = hbarExp + sExp;
        for (int a = 0; a < kMaxDimension; ++a) g += xExp[a] + pExp[a];
        return g;
    }

    int xDegree() const {
        int g = 0;
        for (int a = 0; a < kMaxDimension; ++a) g += xExp[a];
        return g;
    }

    int pDegree() const {
        int g = 0;
        for (int a = 0; a < kMaxDimension; ++a) g += pExp[a];
        return g;
    }

    bool isUnit() const { return grade() == 0; }

    // Componentwise divisibility (this | other).
    bool divides(const Monomial& other) const {
        if (hbarExp > other.hbarExp || sExp > other.sExp) return false;
        for (int a = 0; a < kMaxDimension; ++a)
            if (xExp[a] > other.xExp[a] || pExp[a] > other.pExp[a]) return false;
        return true;
    }

    bool operator==(const Monomial&) const = default;
};

// Graded lexicographic order with priority hbar > x1..xN > p1..pN > s.
// Returns <0, 0, >0.
inline int compareMonomials(const Monomial& a, const Monomial& b) {
    int ga = a.grade(), gb = b.grade();
    if (ga != gb) return ga < gb ? -1 : 1;
    if (a.hbarExp != b.hbarExp) return a.hbarExp < b.hbarExp ? -1 : 1;
    for (int i = 0; i < kMaxDimension; ++i)
        if (a.xExp[i] != b.xExp[i]) return a.xExp[i] < b.xExp[i] ? -1 : 1;
    for (int i = 0; i < kMaxDimension; ++i)
        if (a.pExp[i] != b.pExp[i]) return a.pExp[i] < b.pExp[i] ? -1 : 1;
    if (a.sExp != b.sExp) return a.sExp < b.sExp ? -1 : 1;
    return 0;
}

// Largest monomial first, so map.begin() is the leading term.
struct MonomialGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return compareMonomials(a, b) > 0;
    }
};

// Product of exponents; caller handles s^2 rewriting (see Poly::operator*).
inline Monomial mulExponents(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxDimension; ++i) {
        r.xExp[i] = static_cast<std::int16_t>(a.xExp[i] + b.xExp[i]);
        r.pExp[i] = static_cast<std::int16_t>(a.pExp[i] + b.pExp[i]);
    }
    r.hbarExp = static_cast<std::int16_t>(a.hbarExp + b.hbarExp);
    r.sExp = static_cast<std::int16_t>(a.sExp + b.sExp);
    return r;
}

// Quotient of exponents; requires b.divides(a).
inline Monomial divExponents(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxDimension; ++i) {
        r.xExp[i] = static_cast<std::int16_t>(a.xExp[i] - b.xExp[i]);
        r.pExp[i] = static_cast<std::int16_t>(a.pExp[i] - b.pExp[i]);
    }
    r.hbarExp = static_cast<std::int16_t>(a.hbarExp - b.hbarExp);
    r.sExp = static_cast<std::int16_t>(a.sExp - b.sExp);
    return r;
}

} // namespace psalg
