#include "psalg/poly.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <mutex>

namespace psalg {

namespace {

struct TermMonomialGreater {
    bool operator()(const Poly::Term& a, const Monomial& m) const {
        return compareMonomials(a.first, m) > 0;
    }
};

} // namespace

Poly Poly::constant(const Context& ctx, const GaussianRational& c) {
    Poly p(ctx);
    if (!c.isZero()) p.terms_.emplace_back(Monomial{}, c);
    return p;
}

Poly Poly::variable(const Context& ctx, Var v) {
    requireVar(ctx, v);
    Monomial m;
    if (v.kind == Var::Kind::X)
        m.xExp[v.index - 1] = 1;
    else
        m.pExp[v.index - 1] = 1;
    Poly p(ctx);
    p.terms_.emplace_back(m, GaussianRational(1));
    return p;
}

Poly Poly::hbar(const Context& ctx) {
    Monomial m;
    m.hbarExp = 1;
    Poly p(ctx);
    p.terms_.emplace_back(m, GaussianRational(1));
    return p;
}

Poly Poly::s(const Context& ctx) {
    Monomial m;
    m.sExp = 1;
    Poly p(ctx);
    p.terms_.emplace_back(m, GaussianRational(1));
    return p;
}

Poly Poly::u(const Context& ctx) {
    Poly p = one(ctx);
    for (int a = 1; a <= ctx.dim(); ++a) {
        Monomial m;
        m.xExp[a - 1] = 2;
        p.addTerm(m, GaussianRational(-1));
    }
    return p;
}

const Poly& Poly::negUPower(const Context& ctx, int k) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<Poly>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(ctx.dim(), k);
    auto it = cache.find(key);
    if (it == cache.end()) {
        Poly value = (-u(ctx)).pow(k);
        it = cache.emplace(key, std::make_unique<Poly>(std::move(value))).first;
    }
    return *it->second;
}

std::optional<int> Poly::asNegUPower() const {
    if (terms_.empty()) return std::nullopt;
    const Monomial& lead = terms_.front().first;
    if (lead.sExp != 0 || lead.hbarExp != 0 || lead.pDegree() != 0) return std::nullopt;
    const int k = lead.xExp[0] / 2;
    if (lead.xExp[0] != 2 * k) return std::nullopt;
    const Poly& candidate = negUPower(ctx_, k);
    if (terms_.size() != candidate.terms_.size()) return std::nullopt;
    return terms_ == candidate.terms_ ? std::optional<int>(k) : std::nullopt;
}

void Poly::addTerm(const Monomial& m, const GaussianRational& c) {
    if (c.isZero()) return;
    assert(m.sExp <= 1);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, TermMonomialGreater{});
    if (it != terms_.end() && it->first == m) {
        it->second += c;
        if (it->second.isZero()) terms_.erase(it);
    } else {
        terms_.insert(it, Term{m, c});
    }
}

Poly Poly::operator-() const {
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, -c);
    return r;
}

void Poly::mergeInPlace(const Terms& src, bool negate) {
    if (src.empty()) return;
    if (terms_.empty()) {
        terms_.reserve(src.size());
        for (const auto& [m, c] : src) terms_.emplace_back(m, negate ? -c : c);
        return;
    }
    Terms merged;
    merged.reserve(terms_.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < src.size()) {
        int cmp = compareMonomials(terms_[i].first, src[j].first);
        if (cmp > 0) {
            merged.push_back(std::move(terms_[i++]));
        } else if (cmp < 0) {
            merged.emplace_back(src[j].first, negate ? -src[j].second : src[j].second);
            ++j;
        } else {
            Term t = std::move(terms_[i++]);
            if (negate)
                t.second -= src[j].second;
            else
                t.second += src[j].second;
            ++j;
            if (!t.second.isZero()) merged.push_back(std::move(t));
        }
    }
    while (i < terms_.size()) merged.push_back(std::move(terms_[i++]));
    for (; j < src.size(); ++j)
        merged.emplace_back(src[j].first, negate ? -src[j].second : src[j].second);
    terms_ = std::move(merged);
}

Poly& Poly::operator+=(const Poly& o) {
    requireSameContext(ctx_, o.ctx_);
    mergeInPlace(o.terms_, false);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    requireSameContext(ctx_, o.ctx_);
    mergeInPlace(o.terms_, true);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    requireSameContext(a.ctx_, b.ctx_);
    Poly r(a.ctx_);
    if (a.isZero() || b.isZero()) return r;

    // Iterate the shorter operand on the outside; each inner pass is a
    // monomial shift of the longer one, which keeps the order and merges in
    // linearly. s^2 hits leave the sorted stream and come back via u.
    const Poly& outer = a.termCount() <= b.termCount() ? a : b;
    const Poly& inner = a.termCount() <= b.termCount() ? b : a;
    const Poly* uPoly = nullptr;
    Poly uCache(a.ctx_);

    Poly::Terms shifted;
    for (const auto& [mo, co] : outer.terms_) {
        shifted.clear();
        shifted.reserve(inner.terms_.size());
        Poly rewrite(a.ctx_);
        for (const auto& [mi, ci] : inner.terms_) {
            Monomial m = mulExponents(mi, mo);
            GaussianRational c = ci;
            c *= co;
            if (m.sExp == 2) {
                m.sExp = 0;
                if (uPoly == nullptr) {
                    uCache = Poly::u(a.ctx_);
                    uPoly = &uCache;
                }
                for (const auto& [mu, cu] : uPoly->terms_) {
                    GaussianRational cc = c;
                    cc *= cu;
                    rewrite.addTerm(mulExponents(m, mu), cc);
                }
            } else {
                shifted.emplace_back(m, std::move(c));
            }
        }
        r.mergeInPlace(shifted, false);
        if (!rewrite.isZero()) r.mergeInPlace(rewrite.terms_, false);
    }
    return r;
}

Poly Poly::scaled(const GaussianRational& c) const {
    Poly r(ctx_);
    if (c.isZero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& [m, coeff] : terms_) {
        GaussianRational cc = coeff;
        cc *= c;
        r.terms_.emplace_back(m, std::move(cc));
    }
    return r;
}

Poly Poly::mulMonomial(const Monomial& m, const GaussianRational& c) const {
    Poly single(ctx_);
    single.addTerm(m, c);
    return *this * single;
}

Poly Poly::pow(int k) const {
    assert(k >= 0);
    Poly result = one(ctx_);
    Poly base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        base = (k >>= 1) > 0 ? base * base : base;
    }
    return result;
}

Poly Poly::deriveFormal(Var v) const {
    requireVar(ctx_, v);
    const int idx = v.index - 1;
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    // Decrementing one exponent preserves the term order; zero-exponent
    // terms just drop out.
    for (const auto& [m, c] : terms_) {
        const std::int16_t e = (v.kind == Var::Kind::X) ? m.xExp[idx] : m.pExp[idx];
        if (e == 0) continue;
        Monomial d = m;
        if (v.kind == Var::Kind::X)
            d.xExp[idx] = static_cast<std::int16_t>(e - 1);
        else
            d.pExp[idx] = static_cast<std::int16_t>(e - 1);
        GaussianRational cc = c;
        cc *= GaussianRational(Rational(static_cast<long>(e)));
        r.terms_.emplace_back(d, std::move(cc));
    }
    return r;
}

std::pair<Poly, Poly> Poly::splitS() const {
    Poly a(ctx_), b(ctx_);
    for (const auto& [m, c] : terms_) {
        if (m.sExp == 0) {
            a.terms_.emplace_back(m, c);
        } else {
            Monomial stripped = m;
            stripped.sExp = 0;
            b.terms_.emplace_back(stripped, c);
        }
    }
    return {std::move(a), std::move(b)};
}

bool Poly::maybeDivisibleByU() const {
    // Witness point x1 = 1, other x = 0 (so u = 0), with momenta and hbar at
    // distinct primes; u | A + B s iff u | A and u | B, and a nonzero value
    // of either component here rules divisibility out.
    static const unsigned long primes[kMaxDimension] = {3, 5, 7, 11, 13, 17, 19, 23};
    Rational sumA(0), sumB(0);
    Int factor;
    Int powTmp;
    for (const auto& [m, c] : terms_) {
        bool zero = false;
        for (int a = 1; a < kMaxDimension; ++a)
            if (m.xExp[a] > 0) {
                zero = true;
                break;
            }
        if (zero) continue;
        factor = 1;
        for (int a = 0; a < kMaxDimension; ++a) {
            if (m.pExp[a] == 0) continue;
            mpz_ui_pow_ui(powTmp.get_mpz_t(), primes[a], static_cast<unsigned long>(m.pExp[a]));
            factor *= powTmp;
        }
        if (m.hbarExp > 0) {
            mpz_ui_pow_ui(powTmp.get_mpz_t(), 29, static_cast<unsigned long>(m.hbarExp));
            factor *= powTmp;
        }
        Rational& target = (m.sExp == 0) ? sumA : sumB;
        target += c.re * factor;
        // The imaginary part gets its own prime weight so real and imaginary
        // contributions cannot cancel each other.
        if (mpq_sgn(c.im.get_mpq_t()) != 0) target += c.im * factor * 31;
    }
    return mpq_sgn(sumA.get_mpq_t()) == 0 && mpq_sgn(sumB.get_mpq_t()) == 0;
}

std::optional<Poly> Poly::divExact(const Poly& divisor) const {
    assert(!divisor.isZero());
    requireSameContext(ctx_, divisor.ctx_);
    Poly quotient(ctx_);
    Poly rem = *this;
    const auto& [ltM, ltC] = divisor.leading();
    while (!rem.isZero()) {
        const auto& [rm, rc] = rem.leading();
        if (!ltM.divides(rm)) return std::nullopt;
        Monomial qm = divExponents(rm, ltM);
        GaussianRational qc = rc / ltC;
        quotient.addTerm(qm, qc);
        rem -= divisor.mulMonomial(qm, qc);
    }
    return quotient;
}

Rational Poly::content() const {
    if (isZero()) return Rational(1);
    Int numGcd(0), denLcm(1);
    auto absorb = [&](const Rational& q) {
        if (mpq_sgn(q.get_mpq_t()) == 0) return;
        Int n = abs(q.get_num());
        Int d = q.get_den();
        mpz_gcd(numGcd.get_mpz_t(), numGcd.get_mpz_t(), n.get_mpz_t());
        mpz_lcm(denLcm.get_mpz_t(), denLcm.get_mpz_t(), d.get_mpz_t());
    };
    for (const auto& [m, c] : terms_) {
        absorb(c.re);
        absorb(c.im);
    }
    return makeRational(numGcd, denLcm);
}

Monomial Poly::monomialGcdXP() const {
    Monomial g;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (first) {
            g.xExp = m.xExp;
            g.pExp = m.pExp;
            first = false;
        } else {
            for (int i = 0; i < kMaxDimension; ++i) {
                g.xExp[i] = std::min(g.xExp[i], m.xExp[i]);
                g.pExp[i] = std::min(g.pExp[i], m.pExp[i]);
            }
        }
        if (g.grade() == 0) break;
    }
    g.hbarExp = 0;
    g.sExp = 0;
    return g;
}

Poly Poly::divMonomialXP(const Monomial& m) const {
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& [mono, c] : terms_) {
        Monomial q = mono;
        for (int i = 0; i < kMaxDimension; ++i) {
            q.xExp[i] = static_cast<std::int16_t>(q.xExp[i] - m.xExp[i]);
            q.pExp[i] = static_cast<std::int16_t>(q.pExp[i] - m.pExp[i]);
            assert(q.xExp[i] >= 0 && q.pExp[i] >= 0);
        }
        r.terms_.emplace_back(q, c);
    }
    return r;
}

int Poly::degP() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.pDegree());
    return d;
}

int Poly::degX() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.xDegree());
    return d;
}

std::optional<int> Poly::hbarOrder() const {
    if (isZero()) return std::nullopt;
    int best = -1;
    for (const auto& [m, c] : terms_) {
        if (best < 0 || m.hbarExp < best) best = m.hbarExp;
        if (best == 0) break;
    }
    return best;
}

bool Poly::isSFree() const {
    for (const auto& [m, c] : terms_)
        if (m.sExp != 0) return false;
    return true;
}

bool Poly::isIFree() const {
    for (const auto& [m, c] : terms_)
        if (mpq_sgn(c.im.get_mpq_t()) != 0) return false;
    return true;
}

bool Poly::isHbarFree() const {
    for (const auto& [m, c] : terms_)
        if (m.hbarExp != 0) return false;
    return true;
}

bool Poly::isPFree() const {
    for (const auto& [m, c] : terms_)
        if (m.pDegree() != 0) return false;
    return true;
}

Poly Poly::conjugated() const {
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, c.conj());
    return r;
}

Poly Poly::classicalPart() const {
    Poly r(ctx_);
    for (const auto& [m, c] : terms_)
        if (m.hbarExp == 0) r.terms_.emplace_back(m, c);
    return r;
}

Poly Poly::divHbar(int k) const {
    Poly r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
        if (m.hbarExp < k) throw Error("internal: inexact division by hbar");
        Monomial q = m;
        q.hbarExp = static_cast<std::int16_t>(q.hbarExp - k);
        r.terms_.emplace_back(q, c);
    }
    return r;
}

GaussianRational Poly::evalExact(const std::vector<Rational>& xVals,
                                 const std::vector<Rational>& pVals,
                                 const Rational& hbarVal, const Rational& sVal) const {
    GaussianRational total;
    for (const auto& [m, c] : terms_) {
        Rational factor(1);
        auto powInto = [&](const Rational& base, int e) {
            Rational b = base;
            int k = e;
            while (k > 0) {
                if (k & 1) factor *= b;
                if ((k >>= 1) > 0) b *= b;
            }
        };
        bool zero = false;
        for (int a = 0; a < ctx_.dim() && !zero; ++a) {
            if (m.xExp[a] > 0) {
                if (xVals[a] == 0) { zero = true; break; }
                powInto(xVals[a], m.xExp[a]);
            }
            if (m.pExp[a] > 0) {
                if (pVals[a] == 0) { zero = true; break; }
                powInto(pVals[a], m.pExp[a]);
            }
        }
        if (zero) continue;
        if (m.hbarExp > 0) {
            if (hbarVal == 0) continue;
            powInto(hbarVal, m.hbarExp);
        }
        if (m.sExp > 0) {
            if (sVal == 0) continue;
            powInto(sVal, m.sExp);
        }
        total += GaussianRational(c.re * factor, c.im * factor);
    }
    return total;
}

void Poly::evalFloat(const std::vector<double>& xVals, const std::vector<double>& pVals,
                     double hbarVal, double sVal, double& outRe, double& outIm) const {
    outRe = 0.0;
    outIm = 0.0;
    for (const auto& [m, c] : terms_) {
        double factor = 1.0;
        for (int a = 0; a < ctx_.dim(); ++a) {
            for (int e = 0; e < m.xExp[a]; ++e) factor *= xVals[a];
            for (int e = 0; e < m.pExp[a]; ++e) factor *= pVals[a];
        }
        for (int e = 0; e < m.hbarExp; ++e) factor *= hbarVal;
        for (int e = 0; e < m.sExp; ++e) factor *= sVal;
        outRe += c.re.get_d() * factor;
        outIm += c.im.get_d() * factor;
    }
}

} // namespace psalg
