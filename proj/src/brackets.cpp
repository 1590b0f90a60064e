#include "psalg/brackets.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cstdint>
#include <map>
#include <numeric>

namespace psalg {

namespace {

using MultiIndex = std::array<std::int8_t, kMaxDimension>;

int totalOrder(const MultiIndex& mi) {
    int t = 0;
    for (int v : mi) t += v;
    return t;
}

// All multi-indices over n slots with total degree <= maxTotal, by level.
std::vector<MultiIndex> enumerateMultiIndices(int n, int maxTotal) {
    std::vector<MultiIndex> out;
    MultiIndex cur{};
    auto rec = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == n) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[slot] = static_cast<std::int8_t>(e);
            self(self, slot + 1, remaining - e);
        }
        cur[slot] = 0;
    };
    rec(rec, 0, maxTotal);
    return out;
}

Rational factorialProduct(const MultiIndex& mi) {
    Rational f(1);
    for (int v : mi)
        for (int k = 2; k <= v; ++k) f *= k;
    return f;
}

// i^n as a Gaussian rational.
GaussianRational iPow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return GaussianRational(1);
        case 1: return GaussianRational(Rational(0), Rational(1));
        case 2: return GaussianRational(-1);
        default: return GaussianRational(Rational(0), Rational(-1));
    }
}

void requireStarOperand(const PhaseExpr& f) {
    if (!f.denom().isPFree()) throw NonPolynomialMomentumDenominator();
}

PhaseExpr hbarPow(const Context& ctx, int n) {
    Monomial m;
    m.hbarExp = static_cast<std::int16_t>(n);
    Poly p(ctx);
    p.addTerm(m, GaussianRational(1));
    return PhaseExpr::fromPoly(std::move(p));
}

// Accumulates a sum of fractions bucketed by denominator, so no scaling or
// division happens per added term; buckets are combined once at the end,
// with u-power denominators recombined through the cached power table.
class FractionAccumulator {
public:
    explicit FractionAccumulator(const Context& ctx) : ctx_(ctx) {}

    void add(Poly n, Poly d) {
        if (n.isZero()) return;
        for (auto& [den, num] : buckets_) {
            if (den == d) {
                num += n;
                return;
            }
        }
        buckets_.emplace_back(std::move(d), std::move(n));
    }

    void add(const PhaseExpr& f) { add(f.numer(), f.denom()); }
    void sub(const PhaseExpr& f) { add(-f.numer(), f.denom()); }

    PhaseExpr take() {
        if (buckets_.empty()) return PhaseExpr::zero(ctx_);
        // All-u-power case: scale everything onto the largest power.
        bool allNu = true;
        int maxK = 0;
        std::vector<int> ks;
        ks.reserve(buckets_.size());
        for (const auto& [den, num] : buckets_) {
            auto k = den.asNegUPower();
            if (!k) {
                allNu = false;
                break;
            }
            ks.push_back(*k);
            maxK = std::max(maxK, *k);
        }
        if (allNu) {
            Poly total = Poly::zero(ctx_);
            for (std::size_t i = 0; i < buckets_.size(); ++i) {
                if (ks[i] == maxK)
                    total += buckets_[i].second;
                else
                    total += buckets_[i].second * Poly::negUPower(ctx_, maxK - ks[i]);
            }
            buckets_.clear();
            return PhaseExpr(std::move(total), Poly::negUPower(ctx_, maxK));
        }
        // General fold.
        Poly num = std::move(buckets_.front().second);
        Poly den = std::move(buckets_.front().first);
        for (std::size_t i = 1; i < buckets_.size(); ++i) {
            Poly& n = buckets_[i].second;
            Poly& d = buckets_[i].first;
            if (auto q = d.divExact(den)) {
                num = num * *q;
                num += n;
                den = std::move(d);
            } else if (auto r = den.divExact(d)) {
                num += n * *r;
            } else {
                num = num * d;
                num += n * den;
                den = den * d;
            }
        }
        buckets_.clear();
        return PhaseExpr(std::move(num), std::move(den));
    }

private:
    Context ctx_;
    std::vector<std::pair<Poly, Poly>> buckets_;  // (denominator, numerator)
};

// Mixed-derivative table d_x^a d_p^b h for |a| <= maxX, |b| <= maxP, built
// incrementally so each entry costs a single derivative.
class DerivativeTable {
public:
    DerivativeTable(const PhaseExpr& h, int maxX, int maxP) : ctx_(h.context()) {
        table_.emplace(Key{MultiIndex{}, MultiIndex{}}, h);
        const int n = ctx_.dim();
        for (const MultiIndex& beta : enumerateMultiIndices(n, maxP))
            for (const MultiIndex& alpha : enumerateMultiIndices(n, maxX))
                ensure(alpha, beta);
    }

    const PhaseExpr& at(const MultiIndex& alpha, const MultiIndex& beta) const {
        return table_.at(Key{alpha, beta});
    }

private:
    using Key = std::pair<MultiIndex, MultiIndex>;

    const PhaseExpr& ensure(const MultiIndex& alpha, const MultiIndex& beta) {
        auto it = table_.find(Key{alpha, beta});
        if (it != table_.end()) return it->second;
        // Reduce the p multi-index first, then the x one.
        for (int j = 0; j < ctx_.dim(); ++j) {
            if (beta[j] > 0) {
                MultiIndex prev = beta;
                --prev[j];
                const PhaseExpr& parent = ensure(alpha, prev);
                PhaseExpr d = parent.isZero() ? parent : parent.derive(Var::p(j + 1));
                return table_.emplace(Key{alpha, beta}, std::move(d)).first->second;
            }
        }
        for (int j = 0; j < ctx_.dim(); ++j) {
            if (alpha[j] > 0) {
                MultiIndex prev = alpha;
                --prev[j];
                const PhaseExpr& parent = ensure(prev, beta);
                PhaseExpr d = parent.isZero() ? parent : parent.derive(Var::x(j + 1));
                return table_.emplace(Key{alpha, beta}, std::move(d)).first->second;
            }
        }
        return table_.at(Key{alpha, beta});
    }

    Context ctx_;
    std::map<Key, PhaseExpr> table_;
};

// Jacobian determinant of 2N expressions with respect to (x1,p1,...,xN,pN),
// computed over polynomial row numerators after factoring out per-row common
// denominators, with memoized minors over column subsets. Layers are
// independent, so each is evaluated in parallel.
PhaseExpr jacobianOptimized(std::span<const PhaseExpr> args) {
    const Context& ctx = args.front().context();
    const int m = static_cast<int>(args.size());
    assert(m == 2 * ctx.dim());

    std::vector<Var> vars;
    vars.reserve(m);
    for (int a = 1; a <= ctx.dim(); ++a) {
        vars.push_back(Var::x(a));
        vars.push_back(Var::p(a));
    }

    const Poly unit = Poly::one(ctx);
    std::vector<std::vector<Poly>> rowNum(m);
    Poly denProduct = unit;
    for (int r = 0; r < m; ++r) {
        std::vector<PhaseExpr> entries;
        entries.reserve(m);
        for (int c = 0; c < m; ++c) entries.push_back(args[r].derive(vars[c]));
        // Distinct denominators in this row.
        std::vector<Poly> distinct;
        std::vector<int> which(m, -1);
        for (int c = 0; c < m; ++c) {
            const Poly& d = entries[c].denom();
            for (std::size_t k = 0; k < distinct.size(); ++k)
                if (distinct[k] == d) {
                    which[c] = static_cast<int>(k);
                    break;
                }
            if (which[c] < 0) {
                which[c] = static_cast<int>(distinct.size());
                distinct.push_back(d);
            }
        }
        rowNum[r].reserve(m);
        if (distinct.size() == 1 && distinct.front() == unit) {
            for (int c = 0; c < m; ++c) rowNum[r].push_back(entries[c].numer());
            continue;
        }
        for (int c = 0; c < m; ++c) {
            Poly scaledNum = entries[c].numer();
            for (std::size_t k = 0; k < distinct.size(); ++k)
                if (static_cast<int>(k) != which[c]) scaledNum = scaledNum * distinct[k];
            rowNum[r].push_back(std::move(scaledNum));
        }
        for (const Poly& d : distinct) denProduct = denProduct * d;
    }

    // minors[S] = det of the block formed by the last |S| rows and columns S.
    const std::uint32_t full = (m >= 32) ? 0xffffffffu : ((1u << m) - 1u);
    std::vector<Poly> minors(static_cast<std::size_t>(full) + 1, Poly::zero(ctx));
    for (int c = 0; c < m; ++c) minors[1u << c] = rowNum[m - 1][c];
    for (int size = 2; size <= m; ++size) {
        std::vector<std::uint32_t> masks;
        for (std::uint32_t mask = 0; mask <= full; ++mask)
            if (std::popcount(mask) == size) masks.push_back(mask);
        const int row = m - size;
        #pragma omp parallel for schedule(dynamic) if (masks.size() >= 8)
        for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(masks.size()); ++idx) {
            const std::uint32_t mask = masks[idx];
            Poly acc = Poly::zero(ctx);
            int j = 0;
            for (int c = 0; c < m; ++c) {
                if (!(mask & (1u << c))) continue;
                if (!rowNum[row][c].isZero() && !minors[mask & ~(1u << c)].isZero()) {
                    Poly term = rowNum[row][c] * minors[mask & ~(1u << c)];
                    if (j % 2) acc -= term; else acc += term;
                }
                ++j;
            }
            minors[mask] = std::move(acc);
        }
    }
    return PhaseExpr(std::move(minors[full]), std::move(denProduct));
}

void checkCnbArity(const Context& ctx, std::size_t arity) {
    if (arity < 2 || arity % 2 != 0)
        throw BracketArityError("CNB arity must be even and at least 2, got " +
                                std::to_string(arity));
    if (arity > static_cast<std::size_t>(2 * ctx.dim()))
        throw BracketArityError("CNB arity " + std::to_string(arity) +
                                " exceeds phase-space dimension " + std::to_string(2 * ctx.dim()));
}

} // namespace

PhaseExpr poisson(const PhaseExpr& f, const PhaseExpr& g) {
    requireSameContext(f.context(), g.context());
    const Context& ctx = f.context();
    PhaseExpr acc = PhaseExpr::zero(ctx);
    for (int a = 1; a <= ctx.dim(); ++a) {
        acc += f.derive(Var::x(a)) * g.derive(Var::p(a));
        acc -= f.derive(Var::p(a)) * g.derive(Var::x(a));
    }
    return acc;
}

// Star product with caller-provided derivative tables, so tables can be
// shared: a prefix table serves every remaining argument of the QNB tree,
// and each argument's own table serves every prefix it ever multiplies.
PhaseExpr starWithTables(const DerivativeTable& tf, const PhaseExpr& f, const DerivativeTable& tg,
                         const PhaseExpr& g) {
    const Context& ctx = f.context();
    const int n = ctx.dim();
    const int degPf = f.numer().degP();
    const int degPg = g.numer().degP();

    // f gets d_x^alpha d_p^beta, g gets d_p^alpha d_x^beta; the series is
    // cut off exactly by the momentum degrees.
    const auto alphas = enumerateMultiIndices(n, degPg);
    const auto betas = enumerateMultiIndices(n, degPf);

    Monomial hbarMono;
    FractionAccumulator acc(ctx);
    for (const MultiIndex& alpha : alphas) {
        for (const MultiIndex& beta : betas) {
            const PhaseExpr& df = tf.at(alpha, beta);
            if (df.isZero()) continue;
            const PhaseExpr& dg = tg.at(beta, alpha);
            if (dg.isZero()) continue;
            const int order = totalOrder(alpha) + totalOrder(beta);
            Rational mag = makeRational(1);
            mag /= factorialProduct(alpha) * factorialProduct(beta);
            for (int k = 0; k < order; ++k) mag /= 2;
            if (totalOrder(beta) % 2) mag = -mag;
            GaussianRational coeff = iPow(order) * GaussianRational(mag);
            hbarMono.hbarExp = static_cast<std::int16_t>(order);
            Poly numTerm = (df.numer() * dg.numer()).mulMonomial(hbarMono, coeff);
            acc.add(std::move(numTerm), df.denom() * dg.denom());
        }
    }
    return acc.take();
}

PhaseExpr star(const PhaseExpr& f, const PhaseExpr& g) {
    requireSameContext(f.context(), g.context());
    requireStarOperand(f);
    requireStarOperand(g);
    DerivativeTable tf(f, g.numer().degP(), f.numer().degP());
    DerivativeTable tg(g, f.numer().degP(), g.numer().degP());
    return starWithTables(tf, f, tg, g);
}

PhaseExpr moyal(const PhaseExpr& f, const PhaseExpr& g) {
    PhaseExpr comm = star(f, g) - star(g, f);
    return comm.divIHbar(1);
}

PhaseExpr cnb(std::span<const PhaseExpr> args) {
    assert(!args.empty());
    const Context& ctx = args.front().context();
    for (const PhaseExpr& a : args) requireSameContext(ctx, a.context());
    checkCnbArity(ctx, args.size());
    const int n = ctx.dim();
    const int k = static_cast<int>(args.size()) / 2;
    if (2 * k == 2 * n) return jacobianOptimized(args);

    // Lower rank: insert all N-k canonical pairs in one shot; summing over
    // sorted index combinations absorbs the 1/(N-k)! normalization, and
    // repeated indices would repeat rows and vanish.
    const int t = n - k;
    std::vector<int> combo(t);
    std::iota(combo.begin(), combo.end(), 1);
    FractionAccumulator acc(ctx);
    while (true) {
        std::vector<PhaseExpr> extended(args.begin(), args.end());
        for (int idx : combo) {
            extended.push_back(PhaseExpr::x(ctx, idx));
            extended.push_back(PhaseExpr::p(ctx, idx));
        }
        acc.add(jacobianOptimized(extended));
        // Next combination.
        int pos = t - 1;
        while (pos >= 0 && combo[pos] == n - (t - 1 - pos)) --pos;
        if (pos < 0) break;
        ++combo[pos];
        for (int q = pos + 1; q < t; ++q) combo[q] = combo[q - 1] + 1;
    }
    return acc.take();
}

PhaseExpr cnb(std::initializer_list<PhaseExpr> args) {
    return cnb(std::span<const PhaseExpr>(args.begin(), args.size()));
}

PhaseExpr symplecticTrace(std::span<const PhaseExpr> args, int tracedPairs) {
    assert(!args.empty());
    const Context& ctx = args.front().context();
    if (tracedPairs < 0) throw BracketArityError("traced pair count must be non-negative");
    if (args.size() % 2 != 0)
        throw BracketArityError("symplectic trace needs an even argument count");
    const int n = ctx.dim();
    if (static_cast<int>(args.size()) + 2 * tracedPairs > 2 * n)
        throw BracketArityError("symplectic trace overflows the phase-space dimension");
    if (tracedPairs == 0) return cnb(args);

    // Ordered index sum with 1/m! normalization; tuples with a repeated
    // index contribute repeated rows, hence zero, and are skipped.
    FractionAccumulator acc(ctx);
    std::vector<int> tuple(tracedPairs, 1);
    auto hasDuplicate = [&]() {
        for (int a = 0; a < tracedPairs; ++a)
            for (int b = a + 1; b < tracedPairs; ++b)
                if (tuple[a] == tuple[b]) return true;
        return false;
    };
    while (true) {
        if (!hasDuplicate()) {
            std::vector<PhaseExpr> extended(args.begin(), args.end());
            for (int idx : tuple) {
                extended.push_back(PhaseExpr::x(ctx, idx));
                extended.push_back(PhaseExpr::p(ctx, idx));
            }
            acc.add(cnb(extended));
        }
        int pos = tracedPairs - 1;
        while (pos >= 0 && tuple[pos] == n) --pos;
        if (pos < 0) break;
        ++tuple[pos];
        for (int q = pos + 1; q < tracedPairs; ++q) tuple[q] = 1;
    }
    Rational norm(1);
    for (int k = 2; k <= tracedPairs; ++k) norm *= k;
    return acc.take().scaled(GaussianRational(Rational(1) / norm));
}

PhaseExpr qnb(std::span<const PhaseExpr> args) {
    assert(!args.empty());
    const Context& ctx = args.front().context();
    const int m = static_cast<int>(args.size());
    if (m < 2 || m > 6)
        throw BracketArityError("QNB arity must be in [2, 6], got " + std::to_string(m));
    for (const PhaseExpr& a : args) {
        requireSameContext(ctx, a.context());
        requireStarOperand(a);
    }

    if (m == 2) return star(args[0], args[1]) - star(args[1], args[0]);

    // Grouping the permutation sum by its first element gives the exact
    // recursion [A_1..A_m] = sum_j (-1)^(j-1) A_j * [rest], evaluated as a
    // DP over argument subsets. Antisymmetric cancellation then happens at
    // every level, so intermediates stay near the size of the final result
    // instead of growing like raw chains.
    int totalDegP = 0;
    for (const PhaseExpr& a : args) totalDegP += a.numer().degP();
    std::vector<DerivativeTable> leftTables;
    leftTables.reserve(static_cast<std::size_t>(m));
    for (const PhaseExpr& a : args)
        leftTables.emplace_back(a, totalDegP - a.numer().degP(), a.numer().degP());

    const std::uint32_t full = (1u << m) - 1u;
    std::vector<PhaseExpr> sub(static_cast<std::size_t>(full) + 1, PhaseExpr::zero(ctx));
    for (int j = 0; j < m; ++j) sub[1u << j] = args[j];
    for (int size = 2; size <= m; ++size) {
        std::vector<std::uint32_t> masks;
        for (std::uint32_t mask = 0; mask <= full; ++mask)
            if (std::popcount(mask) == size) masks.push_back(mask);
        #pragma omp parallel for schedule(dynamic) if (masks.size() >= 4)
        for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(masks.size()); ++idx) {
            const std::uint32_t mask = masks[idx];
            FractionAccumulator acc(ctx);
            int rank = 0;
            for (int j = 0; j < m; ++j) {
                if (!(mask & (1u << j))) continue;
                const PhaseExpr& rest = sub[mask & ~(1u << j)];
                if (!rest.isZero()) {
                    PhaseExpr term = starWithTables(leftTables[static_cast<std::size_t>(j)],
                                                    args[j], DerivativeTable(rest,
                                                    args[j].numer().degP(),
                                                    rest.numer().degP()),
                                                    rest);
                    if (rank % 2)
                        acc.sub(term);
                    else
                        acc.add(term);
                }
                ++rank;
            }
            sub[mask] = acc.take();
        }
    }
    return std::move(sub[full]);
}

PhaseExpr qnb(std::initializer_list<PhaseExpr> args) {
    return qnb(std::span<const PhaseExpr>(args.begin(), args.size()));
}

PhaseExpr qnb4Resolve(const PhaseExpr& a, const PhaseExpr& b, const PhaseExpr& c,
                      const PhaseExpr& d) {
    auto comm = [](const PhaseExpr& x, const PhaseExpr& y) { return star(x, y) - star(y, x); };
    PhaseExpr ab = comm(a, b), cd = comm(c, d);
    PhaseExpr ac = comm(a, c), db = comm(d, b);
    PhaseExpr ad = comm(a, d), bc = comm(b, c);
    return star(ab, cd) + star(ac, db) + star(ad, bc) + star(cd, ab) + star(db, ac) +
           star(bc, ad);
}

PhaseExpr dirac(const PhaseExpr& f, const PhaseExpr& g, std::span<const PhaseExpr> constraints) {
    if (constraints.empty() || constraints.size() % 2 != 0)
        throw BracketArityError("Dirac bracket needs an even, positive number of constraints");
    PhaseExpr norm = cnb(constraints);
    if (norm.isZero()) throw ZeroNormalizationError();
    std::vector<PhaseExpr> full;
    full.reserve(constraints.size() + 2);
    full.push_back(f);
    full.push_back(g);
    full.insert(full.end(), constraints.begin(), constraints.end());
    return divide(cnb(full), norm);
}

PhaseExpr dirac(const PhaseExpr& f, const PhaseExpr& g,
                std::initializer_list<PhaseExpr> constraints) {
    return dirac(f, g, std::span<const PhaseExpr>(constraints.begin(), constraints.size()));
}

PhaseExpr evalBracket(const BracketSpec& spec) {
    auto requireArity = [&](std::size_t want) {
        if (spec.args.size() != want)
            throw BracketArityError("bracket expects " + std::to_string(want) +
                                    " arguments, got " + std::to_string(spec.args.size()));
    };
    switch (spec.kind) {
        case BracketKind::PB:
            requireArity(2);
            return poisson(spec.args[0], spec.args[1]);
        case BracketKind::STAR:
            requireArity(2);
            return star(spec.args[0], spec.args[1]);
        case BracketKind::MB:
            requireArity(2);
            return moyal(spec.args[0], spec.args[1]);
        case BracketKind::CNB:
            return cnb(spec.args);
        case BracketKind::QNB:
            return qnb(spec.args);
        case BracketKind::DB:
            requireArity(2);
            return dirac(spec.args[0], spec.args[1], spec.constraints);
        case BracketKind::TRACE: {
            // Trace down from the maximal bracket.
            const int n = spec.args.front().context().dim();
            const int pairs = n - static_cast<int>(spec.args.size()) / 2;
            return symplecticTrace(spec.args, pairs);
        }
    }
    throw Error("unreachable bracket kind");
}

// ---------------------------------------------------------------------------
// Serial reference implementations.
// ---------------------------------------------------------------------------

namespace ref {

PhaseExpr starDirect(const PhaseExpr& f, const PhaseExpr& g) {
    requireSameContext(f.context(), g.context());
    requireStarOperand(f);
    requireStarOperand(g);
    const Context& ctx = f.context();
    const int n = ctx.dim();
    const int maxOrder = f.numer().degP() + g.numer().degP();

    struct Entry {
        PhaseExpr left;
        PhaseExpr right;
        bool negate;
    };
    std::vector<Entry> level;
    level.push_back({f, g, false});
    PhaseExpr total = f * g;
    Rational invFact(1);
    for (int order = 1; order <= maxOrder; ++order) {
        std::vector<Entry> next;
        next.reserve(level.size() * 2 * static_cast<std::size_t>(n));
        for (const Entry& e : level) {
            for (int a = 1; a <= n; ++a) {
                PhaseExpr lx = e.left.derive(Var::x(a));
                if (!lx.isZero()) {
                    PhaseExpr rp = e.right.derive(Var::p(a));
                    if (!rp.isZero()) next.push_back({std::move(lx), std::move(rp), e.negate});
                }
                PhaseExpr lp = e.left.derive(Var::p(a));
                if (!lp.isZero()) {
                    PhaseExpr rx = e.right.derive(Var::x(a));
                    if (!rx.isZero()) next.push_back({std::move(lp), std::move(rx), !e.negate});
                }
            }
        }
        level = std::move(next);
        invFact /= order;
        PhaseExpr levelSum = PhaseExpr::zero(ctx);
        for (const Entry& e : level) {
            PhaseExpr prod = e.left * e.right;
            levelSum += e.negate ? -prod : prod;
        }
        Rational mag = invFact;
        for (int k = 0; k < order; ++k) mag /= 2;
        total += levelSum.scaled(iPow(order) * GaussianRational(mag)) * hbarPow(ctx, order);
    }
    return total;
}

PhaseExpr moyalDirect(const PhaseExpr& f, const PhaseExpr& g) {
    return (starDirect(f, g) - starDirect(g, f)).divIHbar(1);
}

PhaseExpr qnbDirect(std::span<const PhaseExpr> args) {
    assert(!args.empty());
    const Context& ctx = args.front().context();
    const int m = static_cast<int>(args.size());
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    PhaseExpr total = PhaseExpr::zero(ctx);
    do {
        int inversions = 0;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                if (perm[a] > perm[b]) ++inversions;
        PhaseExpr chain = args[perm[0]];
        for (int idx = 1; idx < m; ++idx) chain = star(chain, args[perm[idx]]);
        total += (inversions % 2) ? -chain : chain;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

PhaseExpr qnbDirect(std::initializer_list<PhaseExpr> args) {
    return qnbDirect(std::span<const PhaseExpr>(args.begin(), args.size()));
}

namespace {

PhaseExpr laplaceDet(const std::vector<std::vector<PhaseExpr>>& mat, std::vector<int>& cols,
                     int row) {
    const Context& ctx = mat.front().front().context();
    if (cols.size() == 1) return mat[row][static_cast<std::size_t>(cols[0])];
    PhaseExpr acc = PhaseExpr::zero(ctx);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const int c = cols[j];
        if (mat[row][static_cast<std::size_t>(c)].isZero()) continue;
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(j));
        PhaseExpr minor = laplaceDet(mat, cols, row + 1);
        cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(j), c);
        PhaseExpr term = mat[row][static_cast<std::size_t>(c)] * minor;
        acc += (j % 2) ? -term : term;
    }
    return acc;
}

} // namespace

PhaseExpr jacobianDirect(std::span<const PhaseExpr> args) {
    assert(!args.empty());
    const Context& ctx = args.front().context();
    const int m = static_cast<int>(args.size());
    if (m != 2 * ctx.dim()) throw BracketArityError("direct Jacobian needs exactly 2N arguments");
    std::vector<Var> vars;
    for (int a = 1; a <= ctx.dim(); ++a) {
        vars.push_back(Var::x(a));
        vars.push_back(Var::p(a));
    }
    std::vector<std::vector<PhaseExpr>> mat;
    mat.reserve(static_cast<std::size_t>(m));
    for (const PhaseExpr& arg : args) {
        std::vector<PhaseExpr> row;
        row.reserve(static_cast<std::size_t>(m));
        for (Var v : vars) row.push_back(arg.derive(v));
        mat.push_back(std::move(row));
    }
    std::vector<int> cols(static_cast<std::size_t>(m));
    std::iota(cols.begin(), cols.end(), 0);
    return laplaceDet(mat, cols, 0);
}

PhaseExpr symplecticTraceDirect(std::span<const PhaseExpr> args, int tracedPairs) {
    assert(!args.empty());
    const Context& ctx = args.front().context();
    const int n = ctx.dim();
    if (static_cast<int>(args.size()) + 2 * tracedPairs != 2 * n)
        throw BracketArityError("direct trace must land on the maximal bracket");
    if (tracedPairs == 0) return jacobianDirect(args);
    PhaseExpr acc = PhaseExpr::zero(ctx);
    std::vector<int> tuple(static_cast<std::size_t>(tracedPairs), 1);
    while (true) {
        std::vector<PhaseExpr> extended(args.begin(), args.end());
        for (int idx : tuple) {
            extended.push_back(PhaseExpr::x(ctx, idx));
            extended.push_back(PhaseExpr::p(ctx, idx));
        }
        acc += jacobianDirect(extended);
        int pos = tracedPairs - 1;
        while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == n) --pos;
        if (pos < 0) break;
        ++tuple[static_cast<std::size_t>(pos)];
        for (int q = pos + 1; q < tracedPairs; ++q) tuple[static_cast<std::size_t>(q)] = 1;
    }
    Rational norm(1);
    for (int k = 2; k <= tracedPairs; ++k) norm *= k;
    return acc.scaled(GaussianRational(Rational(1) / norm));
}

} // namespace ref

} // namespace psalg
