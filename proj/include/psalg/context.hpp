#pragma once

#include <compare>
#include <string>

#include "psalg/error.hpp"

namespace psalg {

// Hard cap on the manifold dimension; phase space is 2N-dimensional.
inline constexpr int kMaxDimension = 8;

// Phase-space dimension and the fixed variable order x1..xN, p1..pN, hbar, s.
class Context {
public:
    explicit Context(int n) : n_(n) {
        if (n < 1 || n > kMaxDimension)
            throw DimensionError("dimension must be in [1, " + std::to_string(kMaxDimension) +
                                 "], got " + std::to_string(n));
    }

    int dim() const { return n_; }

    bool operator==(const Context&) const = default;

private:
    int n_;
};

inline void requireSameContext(const Context& a, const Context& b) {
    if (!(a == b)) throw ContextMismatchError();
}

// A coordinate or momentum variable, 1-based: x1..xN, p1..pN.
struct Var {
    enum class Kind { X, P };

    Kind kind;
    int index;

    static Var x(int index) { return {Kind::X, index}; }
    static Var p(int index) { return {Kind::P, index}; }

    std::string name() const {
        return (kind == Kind::X ? "x" : "p") + std::to_string(index);
    }

    auto operator<=>(const Var&) const = default;
};

inline void requireVar(const Context& ctx, Var v) {
    if (v.index < 1 || v.index > ctx.dim())
        throw DimensionError("variable " + v.name() + " out of range for dimension " +
                             std::to_string(ctx.dim()));
}

} // namespace psalg
