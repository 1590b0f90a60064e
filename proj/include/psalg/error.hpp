#pragma once

#include <stdexcept>
#include <string>

namespace psalg {

// Base class for all engine errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContextMismatchError : Error {
    ContextMismatchError() : Error("operands belong to different contexts") {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

struct DivisionByZeroError : Error {
    DivisionByZeroError() : Error("division by zero") {}
};

// Quantum operations require denominators free of momentum variables so the
// star series terminates.
struct NonPolynomialMomentumDenominator : Error {
    NonPolynomialMomentumDenominator()
        : Error("denominator contains a momentum variable; star series would not terminate") {}
};

struct HbarDenominatorError : Error {
    HbarDenominatorError() : Error("hbar is not allowed in denominators") {}
};

struct ZeroDenominatorError : Error {
    ZeroDenominatorError() : Error("denominator evaluates to zero at the given point") {}
};

struct NonSquareUError : Error {
    NonSquareUError() : Error("u is not the square of a rational at the given point (exact mode)") {}
};

struct NegativeUError : Error {
    NegativeUError() : Error("u is negative at the given point; s is undefined") {}
};

struct BracketArityError : Error {
    explicit BracketArityError(const std::string& msg) : Error(msg) {}
};

struct ZeroNormalizationError : Error {
    ZeroNormalizationError() : Error("constraint bracket vanishes identically; Dirac bracket undefined") {}
};

// A model-level identity that must hold by construction failed to verify.
struct VerificationError : Error {
    explicit VerificationError(const std::string& msg) : Error(msg) {}
};

struct UnknownSuiteError : Error {
    explicit UnknownSuiteError(const std::string& name) : Error("unknown suite: " + name) {}
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int lineNo, int columnNo)
        : Error(msg + " (line " + std::to_string(lineNo) + ", column " + std::to_string(columnNo) + ")"),
          line(lineNo), column(columnNo) {}
};

} // namespace psalg
