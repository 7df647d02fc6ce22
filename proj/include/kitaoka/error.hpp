#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kitaoka {

// Machine-readable failure categories. The CLI prints the name of the code and
// maps every code to exit status 1.
enum class Errc {
    SyntaxError,
    NotIntegral,
    NotTotallyReal,
    BasisNotClosed,
    DiscriminantMismatch,
    MalformedSpec,
    FieldMismatch,
    DivisionByZero,
    NotTotallyPositive,
    ZeroElement,
    BudgetExceeded,
    UnitsUnavailable,
    NotQuadratic,
    RequiresKOne,
    CatalogIncomplete,
    HypothesisFailed,
    IterationLimit,
    NotSymmetric,
    NotClassical,
    NotPositiveDefinite,
    NotRepresented,
    NotAUnit,
    PreconditionFailed,
    NotIntegralHalves,
    UnknownField,
    Internal,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace kitaoka
