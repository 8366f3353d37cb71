#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace banditlab {

enum class ErrorKind {
    InvalidArgument,
    NegativeWeight,
    ZeroMass,
    EmptySequence,
    UnknownFamily,
    ImproperPrior,
    ObservationOutOfSupport,
    NonPositiveScale,
    HorizonTooLarge,
    OneArmedUnsupported,
    HistoryLongerThanHorizon,
    UnsupportedFamily,
    NotRegular,
    ZeroFirstWeight,
    BracketFailure,
    InsufficientHorizon,
    RootNotBracketed,
    GridMismatch,
    SupportMismatch,
    NonUniformGrid,
    UnequalMeans,
    DegenerateMean,
    DegeneratePrior,
    OrderViolation,
    BoundarySupport,
    ObservationOutsideSafeRange,
    MeanMismatch,
    SlopeBoundViolated,
    UnknownSuite,
    BudgetExceeded,
    Schema,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace banditlab
