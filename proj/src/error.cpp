#include "banditlab/error.hpp"

namespace banditlab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NegativeWeight: return "NegativeWeight";
        case ErrorKind::ZeroMass: return "ZeroMass";
        case ErrorKind::EmptySequence: return "EmptySequence";
        case ErrorKind::UnknownFamily: return "UnknownFamily";
        case ErrorKind::ImproperPrior: return "ImproperPrior";
        case ErrorKind::ObservationOutOfSupport: return "ObservationOutOfSupport";
        case ErrorKind::NonPositiveScale: return "NonPositiveScale";
        case ErrorKind::HorizonTooLarge: return "HorizonTooLarge";
        case ErrorKind::OneArmedUnsupported: return "OneArmedUnsupported";
        case ErrorKind::HistoryLongerThanHorizon: return "HistoryLongerThanHorizon";
        case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
        case ErrorKind::NotRegular: return "NotRegular";
        case ErrorKind::ZeroFirstWeight: return "ZeroFirstWeight";
        case ErrorKind::BracketFailure: return "BracketFailure";
        case ErrorKind::InsufficientHorizon: return "InsufficientHorizon";
        case ErrorKind::RootNotBracketed: return "RootNotBracketed";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::SupportMismatch: return "SupportMismatch";
        case ErrorKind::NonUniformGrid: return "NonUniformGrid";
        case ErrorKind::UnequalMeans: return "UnequalMeans";
        case ErrorKind::DegenerateMean: return "DegenerateMean";
        case ErrorKind::DegeneratePrior: return "DegeneratePrior";
        case ErrorKind::OrderViolation: return "OrderViolation";
        case ErrorKind::BoundarySupport: return "BoundarySupport";
        case ErrorKind::ObservationOutsideSafeRange: return "ObservationOutsideSafeRange";
        case ErrorKind::MeanMismatch: return "MeanMismatch";
        case ErrorKind::SlopeBoundViolated: return "SlopeBoundViolated";
        case ErrorKind::UnknownSuite: return "UnknownSuite";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::Schema: return "Schema";
    }
    return "Unknown";
}

}  // namespace banditlab
