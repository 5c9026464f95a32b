#include "ponconf/error.hpp"

namespace ponconf {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::CoincidentLines: return "CoincidentLines";
    case ErrorCode::PointNotOnConic: return "PointNotOnConic";
    case ErrorCode::DegenerateConic: return "DegenerateConic";
    case ErrorCode::DegeneratePointSet: return "DegeneratePointSet";
    case ErrorCode::ComplexIntersection: return "ComplexIntersection";
    case ErrorCode::NotGenericPosition: return "NotGenericPosition";
    case ErrorCode::PointInsideConic: return "PointInsideConic";
    case ErrorCode::PointOnConic: return "PointOnConic";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ClosureFailure: return "ClosureFailure";
    case ErrorCode::ConicFitFailure: return "ConicFitFailure";
    case ErrorCode::CoDependenceViolation: return "CoDependenceViolation";
    case ErrorCode::NoEquivalenceFound: return "NoEquivalenceFound";
    case ErrorCode::LineThroughCenter: return "LineThroughCenter";
    case ErrorCode::NoIncircle: return "NoIncircle";
    case ErrorCode::SpecialPosition: return "SpecialPosition";
    case ErrorCode::DegenerateParameters: return "DegenerateParameters";
    case ErrorCode::NonZeroResidualPolynomial: return "NonZeroResidualPolynomial";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::LetterOutOfRange: return "LetterOutOfRange";
    case ErrorCode::AdjacentRepeat: return "AdjacentRepeat";
    case ErrorCode::RotationNumberOutOfRange: return "RotationNumberOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
    switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::SchemaError:
        return ErrorClass::Syntax;
    case ErrorCode::LetterOutOfRange:
    case ErrorCode::AdjacentRepeat:
    case ErrorCode::RotationNumberOutOfRange:
    case ErrorCode::InvalidArgument:
        return ErrorClass::Constraint;
    case ErrorCode::IoError:
        return ErrorClass::Io;
    default:
        return ErrorClass::Geometry;
    }
}

}  // namespace ponconf
