#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ponconf {

enum class ErrorCode {
    // geometry
    CoincidentPoints,
    CoincidentLines,
    PointNotOnConic,
    DegenerateConic,
    DegeneratePointSet,
    ComplexIntersection,
    NotGenericPosition,
    PointInsideConic,
    PointOnConic,
    NoConvergence,
    ClosureFailure,
    ConicFitFailure,
    CoDependenceViolation,
    NoEquivalenceFound,
    LineThroughCenter,
    NoIncircle,
    SpecialPosition,
    DegenerateParameters,
    NonZeroResidualPolynomial,
    // syntax
    SyntaxError,
    SchemaError,
    // constraint
    LetterOutOfRange,
    AdjacentRepeat,
    RotationNumberOutOfRange,
    InvalidArgument,
    // io
    IoError,
};

enum class ErrorClass { Geometry = 1, Syntax = 2, Constraint = 3, Io = 4 };

std::string_view to_string(ErrorCode code);
ErrorClass error_class(ErrorCode code);
inline int exit_code(ErrorCode code) { return static_cast<int>(error_class(code)); }

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string step = {})
        : std::runtime_error(message), code_(code), step_(std::move(step)) {}

    ErrorCode code() const noexcept { return code_; }
    // construction step that failed, e.g. "L2" or "P1"; empty outside constructions
    const std::string& step() const noexcept { return step_; }
    // JSON pointer for SchemaError
    const std::string& path() const noexcept { return step_; }

    Error with_step(std::string step) const { return Error(code_, what(), std::move(step)); }

private:
    ErrorCode code_;
    std::string step_;
};

}  // namespace ponconf
