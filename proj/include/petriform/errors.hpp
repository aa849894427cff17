#pragma once

#include <stdexcept>
#include <string>

namespace petriform {

// Error taxonomy mirrors the CLI exit codes: parse errors (2), violated
// preconditions (3), numeric trouble (4).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(std::string msg, int line, int col)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) +
                ": " + msg),
          line(line),
          col(col) {}
    int line;
    int col;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

struct NotEnabledError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct TruncatedError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NotIrreducibleError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct SupportMismatchError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct WeightedNetError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NotGsmError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NotFreeChoiceError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NotWeaklyReversibleError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NotConstantRatesError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct InvalidRoutingError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NonPositiveInputError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct ResidualTooLargeError : NumericError {
    using NumericError::NumericError;
};
struct SingularBeyondToleranceError : NumericError {
    using NumericError::NumericError;
};

}  // namespace petriform
