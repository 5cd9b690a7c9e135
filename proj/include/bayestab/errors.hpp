#pragma once

#include <stdexcept>
#include <string>

namespace bayestab {

// Input/shape problems: caller gave us something malformed.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runtime numeric problems: valid input, computation cannot proceed.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeCountError : InputError {
    using InputError::InputError;
};
struct ShapeMismatchError : InputError {
    using InputError::InputError;
};
struct EmptyTableError : InputError {
    using InputError::InputError;
};
struct InconsistentMarginsError : InputError {
    using InputError::InputError;
};
struct NonPositivePriorError : InputError {
    using InputError::InputError;
};
struct ObservedNotInSpaceError : InputError {
    using InputError::InputError;
};
struct ZeroRowMassError : InputError {
    using InputError::InputError;
};
struct EmptyNullEventError : InputError {
    using InputError::InputError;
};
struct ParseError : InputError {
    using InputError::InputError;
};
struct UnsupportedCombinationError : InputError {
    using InputError::InputError;
};

struct IndeterminateOddsRatioError : NumericError {
    using NumericError::NumericError;
};
struct DegenerateDrawError : NumericError {
    using NumericError::NumericError;
};
struct AllZeroWeightsError : NumericError {
    using NumericError::NumericError;
};

}  // namespace bayestab
