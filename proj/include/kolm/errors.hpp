#pragma once

#include <stdexcept>
#include <string>

namespace kolm {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonMonotoneLayersError : Error {
    using Error::Error;
};
struct RankDeficientBlockError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};
struct FieldIndexOutOfRangeError : Error {
    using Error::Error;
};
struct NonPositiveLambdaError : Error {
    using Error::Error;
};
struct IndexOutOfRangeError : Error {
    using Error::Error;
};
struct IncompleteOracleError : Error {
    using Error::Error;
};
struct OrderTooLowError : Error {
    using Error::Error;
};
struct AlphaOutOfRangeError : Error {
    using Error::Error;
};
struct EmptyPlanError : Error {
    using Error::Error;
};
struct QuadratureFailureError : Error {
    using Error::Error;
};
struct EpsilonOutOfRangeError : Error {
    using Error::Error;
};
struct DegenerateAlphaError : Error {
    using Error::Error;
};
struct InvalidQueryError : Error {
    using Error::Error;
};
struct EmptyGridError : Error {
    using Error::Error;
};
struct DegenerateDataError : Error {
    using Error::Error;
};
struct OrderViolationError : Error {
    using Error::Error;
};
struct ConfigParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};

} // namespace kolm
