#pragma once

#include <stdexcept>
#include <string>

namespace flr {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two curves (or a curve and a sample) do not live on the same grid.
struct GridMismatchError : Error {
    using Error::Error;
};

// Operation needs more observations than the sample provides.
struct InsufficientDataError : Error {
    using Error::Error;
};

// Malformed input file; message carries row/column context.
struct ParseError : Error {
    using Error::Error;
};

// Index out of the valid dimension range.
struct DimensionError : Error {
    using Error::Error;
};

// A required eigenvalue is zero; message names the offending index.
struct RankError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

// Sample too degenerate to define a maximal dimension.
struct DegenerateSampleError : Error {
    using Error::Error;
};

// Invalid configuration (bad constants, empty method list, ...).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace flr
