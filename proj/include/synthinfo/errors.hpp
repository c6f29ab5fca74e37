#pragma once

#include <stdexcept>
#include <string>

namespace synthinfo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// theta outside the open parameter domain
struct ParameterError : Error {
    using Error::Error;
};

// observation outside the family's support
struct DomainError : Error {
    using Error::Error;
};

// generator cannot be fitted on the given sample
struct FitError : Error {
    using Error::Error;
};

// input shape violates a declared schema (missing labels, bad columns, ...)
struct SchemaError : Error {
    using Error::Error;
};

// likelihood maximum lies on the parameter boundary
struct BoundaryError : Error {
    using Error::Error;
};

// enumeration budget exceeded
struct ResourceError : Error {
    using Error::Error;
};

struct UnsupportedError : Error {
    using Error::Error;
};

// infeasible observed data combination
struct DataError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace synthinfo
