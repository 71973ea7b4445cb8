#pragma once

#include <stdexcept>
#include <string>

namespace tori {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct SingularMatrixError : Error { using Error::Error; };
struct NotPositiveDefiniteError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct InfeasibleError : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct FieldMismatchError : Error { using Error::Error; };

} // namespace tori
