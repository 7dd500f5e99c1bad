#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ivbounds {

enum class ErrorCode {
    NegativeMass,
    MassNotOne,
    DimensionMismatch,
    InvalidSpaces,
    IndexOutOfRange,
    EnumerationTooLarge,
    UnknownModel,
    IncompatibleSpaces,
    NotBinaryTreatment,
    NotBinaryProblem,
    SameTreatment,
    Infeasible,
    AlphaOutOfRange,
    SeedDoesNotRationalize,
    InvalidArgument,
    ParseError,
    LpFailure,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// A parse failure at a JSON-pointer style location ("/p/0/1/0").
class ParseError : public Error {
public:
    ParseError(std::string location, const std::string& message)
        : Error(ErrorCode::ParseError, (location.empty() ? std::string("/") : location) + ": " + message),
          location_(std::move(location)) {}
    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

}  // namespace ivbounds
