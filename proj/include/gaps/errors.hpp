#pragma once

#include <stdexcept>
#include <string>

namespace gaps {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments, shape mismatches, violated preconditions.
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// A particular coefficient instance is unusable (rank drop, required pivot
// missing, non-finite values).
struct DegenerateInstance : Error {
    explicit DegenerateInstance(const std::string& msg) : Error(msg) {}
};

// A numeric routine failed to converge or produced unusable output.
struct NumericFailure : Error {
    explicit NumericFailure(const std::string& msg) : Error(msg) {}
};

// Offline generation could not produce a valid template.
struct GenerationFailure : Error {
    explicit GenerationFailure(const std::string& msg) : Error(msg) {}
};

// Malformed or incompatible serialized data.
struct ParseFailure : Error {
    explicit ParseFailure(const std::string& msg) : Error(msg) {}
};

}  // namespace gaps
