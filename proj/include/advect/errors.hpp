#pragma once

#include <stdexcept>
#include <string>

namespace advect {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid geometry / parameters (bad grid bounds, sample counts, ...).
struct DomainError : Error {
    using Error::Error;
};

// Malformed expression text. Carries the byte offset of the offending token.
struct ParseError : Error {
    ParseError(std::size_t offset_, const std::string& expected)
        : Error("parse error at offset " + std::to_string(offset_) + ": " + expected),
          offset(offset_) {}
    std::size_t offset;
};

// Expression evaluation failed (division by zero, overflow, bad power).
struct EvalError : Error {
    using Error::Error;
};

// Leapfrog asked to step without a previous time level.
struct MissingPreviousLevel : Error {
    using Error::Error;
};

// Two fields on different grids were combined.
struct GridMismatch : Error {
    using Error::Error;
};

// Characteristic trace left the representable range.
struct NonFiniteTrajectory : Error {
    using Error::Error;
};

// Root bracketing failed for the implicit state solution.
struct NoBracket : Error {
    using Error::Error;
};

// Implicit state solution queried at or past the wave-breaking time.
struct PostShock : Error {
    using Error::Error;
};

// Run configuration failed validation.
struct ConfigError : Error {
    using Error::Error;
};

// Output files could not be written.
struct IoError : Error {
    using Error::Error;
};

// A refinement level blew up during a convergence study.
struct UnstableRun : Error {
    using Error::Error;
};

} // namespace advect
