#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace falpha {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or precondition violation (bad range, alpha out of (0,1], ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// A configured cap would be exceeded (interval count, depth, dimension cap).
class ResourceError : public Error {
public:
    using Error::Error;
};

// A numeric procedure produced inconsistent results (empty nullspace at a
// claimed eigenvalue, fit residual above bound, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

// An iterative refinement failed to meet its tolerance. Carries the trace of
// iterates so callers can report diagnostics.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> trace = {})
        : Error(what), trace_(std::move(trace)) {}

    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

// The staircase increment vanished for every candidate neighbor point.
class DegeneratePointError : public NumericError {
public:
    using NumericError::NumericError;
};

// (A - rI) eta = xi is inconsistent, or a chain was requested where the
// eigenspace is already full.
class DefectStructureError : public NumericError {
public:
    using NumericError::NumericError;
};

// A mode set that should form a fundamental system has a (near-)vanishing
// Wronskian; signals a decomposition bug rather than a user mistake.
class FundamentalSetError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace falpha
