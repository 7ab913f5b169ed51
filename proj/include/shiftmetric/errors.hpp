#ifndef SHIFTMETRIC_ERRORS_HPP
#define SHIFTMETRIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace shiftmetric {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input (bad degree, non-positive lengths, malformed data).
// The CLI maps this to exit code 2.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Iterative solver failed to converge; message carries residuals.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

// Quadrature or optimizer did not reach the requested accuracy;
// message carries the competing estimates.
class AccuracyError : public Error {
public:
    explicit AccuracyError(const std::string& msg) : Error(msg) {}
};

// An enumeration (cycle complex, circuit count) exceeded its size cap.
class TooLargeError : public Error {
public:
    explicit TooLargeError(const std::string& msg) : Error(msg) {}
};

// Degenerate entropy basepoint (fewer than two finite petals, or a
// vanishing pairing that signals an upstream bug).
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& msg) : Error(msg) {}
};

// Sequence classification was inconclusive; message carries the ratio table.
class ClassificationError : public Error {
public:
    explicit ClassificationError(const std::string& msg) : Error(msg) {}
};

} // namespace shiftmetric

#endif
