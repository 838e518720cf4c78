#pragma once

#include <stdexcept>
#include <string>

namespace entwit {

// Bad or inconsistent input: wrong dimensions, non-Hermitian matrices,
// malformed documents, out-of-range parameters.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A constraint value outside the reachable range of its observable.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative routine exhausted its budget without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace entwit
