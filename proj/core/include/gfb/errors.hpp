#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when two operands do not live in the same space.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters. `assumption()` names the violated convergence
/// assumption (e.g. "A1(ii)") when the failure is a step/relaxation bound,
/// and is empty otherwise.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::string assumption = {})
        : Error(assumption.empty() ? what : assumption + ": " + what),
          assumption_(std::move(assumption)) {}

    const std::string& assumption() const noexcept { return assumption_; }

private:
    std::string assumption_;
};

/// An iterate became non-finite.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, std::size_t iteration)
        : Error(what + " at iteration " + std::to_string(iteration)),
          iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

}  // namespace gfb
