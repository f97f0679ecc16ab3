#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gbm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class InvalidMesh : public Error {
public:
    using Error::Error;
};

class SizeMismatch : public Error {
public:
    using Error::Error;
};

class EmptyRegion : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Raised when the linear solve of a time step fails to reach its tolerance.
class SolverFailure : public Error {
public:
    SolverFailure(std::size_t step, double residual, std::size_t iterations)
        : Error("CG did not converge at step " + std::to_string(step) + " after " +
                std::to_string(iterations) + " iterations (relative residual " +
                std::to_string(residual) + ")"),
          step_(step), residual_(residual), iterations_(iterations) {}

    std::size_t step() const noexcept { return step_; }
    double residual() const noexcept { return residual_; }
    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t step_;
    double residual_;
    std::size_t iterations_;
};

/// Configuration text could not be parsed; carries the 1-based line number (0 if not line-specific).
class ConfigError : public Error {
public:
    ConfigError(std::size_t line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace gbm
