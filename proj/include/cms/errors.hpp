#pragma once

#include <stdexcept>
#include <string>

namespace cms {

/// Invalid shift description: sink/source symbols, out-of-range symbols, bad words.
class ShiftError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative solver (power iteration, max-plus value iteration) did not settle.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// Eigen-data that fails the stationary Markov structure checks.
class MeasureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax or semantic error in a shift file or experiment config.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, int line, const std::string& msg)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + msg), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace cms
