#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace powfrac {

/// Argument outside an operation's mathematical domain (alpha >= 1, x <= 0 in
/// log_gamma, a non-positive weight, a violated theorem hypothesis, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A truncated series did not meet its stopping rule within the term budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace powfrac
