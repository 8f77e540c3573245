#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uip {

/// Invalid model, payoff, grid or config input. `field()` names the offending
/// parameter (dotted config path where one exists).
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A solver produced a non-finite or otherwise unusable intermediate value.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::size_t step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace uip
