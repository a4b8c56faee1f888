#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exporamsey {

/// Input violates a mathematical precondition (n < 2, non-increasing seeds, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A configured cap or budget was hit. Callers may drop the element and count it.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rule DSL syntax error. `position` is a 0-based offset into the source text.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t position, const std::string& what)
        : std::runtime_error("syntax error at position " + std::to_string(position) + ": " + what),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace exporamsey
