#pragma once

#include <stdexcept>
#include <string>

namespace gmfs {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Shapes of tensors, tables or tuples do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested object would exceed a configured size cap.
class SizingError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Quadrature failed to resolve an integrand.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite value produced during time stepping.
class IntegrationAbort : public std::runtime_error {
public:
    IntegrationAbort(const std::string& what, long step)
        : std::runtime_error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace gmfs
