#pragma once

#include <stdexcept>
#include <string>

namespace gchain {

// Thrown when a computation cannot deliver a trustworthy result
// (eigenvalue pairing mismatch, integrand invalid at a quadrature node, ...).
// Distinct from std::invalid_argument, which signals a contract violation
// by the caller.
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a request exceeds a configured size budget before any heavy
// allocation happens.
class ResourceLimit : public std::runtime_error {
public:
    explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gchain
