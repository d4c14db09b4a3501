#pragma once

#include <stdexcept>
#include <string>

namespace rainbow {

// Parameter outside the domain an operation is defined on (L <= 0, alpha > 1,
// Renyi order < 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller broke a precondition that the types cannot express (non-symmetric
// matrix, mismatched lengths).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative kernel failed or the input is numerically unusable.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problem size exceeds what an exhaustive routine supports.
class ResourceError : public std::length_error {
public:
    using std::length_error::length_error;
};

class RankDeficiencyError : public NumericError {
public:
    RankDeficiencyError(const std::string& what, int column)
        : NumericError(what), column_(column) {}
    int column() const noexcept { return column_; }

private:
    int column_;
};

} // namespace rainbow
