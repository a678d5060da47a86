#pragma once

#include <stdexcept>
#include <string>

namespace starprod {

/// Operands live over different ambient dimensions.
class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t lhs, std::size_t rhs, const std::string& where)
        : std::invalid_argument(where + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
                                std::to_string(rhs) + ")") {}
};

/// A documented precondition of an operation does not hold for the input
/// (non-symmetric b, gamma outside P_{V,Lambda}, degree too high, ...).
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The Gram matrix of a functional has a negative eigenvalue.
class PositivityError : public std::domain_error {
public:
    PositivityError(const std::string& what, double min_eigenvalue)
        : std::domain_error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

inline void require_same_dim(std::size_t lhs, std::size_t rhs, const char* where) {
    if (lhs != rhs) throw DimensionMismatch(lhs, rhs, where);
}

} // namespace starprod
