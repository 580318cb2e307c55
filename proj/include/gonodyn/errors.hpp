#ifndef GONODYN_ERRORS_HPP
#define GONODYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gonodyn {

/// Invalid configuration or input data (bad key, missing field, negative rate).
/// CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure during computation (non-finite state, step underflow,
/// eigenvalue non-convergence). CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Matrix singular to working tolerance; carries the failing pivot index.
class SingularMatrixError : public NumericError {
public:
    SingularMatrixError(const std::string& msg, int pivot_index)
        : NumericError(msg), pivot(pivot_index) {}
    int pivot;
};

} // namespace gonodyn

#endif
