#pragma once

#include <stdexcept>
#include <string>

namespace spinchan {

// Numerical failure (non-convergence, loss of normalization, ...).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A truncated series did not capture enough probability mass to be usable.
struct UnconvergedSeriesError : NumericalError {
    double captured_mass;
    UnconvergedSeriesError(const std::string& what, double mass)
        : NumericalError(what), captured_mass(mass) {}
};

// Request exceeds the sizes the implementation is willing to handle.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinchan
