// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pilotopt {

// Caller broke a documented precondition (shape, hermiticity, N != 1, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Input is well formed but describes a setup this code does not handle.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, std::size_t iterations = 0,
                            std::vector<double> trace = {})
        : std::runtime_error(what), iterations_(iterations), trace_(std::move(trace)) {}

    std::size_t iterations() const noexcept { return iterations_; }
    const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::size_t iterations_;
    std::vector<double> trace_;
};

// Matrix that must be positive definite is (numerically) singular.
class SingularMatrixError : public NumericalError {
public:
    SingularMatrixError(const std::string& what, double eigenvalue)
        : NumericalError(what + " (eigenvalue " + std::to_string(eigenvalue) + ")"),
          eigenvalue_(eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

} // namespace pilotopt
