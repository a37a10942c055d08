#ifndef CHEMO_ERRORS_HPP
#define CHEMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chemo {

/// Invalid grid, parameter or configuration value.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function (negative density, p < 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative linear solve that did not reach its tolerance.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double achieved_residual)
        : std::runtime_error(what), residual_(achieved_residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace chemo

#endif  // CHEMO_ERRORS_HPP
