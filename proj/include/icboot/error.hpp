#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace icboot {

// Malformed or out-of-range input. CLI maps this to exit status 1.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown (degenerate likelihood, non-convergence). CLI exit status 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by the interval-censored NPMLE when the Fenchel tolerance was not
// reached. Carries the last iterate so callers can inspect or continue.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_masses,
                     double violation, int iterations)
        : NumericalError(what),
          last_masses_(std::move(last_masses)),
          violation_(violation),
          iterations_(iterations) {}

    const std::vector<double>& last_masses() const noexcept { return last_masses_; }
    double violation() const noexcept { return violation_; }
    int iterations() const noexcept { return iterations_; }

private:
    std::vector<double> last_masses_;
    double violation_;
    int iterations_;
};

}  // namespace icboot
