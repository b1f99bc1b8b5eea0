#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace radkin {

// Numerical failures map to CLI exit status 3, configuration problems to 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the pushers when the state stops being finite or the
/// constraint residuals blow past tolerance * 1e3.
class StepInstability : public NumericalError {
public:
    StepInstability(const std::string& what, double last_valid_lambda)
        : NumericalError(what), last_valid_lambda_(last_valid_lambda) {}
    double last_valid_lambda() const noexcept { return last_valid_lambda_; }

private:
    double last_valid_lambda_;
};

class ConvergenceFailure : public NumericalError {
public:
    ConvergenceFailure(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class CflViolation : public NumericalError {
public:
    CflViolation(const std::string& what, double suggested_dt)
        : NumericalError(what), suggested_dt_(suggested_dt) {}
    double suggested_dt() const noexcept { return suggested_dt_; }

private:
    double suggested_dt_;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& p) {
        std::string out;
        for (const auto& s : p) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> problems_;
};

}  // namespace radkin
