#pragma once

#include <stdexcept>
#include <string>

namespace ringmap {

// Every failure carries a module-qualified code such as "domain.invalid".
class RingError : public std::runtime_error {
public:
    RingError(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class DomainError : public RingError {
public:
    DomainError(const std::string& what, const std::string& message)
        : RingError("domain." + what, message) {}
};

class ModulusError : public RingError {
public:
    ModulusError(const std::string& what, const std::string& message)
        : RingError("moduli." + what, message) {}
};

class SolverError : public RingError {
public:
    SolverError(const std::string& what, const std::string& message, double residual = 0.0)
        : RingError("solver." + what, message), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class GreensError : public RingError {
public:
    GreensError(const std::string& what, const std::string& message)
        : RingError("greens." + what, message) {}
};

class AffineError : public RingError {
public:
    AffineError(const std::string& what, const std::string& message)
        : RingError("affine." + what, message) {}
};

class ConstructionError : public RingError {
public:
    ConstructionError(const std::string& what, const std::string& message)
        : RingError("construct." + what, message) {}
};

class ValidationError : public RingError {
public:
    ValidationError(const std::string& what, const std::string& message)
        : RingError("validate." + what, message) {}
};

class GateError : public RingError {
public:
    GateError(const std::string& what, const std::string& message)
        : RingError("gate." + what, message) {}
};

class IoError : public RingError {
public:
    IoError(const std::string& what, const std::string& message)
        : RingError("io." + what, message) {}
};

}  // namespace ringmap
